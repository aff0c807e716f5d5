#include "phase/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace phase {

namespace {

bool lex_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// vec() is column-major throughout: vec(S P) = (P^T (x) I) vec S,
// vec(Q S) = (I (x) Q) vec S.
CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

SpectralForm eig_decompose(const CMat& m, const ToleranceConfig& tol) {
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "eig_decompose: non-finite entries");
    if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidInput, "eig_decompose: matrix not square");
    const int n = static_cast<int>(m.rows());

    Eigen::ComplexEigenSolver<CMat> es(m, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::InvalidInput, "eig_decompose: eigensolver failed to converge");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return lex_less(es.eigenvalues()(a), es.eigenvalues()(b));
    });

    SpectralForm out;
    out.transform = CMat(n, n);
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[static_cast<std::size_t>(k)] = es.eigenvalues()(order[static_cast<std::size_t>(k)]);
        out.transform.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]).normalized();
    }

    Eigen::JacobiSVD<CMat> svd(out.transform);
    double smin = svd.singularValues()(n - 1);
    double smax = svd.singularValues()(0);
    out.condition_estimate = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    out.diagonalizable = out.condition_estimate <= 1.0 / tol.eig_rel;
    if (out.diagonalizable) {
        CMat d = CMat::Zero(n, n);
        for (int k = 0; k < n; ++k) d(k, k) = out.eigenvalues[static_cast<std::size_t>(k)];
        double scale = std::max(m.norm(), 1e-300);
        CMat rec = out.transform * d * out.transform.inverse();
        if ((m - rec).norm() / scale > std::sqrt(tol.eig_rel)) out.diagonalizable = false;
    }
    return out;
}

std::optional<SimultaneousDiag> simultaneous_diagonalize(std::span<const CMat> family,
                                                         const ToleranceConfig& tol) {
    if (family.empty()) throw Error(ErrorCode::InvalidInput, "simultaneous_diagonalize: empty family");
    const int n = static_cast<int>(family[0].rows());
    Space linear_space = complex_linear(n);
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (!matrices_commute(family[i], family[j], linear_space, tol)) return std::nullopt;

    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
        auto rng = seeded_rng(tol.seed, 0x51D0 + attempt);
        std::normal_distribution<double> dist(0.0, 1.0);
        CMat combo = CMat::Zero(n, n);
        for (const CMat& p : family) combo += cplx(dist(rng), dist(rng)) * p;

        SpectralForm sf = eig_decompose(combo, tol);
        if (!sf.diagonalizable) continue;

        const CMat& s = sf.transform;
        CMat sinv = s.inverse();
        SimultaneousDiag out;
        out.transform = s;
        bool ok = true;
        for (const CMat& p : family) {
            CMat d = sinv * p * s;
            CMat off = d;
            off.diagonal().setZero();
            if (off.norm() > tol.eig_rel * std::max(1.0, p.norm()) * 10.0) {
                ok = false;
                break;
            }
            std::vector<cplx> diag(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) diag[static_cast<std::size_t>(k)] = d(k, k);
            out.eigenvalues.push_back(std::move(diag));
        }
        if (ok) return out;
    }
    return std::nullopt;
}

double RealJordanForm::Block::modulus() const {
    if (kind == Kind::RotationPair) return std::hypot(rot_a, rot_b);
    return std::abs(real_eigen);
}

namespace {

int rank_with_tol(const RMat& m, double cutoff_rel) {
    Eigen::JacobiSVD<RMat> svd(m);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    double cutoff = cutoff_rel * std::max(smax, 1.0);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cutoff) ++r;
    return r;
}

} // namespace

RealJordanForm real_jordan_form(const RMat& m, const ToleranceConfig& tol) {
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "real_jordan_form: non-finite entries");
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n) throw Error(ErrorCode::InvalidInput, "real_jordan_form: matrix not square");

    Eigen::EigenSolver<RMat> es(m, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::InvalidInput, "real_jordan_form: eigensolver failed");

    double scale = std::max(m.norm(), 1.0);
    double group_tol = std::sqrt(tol.eig_rel) * scale;

    // Cluster eigenvalues (conjugate pairs and repeats).
    struct Cluster {
        cplx value;
        int algebraic = 0;
        std::vector<int> members;
    };
    std::vector<Cluster> clusters;
    for (int i = 0; i < n; ++i) {
        cplx lam = es.eigenvalues()(i);
        if (lam.imag() < -group_tol) continue; // keep one of each conjugate pair
        cplx key = std::abs(lam.imag()) <= group_tol ? cplx(lam.real(), 0.0) : lam;
        bool placed = false;
        for (Cluster& c : clusters) {
            if (std::abs(c.value - key) <= group_tol) {
                c.algebraic++;
                c.members.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back(Cluster{key, 1, {i}});
    }

    struct Placed {
        RealJordanForm::Block block;
        RMat cols; // transform columns for this block (may be empty for cells)
    };
    std::vector<Placed> placed;
    bool defective = false;

    for (const Cluster& c : clusters) {
        bool complex_pair = c.value.imag() != 0.0;
        RMat shifted;
        if (complex_pair) {
            // real rank test on (M^2 - 2a M + |lam|^2 I)
            double a = c.value.real();
            double m2 = std::norm(c.value);
            shifted = m * m - 2.0 * a * m + m2 * RMat::Identity(n, n);
        } else {
            shifted = m - c.value.real() * RMat::Identity(n, n);
        }
        int geometric = n - rank_with_tol(shifted, std::sqrt(tol.eig_rel));
        if (complex_pair) geometric /= 2;

        if (geometric >= c.algebraic) {
            // semisimple cluster: one block per eigenvector
            for (int idx : c.members) {
                Placed p;
                if (complex_pair) {
                    CVec v = es.eigenvectors().col(idx);
                    p.block.kind = RealJordanForm::Block::Kind::RotationPair;
                    p.block.rot_a = c.value.real();
                    p.block.rot_b = std::abs(c.value.imag());
                    p.block.size = 2;
                    p.cols = RMat(n, 2);
                    p.cols.col(0) = v.real();
                    p.cols.col(1) = v.imag();
                } else {
                    CVec v = es.eigenvectors().col(idx);
                    p.block.kind = RealJordanForm::Block::Kind::RealEigen;
                    p.block.real_eigen = c.value.real();
                    p.block.size = 1;
                    p.cols = RMat(n, 1);
                    // eigenvector of a real eigenvalue can be scaled real;
                    // for repeated eigenvalues the solver may hand back a
                    // complex mix of two real eigenvectors, either part works
                    int piv = 0;
                    v.cwiseAbs().maxCoeff(&piv);
                    CVec vr = v / v(piv);
                    if (vr.imag().norm() <= 1e-8 * vr.real().norm()) {
                        p.cols.col(0) = vr.real().normalized();
                    } else {
                        RVec re = v.real();
                        RVec im = v.imag();
                        RVec cand = re.norm() >= im.norm() ? re : im;
                        p.cols.col(0) = cand.normalized();
                    }
                }
                placed.push_back(std::move(p));
            }
        } else {
            // defective: cell sizes from the rank sequence of powers
            defective = true;
            std::vector<int> ranks{n};
            RMat pw = RMat::Identity(n, n);
            for (int j = 1; j <= c.algebraic + 1; ++j) {
                pw = pw * shifted;
                ranks.push_back(rank_with_tol(pw, std::sqrt(tol.eig_rel)));
                if (ranks.back() == ranks[ranks.size() - 2]) break;
            }
            // cells of size >= j: ranks[j-1] - ranks[j]
            std::vector<int> at_least;
            for (std::size_t j = 1; j < ranks.size(); ++j) at_least.push_back(ranks[j - 1] - ranks[j]);
            for (std::size_t j = 0; j < at_least.size(); ++j) {
                int exactly = at_least[j] - (j + 1 < at_least.size() ? at_least[j + 1] : 0);
                if (complex_pair) exactly /= 2; // rank drops count both of a conjugate pair
                for (int t = 0; t < exactly; ++t) {
                    Placed p;
                    p.block.kind = RealJordanForm::Block::Kind::JordanCell;
                    p.block.real_eigen = c.value.real();
                    p.block.rot_a = c.value.real();
                    p.block.rot_b = std::abs(c.value.imag());
                    p.block.size = static_cast<int>(j + 1) * (complex_pair ? 2 : 1);
                    placed.push_back(std::move(p));
                }
            }
        }
    }

    auto category = [&](const RealJordanForm::Block& b) {
        double mod = b.modulus();
        if (mod < 1.0 - tol.eig_rel) return 0;
        if (mod > 1.0 + tol.eig_rel) return 2;
        return 1;
    };
    std::stable_sort(placed.begin(), placed.end(), [&](const Placed& x, const Placed& y) {
        const auto& a = x.block;
        const auto& b = y.block;
        int ca = category(a), cb = category(b);
        if (ca != cb) return ca < cb;
        bool rot_a_ = a.kind == RealJordanForm::Block::Kind::RotationPair;
        bool rot_b_ = b.kind == RealJordanForm::Block::Kind::RotationPair;
        if (rot_a_ != rot_b_) return !rot_a_; // real blocks before rotation blocks
        if (a.modulus() != b.modulus()) return a.modulus() < b.modulus();
        double ang_a = std::abs(std::atan2(a.rot_b, a.rot_a));
        double ang_b = std::abs(std::atan2(b.rot_b, b.rot_a));
        return ang_a < ang_b;
    });

    RealJordanForm out;
    out.transform = RMat::Identity(n, n);
    int col = 0;
    bool have_all_cols = !defective;
    for (const Placed& p : placed) {
        out.blocks.push_back(p.block);
        if (have_all_cols) {
            out.transform.block(0, col, n, p.cols.cols()) = p.cols;
            col += static_cast<int>(p.cols.cols());
        }
        double mod = p.block.modulus();
        double blockdet;
        if (p.block.kind == RealJordanForm::Block::Kind::RotationPair)
            blockdet = mod * mod;
        else if (p.block.kind == RealJordanForm::Block::Kind::JordanCell && p.block.rot_b != 0.0)
            blockdet = std::pow(mod * mod, p.block.size / 2);
        else
            blockdet = std::pow(p.block.real_eigen, p.block.size);
        int cat = category(p.block);
        if (cat == 0) {
            out.stable_dim += p.block.size;
            out.det_stable *= blockdet;
        } else if (cat == 2) {
            out.unstable_dim += p.block.size;
            out.det_unstable *= blockdet;
        }
    }
    if (!have_all_cols) {
        // fall back to the orthogonal Schur transform; block data stays exact
        Eigen::RealSchur<RMat> schur(m);
        out.transform = schur.matrixU();
    }
    return out;
}

bool is_simple_collection(std::span<const cplx> lambdas, int s_max, double tol) {
    for (const cplx& l : lambdas)
        if (std::abs(l) <= tol)
            throw Error(ErrorCode::ZeroEigenvalue, "is_simple_collection: zero entry");
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        for (std::size_t l = 0; l < lambdas.size(); ++l) {
            if (k == l) continue;
            cplx ratio = lambdas[k] / lambdas[l];
            for (int s = 1; s <= s_max; ++s) {
                if (std::abs(ratio - static_cast<double>(s)) <= tol) return false;
                if (std::abs(ratio - 1.0 / static_cast<double>(s)) <= tol) return false;
            }
        }
    }
    return true;
}

bool is_strongly_hyperbolic(const RMat& m, const ToleranceConfig& tol) {
    Eigen::EigenSolver<RMat> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) return false;
    const int n = static_cast<int>(m.rows());
    double scale = std::max(m.norm(), 1.0);
    for (int i = 0; i < n; ++i) {
        if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) <= tol.eig_rel * scale) return false;
        for (int j = i + 1; j < n; ++j)
            if (std::abs(es.eigenvalues()(i) - es.eigenvalues()(j)) <= tol.eig_rel * scale)
                return false;
    }
    return true;
}

std::vector<CMat> intertwiner_space(std::span<const CMat> ps, std::span<const CMat> qs,
                                    bool conjugate, const ToleranceConfig& tol,
                                    bool real_solutions) {
    if (ps.size() != qs.size())
        throw Error(ErrorCode::InvalidInput, "intertwiner_space: length mismatch");
    if (ps.empty()) return {};
    const int n = static_cast<int>(ps[0].rows());
    const int nn = n * n;
    CMat id = CMat::Identity(n, n);

    CMat stacked(static_cast<Eigen::Index>(ps.size()) * nn, nn);
    for (std::size_t r = 0; r < ps.size(); ++r) {
        if (ps[r].rows() != n || qs[r].rows() != n || ps[r].cols() != n || qs[r].cols() != n)
            throw Error(ErrorCode::InvalidInput, "intertwiner_space: size mismatch");
        CMat p_eff = conjugate ? ps[r].conjugate() : ps[r];
        stacked.block(static_cast<Eigen::Index>(r) * nn, 0, nn, nn) =
            kron(p_eff.transpose(), id) - kron(id, qs[r]);
    }

    std::vector<CMat> basis;
    auto take_nullspace = [&](const auto& svd, const auto& v_matrix, auto make_mat) {
        double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
        double cutoff = tol.eig_rel * std::max(smax, 1.0);
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            if (svd.singularValues()(i) <= cutoff) basis.push_back(make_mat(v_matrix.col(i)));
        }
    };

    if (real_solutions) {
        if (stacked.imag().cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, stacked.norm()))
            throw Error(ErrorCode::InvalidInput, "intertwiner_space: real solve on complex data");
        RMat rstacked = stacked.real();
        Eigen::JacobiSVD<RMat> svd(rstacked, Eigen::ComputeFullV);
        take_nullspace(svd, svd.matrixV(), [&](const RVec& col) {
            RMat s = Eigen::Map<const RMat>(col.data(), n, n);
            return CMat(s.cast<cplx>());
        });
    } else {
        Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeFullV);
        take_nullspace(svd, svd.matrixV(), [&](const CVec& col) {
            return CMat(Eigen::Map<const CMat>(col.data(), n, n));
        });
    }
    return basis;
}

std::optional<CMat> contains_invertible(std::span<const CMat> basis, const ToleranceConfig& tol,
                                        std::uint64_t seed) {
    if (basis.empty()) return std::nullopt;
    const int n = static_cast<int>(basis[0].rows());

    bool all_real = true;
    for (const CMat& b : basis)
        if (b.imag().cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, b.norm())) all_real = false;

    auto consider = [&](const CMat& cand) -> std::optional<CMat> {
        CMat m = cand / std::max(cand.norm(), 1e-300);
        if (std::abs(m.determinant()) > tol.det_floor) return m;
        return std::nullopt;
    };

    for (const CMat& b : basis)
        if (auto m = consider(b)) return m;

    auto rng = seeded_rng(seed, 0xC0B1);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 64; ++trial) {
        CMat combo = CMat::Zero(n, n);
        for (const CMat& b : basis) {
            cplx c = all_real ? cplx(dist(rng), 0.0) : cplx(dist(rng), dist(rng));
            combo += c * b;
        }
        if (auto m = consider(combo)) return m;
    }

    // deterministic degeneracy certificate: common right or left kernel
    CMat vstack(static_cast<Eigen::Index>(basis.size()) * n, n);
    CMat hstack(n, static_cast<Eigen::Index>(basis.size()) * n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        vstack.block(static_cast<Eigen::Index>(i) * n, 0, n, n) = basis[i];
        hstack.block(0, static_cast<Eigen::Index>(i) * n, n, n) = basis[i];
    }
    Eigen::JacobiSVD<CMat> sv(vstack);
    Eigen::JacobiSVD<CMat> sh(hstack);
    double right_min = sv.singularValues()(sv.singularValues().size() - 1);
    double left_min = sh.singularValues()(sh.singularValues().size() - 1);
    (void)right_min;
    (void)left_min; // certificate confirms degeneracy; absence is returned either way
    return std::nullopt;
}

bool near_rational(double x, int q_max, double tol) {
    for (int q = 1; q <= q_max; ++q) {
        double scaled = x * q;
        if (std::abs(scaled - std::round(scaled)) <= tol * q) return true;
    }
    return false;
}

} // namespace phase
