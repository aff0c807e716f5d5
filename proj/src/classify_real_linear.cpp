#include "phase/classify_real_linear.hpp"

#include "phase/linalg.hpp"
#include "phase/witness.hpp"
#include "power_law.hpp"

#include <algorithm>
#include <functional>

namespace phase {

using detail::RealAlphaConstraint;
using detail::solve_real_power_law;

namespace {

constexpr double kChainResidualBound = 1e-7; // chained radial powers amplify rounding

GeneratorSet real_scalar_set(std::span<const double> vals) {
    GeneratorSet g;
    g.space = real_linear(1);
    for (double v : vals) {
        CMat m(1, 1);
        m(0, 0) = v;
        g.generators.push_back(m);
    }
    return g;
}

// exponent sending multiplier mu to e^{-1} (stable) or e (unstable)
cplx canonical_exponent(cplx mu) {
    double lmod = std::log(std::abs(mu));
    double target = lmod < 0 ? -1.0 : 1.0;
    return cplx(target / lmod - 1.0, -std::arg(mu) / lmod);
}

// power-map composition: first (e1, s1), then (e2, s2)
std::pair<bool, cplx> compose_power(bool e1, cplx s1, bool e2, cplx s2) {
    cplx s = (e2 ? std::conj(s1) : s1) + s2 * (1.0 + s1.real());
    return {e1 != e2, s};
}

cplx inverse_power_exponent(cplx s) { return -s / (1.0 + s.real()); }

// Common real block structure of a commuting strongly hyperbolic family.
struct RealBlock {
    bool rotation = false;
    std::vector<cplx> values;  // multiplier on z per generator (real for 1-dim)
    std::vector<cplx> reduced; // after the generator-1 canonical power map
    cplx exponent;             // generator-1 canonicalizing exponent
    int offset = 0;
};

struct RealBlockDiag {
    RMat transform;
    std::vector<RealBlock> blocks;
};

std::optional<RealBlockDiag> real_block_diagonalize(const GeneratorSet& g,
                                                    const ToleranceConfig& tol) {
    const int n = g.matrix_size();
    const std::size_t nu = static_cast<std::size_t>(g.count());
    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
        auto rng = seeded_rng(tol.seed, 0x9B10 + attempt);
        std::normal_distribution<double> dist(0.0, 1.0);
        RMat combo = RMat::Zero(n, n);
        for (const CMat& p : g.generators) combo += dist(rng) * p.real();

        Eigen::EigenSolver<RMat> es(combo, true);
        if (es.info() != Eigen::Success) continue;

        bool distinct = true;
        for (int i = 0; i < n && distinct; ++i)
            for (int j = i + 1; j < n; ++j)
                if (std::abs(es.eigenvalues()(i) - es.eigenvalues()(j)) <=
                    1e-6 * std::max(1.0, combo.norm())) {
                    distinct = false;
                    break;
                }
        if (!distinct) continue;

        RealBlockDiag out;
        out.transform = RMat(n, n);
        int col = 0;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            cplx lam = es.eigenvalues()(i);
            if (lam.imag() < -1e-12 * std::max(1.0, combo.norm())) continue; // conjugate partner
            CVec v = es.eigenvectors().col(i);
            RealBlock blk;
            blk.offset = col;
            if (std::abs(lam.imag()) <= 1e-12 * std::max(1.0, combo.norm())) {
                blk.rotation = false;
                int piv = 0;
                v.cwiseAbs().maxCoeff(&piv);
                RVec vr = (v / v(piv)).real();
                vr.normalize();
                out.transform.col(col) = vr;
                for (std::size_t r = 0; r < nu; ++r) {
                    RVec pv = g.generators[r].real() * vr;
                    double mu = pv.dot(vr);
                    if ((pv - mu * vr).norm() >
                        1e-7 * std::max(1.0, g.generators[r].norm())) {
                        ok = false;
                        break;
                    }
                    blk.values.emplace_back(mu, 0.0);
                }
                col += 1;
            } else {
                blk.rotation = true;
                RVec re = v.real(), im = v.imag();
                out.transform.col(col) = re;
                out.transform.col(col + 1) = im;
                for (std::size_t r = 0; r < nu; ++r) {
                    CVec pv = g.generators[r].real() * v;
                    cplx mu = v.dot(pv) / v.squaredNorm(); // eigenvalue on v
                    if ((pv - mu * v).norm() > 1e-7 * std::max(1.0, g.generators[r].norm())) {
                        ok = false;
                        break;
                    }
                    // in basis [Re v, Im v] the block multiplies z by conj(mu)
                    blk.values.push_back(std::conj(mu));
                }
                col += 2;
            }
            if (ok) out.blocks.push_back(std::move(blk));
        }
        if (!ok || col != n) continue;
        if (std::abs(out.transform.determinant()) < 1e-10) continue;
        for (RealBlock& blk : out.blocks) {
            blk.exponent = blk.rotation ? canonical_exponent(blk.values[0])
                                        : cplx(canonical_exponent(blk.values[0]).real(), 0.0);
            for (const cplx& m : blk.values)
                blk.reduced.push_back(m * std::exp(blk.exponent * std::log(std::abs(m))));
        }
        return out;
    }
    return std::nullopt;
}

struct Canonicalization {
    std::vector<CanonicalChainWitness::Step> steps;
    int stable_dim = 0;
    bool stable_leftover_negative = false;
    bool unstable_leftover_negative = false;
};

// Chain conjugating the action of a strongly hyperbolic matrix to the
// canonical diag(e^{-1},...,[-e^{-1}], e,...,[-e]) form.
Canonicalization canonicalize_hyperbolic(const RealJordanForm& j) {
    const int n = static_cast<int>(j.transform.rows());
    Canonicalization out;
    out.steps.emplace_back(RMat(j.transform.inverse()));

    CanonicalChainWitness::PowerLayer pow;
    struct Coord {
        int idx;
        bool stable;
        bool negative;
    };
    std::vector<Coord> coords;
    int off = 0;
    for (const auto& b : j.blocks) {
        bool stable = b.modulus() < 1.0;
        if (b.kind == RealJordanForm::Block::Kind::RealEigen) {
            double lam = b.real_eigen;
            cplx alpha = canonical_exponent(cplx(lam, 0.0));
            pow.push_back({off, 1, cplx(alpha.real(), 0.0), false});
            coords.push_back({off, stable, lam < 0});
            off += 1;
        } else {
            cplx mu(b.rot_a, -b.rot_b); // multiplier on z in the [Re v, Im v] basis
            pow.push_back({off, 2, canonical_exponent(mu), false});
            coords.push_back({off, stable, false});
            coords.push_back({off + 1, stable, false});
            off += 2;
        }
    }
    out.steps.emplace_back(std::move(pow));

    // permutation: stable positives, stable negatives, unstable positives,
    // unstable negatives
    std::vector<int> order;
    int ns = 0, nu_neg = 0;
    for (const Coord& c : coords)
        if (c.stable && !c.negative) order.push_back(c.idx);
    for (const Coord& c : coords)
        if (c.stable && c.negative) {
            order.push_back(c.idx);
            ++ns;
        }
    out.stable_dim = 0;
    for (const Coord& c : coords)
        if (c.stable) ++out.stable_dim;
    for (const Coord& c : coords)
        if (!c.stable && !c.negative) order.push_back(c.idx);
    for (const Coord& c : coords)
        if (!c.stable && c.negative) {
            order.push_back(c.idx);
            ++nu_neg;
        }
    RMat perm = RMat::Zero(n, n);
    for (int t = 0; t < n; ++t) perm(t, order[static_cast<std::size_t>(t)]) = 1.0;
    out.steps.emplace_back(std::move(perm));

    // pair up negative axes with half-turn twists z |z|^{i pi}
    CanonicalChainWitness::PowerLayer twists;
    int stable_neg_start = out.stable_dim - ns;
    for (int t = 0; t + 1 < ns; t += 2)
        twists.push_back({stable_neg_start + t, 2, cplx(0.0, M_PI), false});
    int unstable_neg_start = n - nu_neg;
    for (int t = 0; t + 1 < nu_neg; t += 2)
        twists.push_back({unstable_neg_start + t, 2, cplx(0.0, M_PI), false});
    if (!twists.empty()) out.steps.emplace_back(std::move(twists));

    out.stable_leftover_negative = (ns % 2) != 0;
    out.unstable_leftover_negative = (nu_neg % 2) != 0;
    return out;
}

std::vector<CanonicalChainWitness::Step> inverted_steps(
    const std::vector<CanonicalChainWitness::Step>& steps) {
    CanonicalChainWitness chain{steps};
    Witness inv = invert_witness(Witness{chain}, real_linear(1));
    return std::get<CanonicalChainWitness>(inv.value).steps;
}

} // namespace

Verdict classify_real_scalar_top(std::span<const double> ps, std::span<const double> qs,
                                 const ToleranceConfig& tol) {
    const Category cat = Category::Topological;
    if (ps.size() != qs.size()) return Verdict::not_equivalent(cat, "generator counts differ");
    auto alpha = solve_real_power_law(ps, qs, RealAlphaConstraint::GreaterMinusOne, tol);
    if (!alpha)
        return Verdict::not_equivalent(cat, "no real alpha > -1 satisfies q_r = p_r |p_r|^alpha "
                                            "with matching signs");
    CanonicalChainWitness w;
    w.steps.emplace_back(CanonicalChainWitness::PowerLayer{{0, 1, cplx(*alpha, 0.0), false}});
    Verdict v = certified_equivalent(Witness{w}, real_scalar_set(ps), real_scalar_set(qs), cat, tol);
    if (v.equivalent()) v.details.emplace_back("alpha", cplx(*alpha, 0.0));
    return v;
}

Verdict classify_single_hyperbolic(const RMat& p, const RMat& q, const ToleranceConfig& tol) {
    const Category cat = Category::Topological;
    if (!is_strongly_hyperbolic(p, tol) || !is_strongly_hyperbolic(q, tol))
        return Verdict::inconclusive(cat, "strong hyperbolicity premise fails");

    RealJordanForm jp = real_jordan_form(p, tol);
    RealJordanForm jq = real_jordan_form(q, tol);
    if (jp.stable_dim != jq.stable_dim)
        return Verdict::not_equivalent(cat, "stable dimensions differ");
    if (jp.det_stable * jq.det_stable < 0)
        return Verdict::not_equivalent(cat, "stable orientations differ");
    if (jp.det_unstable * jq.det_unstable < 0)
        return Verdict::not_equivalent(cat, "unstable orientations differ");

    Canonicalization cp = canonicalize_hyperbolic(jp);
    Canonicalization cq = canonicalize_hyperbolic(jq);

    CanonicalChainWitness w;
    w.steps = cp.steps;
    auto back = inverted_steps(cq.steps);
    w.steps.insert(w.steps.end(), back.begin(), back.end());

    GeneratorSet gp, gq;
    gp.space = gq.space = real_linear(static_cast<int>(p.rows()));
    gp.generators.push_back(p.cast<cplx>());
    gq.generators.push_back(q.cast<cplx>());
    return certified_equivalent(Witness{w}, gp, gq, cat, tol, kChainResidualBound);
}

Verdict classify_real_abelian_top(const GeneratorSet& ps, const GeneratorSet& qs,
                                  const ToleranceConfig& tol) {
    const Category cat = Category::Topological;
    const int n = ps.matrix_size();
    const int nu = ps.count();

    // hyperbolicity of every generator; generator 1 may repeat eigenvalues
    // (the reduction target allows scalars), the rest must be strongly
    // hyperbolic as in the lemmas
    for (const auto& g : {std::cref(ps), std::cref(qs)}) {
        for (int r = 0; r < nu; ++r) {
            RMat m = g.get().generators[static_cast<std::size_t>(r)].real();
            Eigen::EigenSolver<RMat> es(m, false);
            double scale = std::max(m.norm(), 1.0);
            for (int i = 0; i < es.eigenvalues().size(); ++i)
                if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) <= tol.eig_rel * scale)
                    return Verdict::inconclusive(cat, "unit-modulus eigenvalue: hyperbolicity fails");
            if (r >= 1 && !is_strongly_hyperbolic(m, tol))
                return Verdict::inconclusive(cat, "strong hyperbolicity premise fails beyond "
                                                  "generator 1");
        }
    }
    if (!is_abelian(ps, tol) || !is_abelian(qs, tol))
        return Verdict::inconclusive(cat, "families must be abelian");

    auto pbd = real_block_diagonalize(ps, tol);
    auto qbd = real_block_diagonalize(qs, tol);
    if (!pbd || !qbd)
        return Verdict::inconclusive(cat, "no aligned real block-diagonal form found");

    // non-resonance premises on the reduced towers of generators r >= 2
    for (const auto& bd : {std::cref(*pbd), std::cref(*qbd)}) {
        const auto& blocks = bd.get().blocks;
        for (int r = 1; r < nu; ++r) {
            for (std::size_t k = 0; k < blocks.size(); ++k) {
                if (!blocks[k].rotation) continue;
                double ang = std::arg(blocks[k].reduced[static_cast<std::size_t>(r)]);
                if (near_rational(ang / M_PI, tol.s_max, 1e2 * tol.eig_rel))
                    return Verdict::inconclusive(cat, "rotation angle over pi is rationally "
                                                      "approximable: non-resonance premise fails");
                for (std::size_t l = 0; l < blocks.size(); ++l) {
                    if (l == k || !blocks[l].rotation) continue;
                    cplx ratio = std::log(blocks[k].reduced[static_cast<std::size_t>(r)]) /
                                 std::log(blocks[l].reduced[static_cast<std::size_t>(r)]);
                    if (std::abs(ratio.imag()) <= 1e2 * tol.eig_rel &&
                        near_rational(ratio.real(), tol.s_max, 1e2 * tol.eig_rel))
                        return Verdict::inconclusive(cat, "log ratio of rotation blocks is "
                                                          "rationally approximable");
                }
            }
        }
    }

    // structure match
    auto count_rotations = [](const RealBlockDiag& bd) {
        int c = 0;
        for (const auto& b : bd.blocks)
            if (b.rotation) ++c;
        return c;
    };
    if (count_rotations(*pbd) != count_rotations(*qbd) || pbd->blocks.size() != qbd->blocks.size())
        return Verdict::not_equivalent(cat, "real block structures differ");

    // match reduced towers exactly (per-block conjugation allowed for
    // rotation blocks: the real Jordan frame fixes them only up to it)
    const double match_tol = 64.0 * tol.eig_rel;
    auto towers_match = [&](const RealBlock& a, const RealBlock& b, bool conj_flag) {
        for (int r = 0; r < nu; ++r) {
            cplx va = a.reduced[static_cast<std::size_t>(r)];
            cplx vb = b.reduced[static_cast<std::size_t>(r)];
            if (conj_flag) vb = std::conj(vb);
            if (std::abs(va - vb) > match_tol * (1.0 + std::abs(va))) return false;
        }
        return true;
    };

    const std::size_t nb = pbd->blocks.size();
    std::vector<int> match(nb, -1);
    std::vector<bool> conj_flags(nb, false);
    std::vector<bool> used(nb, false);
    std::function<bool(std::size_t)> extend = [&](std::size_t k) -> bool {
        if (k == nb) return true;
        for (std::size_t j = 0; j < nb; ++j) {
            if (used[j] || pbd->blocks[k].rotation != qbd->blocks[j].rotation) continue;
            for (bool cf : pbd->blocks[k].rotation ? std::vector<bool>{false, true}
                                                   : std::vector<bool>{false}) {
                if (!towers_match(pbd->blocks[k], qbd->blocks[j], cf)) continue;
                used[j] = true;
                match[k] = static_cast<int>(j);
                conj_flags[k] = cf;
                if (extend(k + 1)) return true;
                used[j] = false;
            }
        }
        return false;
    };
    if (!extend(0))
        return Verdict::not_equivalent(cat, "reduced block towers do not match exactly under any "
                                            "block permutation");

    // witness: S_P^{-1}, composite block powers, block permutation, S_Q
    CanonicalChainWitness w;
    w.steps.emplace_back(RMat(pbd->transform.inverse()));
    CanonicalChainWitness::PowerLayer layer;
    RMat perm = RMat::Zero(n, n);
    for (std::size_t k = 0; k < nb; ++k) {
        const RealBlock& bp = pbd->blocks[k];
        const RealBlock& bq = qbd->blocks[static_cast<std::size_t>(match[k])];
        auto [e1, s1] = compose_power(false, bp.exponent, conj_flags[k], cplx(0.0, 0.0));
        auto [e2, s2] = compose_power(e1, s1, false, inverse_power_exponent(bq.exponent));
        int dim = bp.rotation ? 2 : 1;
        layer.push_back({bp.offset, dim, s2, e2});
        for (int t = 0; t < dim; ++t) perm(bq.offset + t, bp.offset + t) = 1.0;
    }
    w.steps.emplace_back(std::move(layer));
    w.steps.emplace_back(std::move(perm));
    w.steps.emplace_back(RMat(qbd->transform));
    return certified_equivalent(Witness{w}, ps, qs, cat, tol, kChainResidualBound);
}

Verdict classify_real_rigid(const GeneratorSet& ps, const GeneratorSet& qs,
                            const ToleranceConfig& tol, Category category) {
    auto basis = intertwiner_space(ps.generators, qs.generators, /*conjugate=*/false, tol,
                                   /*real_solutions=*/true);
    auto combo = contains_invertible(basis, tol, tol.seed);
    if (!combo)
        return Verdict::not_equivalent(category, "no invertible real intertwiner exists");
    LinearMapWitness w;
    w.S = *combo;
    Verdict v = certified_equivalent(Witness{w}, ps, qs, category, tol);
    if (v.equivalent()) return v;
    return Verdict::inconclusive(category, v.unmet_premise);
}

Verdict classify_real_linear(const GeneratorSet& ps, const GeneratorSet& qs, Category category,
                             const ToleranceConfig& tol) {
    if (category == Category::RHolomorphic)
        throw Error(ErrorCode::InvalidInput, "R-holomorphic level applies to complex spaces only");
    if (category != Category::Topological) return classify_real_rigid(ps, qs, tol, category);

    if (ps.matrix_size() == 1) {
        std::vector<double> pv, qv;
        for (const CMat& m : ps.generators) pv.push_back(m(0, 0).real());
        for (const CMat& m : qs.generators) qv.push_back(m(0, 0).real());
        return classify_real_scalar_top(pv, qv, tol);
    }

    bool pa = is_abelian(ps, tol);
    bool qa = is_abelian(qs, tol);
    if (pa != qa)
        return Verdict::not_equivalent(Category::Topological,
                                       "one phase group is abelian, the other is not");
    if (ps.count() == 1 && qs.count() == 1)
        return classify_single_hyperbolic(ps.generators[0].real(), qs.generators[0].real(), tol);
    if (pa) return classify_real_abelian_top(ps, qs, tol);

    Verdict rigid = classify_real_rigid(ps, qs, tol, Category::Topological);
    if (rigid.equivalent()) return rigid;
    return Verdict::inconclusive(Category::Topological,
                                 "no topological criterion covers non-abelian real families; "
                                 "no rigid witness found");
}

} // namespace phase
