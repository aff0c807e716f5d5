#include "phase/core.hpp"

#include <cmath>

namespace phase {

int Space::matrix_size() const {
    switch (kind) {
    case SpaceKind::ComplexLinear:
    case SpaceKind::RealLinear:
        return n;
    case SpaceKind::ComplexProjective:
        return n + 1;
    case SpaceKind::RealMobius:
        return 2;
    }
    return n;
}

Space complex_linear(int n) { return Space{SpaceKind::ComplexLinear, n}; }
Space complex_projective(int n) { return Space{SpaceKind::ComplexProjective, n}; }
Space real_linear(int n) { return Space{SpaceKind::RealLinear, n}; }
Space real_mobius() { return Space{SpaceKind::RealMobius, 1}; }

std::string to_string(SpaceKind kind) {
    switch (kind) {
    case SpaceKind::ComplexLinear: return "complex_linear";
    case SpaceKind::ComplexProjective: return "complex_projective";
    case SpaceKind::RealLinear: return "real_linear";
    case SpaceKind::RealMobius: return "real_mobius";
    }
    return "?";
}

std::string to_string(Category c) {
    switch (c) {
    case Category::Topological: return "topological";
    case Category::Smooth: return "smooth";
    case Category::RHolomorphic: return "r_holomorphic";
    case Category::Holomorphic: return "holomorphic";
    }
    return "?";
}

std::string to_string(Status s) {
    switch (s) {
    case Status::Equivalent: return "equivalent";
    case Status::NotEquivalent: return "not_equivalent";
    case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

bool category_implies(Category a, Category b) {
    if (a == b) return true;
    if (a == Category::Holomorphic) return true;
    if (b == Category::Topological) return true;
    return false;
}

bool category_implies(Category a, Category b, const Space& space) {
    if (category_implies(a, b)) return true;
    if (!space.is_real()) {
        // Smooth and RHolomorphic conjugacy are decided identically on
        // complex spaces.
        if ((a == Category::Smooth && b == Category::RHolomorphic) ||
            (a == Category::RHolomorphic && b == Category::Smooth))
            return true;
    }
    return false;
}

void ToleranceConfig::validate() const {
    if (!(eig_rel > 0 && det_floor > 0 && residual > 0 && ode_rel > 0))
        throw Error(ErrorCode::InvalidInput, "tolerances must be positive");
    if (s_max < 1 || k_max < 1 || samples < 1)
        throw Error(ErrorCode::InvalidInput, "S_max, K_max and samples must be >= 1");
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
    // splitmix-style mixing so distinct streams decorrelate even for seed 0
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return std::mt19937_64(z);
}

void GeneratorSet::validate(const ToleranceConfig& tol) const {
    const int m = matrix_size();
    if (space.n < 1) throw Error(ErrorCode::InvalidInput, "space dimension must be >= 1");
    for (int r = 0; r < count(); ++r) {
        const CMat& g = generators[r];
        if (g.rows() != m || g.cols() != m)
            throw Error(ErrorCode::InvalidInput, "generator " + std::to_string(r) +
                                                     " has wrong size for the declared space");
        if (!g.allFinite())
            throw Error(ErrorCode::NonFinite, "generator " + std::to_string(r) + " is not finite");
        if (space.is_real() && g.imag().cwiseAbs().maxCoeff() > tol.eig_rel * (1.0 + g.cwiseAbs().maxCoeff()))
            throw Error(ErrorCode::InvalidInput,
                        "generator " + std::to_string(r) + " is not real for a real space");
        if (std::abs(g.determinant()) <= tol.det_floor)
            throw Error(ErrorCode::Singular, "generator " + std::to_string(r) + " is singular");
    }
    if (!labels.empty() && static_cast<int>(labels.size()) != count())
        throw Error(ErrorCode::InvalidInput, "label count does not match generator count");
}

CMat GeneratorSet::normalized_generator(int r) const {
    const CMat& g = generators.at(static_cast<std::size_t>(r));
    if (!space.is_projective()) return g;
    const int m = static_cast<int>(g.rows());
    cplx det = g.determinant();
    if (space.kind == SpaceKind::RealMobius) {
        double scale = std::sqrt(std::abs(det));
        CMat out = g / scale;
        // fix the +/- representative: positive trace, else first nonzero entry
        double tr = out.trace().real();
        if (tr < -1e-14) return -out;
        if (std::abs(tr) <= 1e-14) {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    if (std::abs(out(i, j)) > 1e-14) return out(i, j).real() > 0 ? out : -out;
        }
        return out;
    }
    cplx root = std::pow(det, 1.0 / static_cast<double>(m));
    return g / root;
}

bool matrices_commute(const CMat& a, const CMat& b, const Space& space,
                      const ToleranceConfig& tol) {
    CMat ab = a * b;
    CMat ba = b * a;
    double scale = a.norm() * b.norm();
    if (scale == 0.0) return true;
    if (!space.is_projective()) return (ab - ba).norm() <= tol.eig_rel * scale;
    // Projective actions commute when AB and BA agree up to a scalar.
    cplx num = (ba.adjoint() * ab).trace();
    double den = ba.squaredNorm();
    cplx c = den > 0 ? num / den : cplx(1.0, 0.0);
    return (ab - c * ba).norm() <= tol.eig_rel * scale;
}

bool is_abelian(const GeneratorSet& g, const ToleranceConfig& tol) {
    for (int i = 0; i < g.count(); ++i)
        for (int j = i + 1; j < g.count(); ++j)
            if (!matrices_commute(g.generators[i], g.generators[j], g.space, tol)) return false;
    return true;
}

Verdict Verdict::not_equivalent(Category cat, std::string why) {
    Verdict v;
    v.status = Status::NotEquivalent;
    v.category = cat;
    v.reason = std::move(why);
    return v;
}

Verdict Verdict::inconclusive(Category cat, std::string premise) {
    Verdict v;
    v.status = Status::Inconclusive;
    v.category = cat;
    v.unmet_premise = std::move(premise);
    return v;
}

} // namespace phase
