#include "phase/classify_real_mobius.hpp"

#include "phase/linalg.hpp"
#include "phase/witness.hpp"
#include "power_law.hpp"

#include <algorithm>
#include <cmath>

namespace phase {

using detail::RealAlphaConstraint;
using detail::solve_real_power_law;

namespace {

double canonical_angle_mod_pi(double a) {
    double w = std::remainder(a, M_PI); // (-pi/2, pi/2]
    if (w <= -M_PI / 2.0) w += M_PI;
    return w;
}

double angle_gap_mod_pi(double a, double b) { return std::abs(std::remainder(a - b, M_PI)); }

RMat real_part(const CMat& m) { return m.real(); }

} // namespace

std::string to_string(MobiusClass::Kind k) {
    switch (k) {
    case MobiusClass::Kind::Identity: return "identity";
    case MobiusClass::Kind::Elliptic: return "elliptic";
    case MobiusClass::Kind::Parabolic: return "parabolic";
    case MobiusClass::Kind::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

MobiusClass mobius_type(const RMat& m, const ToleranceConfig& tol) {
    double det = m.determinant();
    if (std::abs(det) <= tol.det_floor)
        throw Error(ErrorCode::Singular, "mobius_type: singular matrix");
    RMat n = m / std::sqrt(std::abs(det));
    double d = det > 0 ? 1.0 : -1.0;
    double tr = n.trace();

    MobiusClass out;
    double scalar_gap = (n - 0.5 * tr * RMat::Identity(2, 2)).norm();
    if (d > 0 && scalar_gap <= 1e2 * tol.eig_rel) {
        out.kind = MobiusClass::Kind::Identity;
        return out;
    }

    double disc = tr * tr - 4.0 * d;
    double boundary = 1e2 * tol.eig_rel * std::max(1.0, tr * tr);
    if (disc < -boundary) {
        // complex eigenvalues e^{+-i theta}
        out.kind = MobiusClass::Kind::Elliptic;
        Eigen::EigenSolver<RMat> es(n, true);
        int idx = es.eigenvalues()(0).imag() > 0 ? 0 : 1;
        cplx lam = es.eigenvalues()(idx);
        CVec v = es.eigenvectors().col(idx);
        RMat frame(2, 2);
        frame.col(0) = v.real();
        frame.col(1) = v.imag();
        double theta = std::atan2(lam.imag(), lam.real());
        if (frame.determinant() > 0) {
            theta = -theta;
        } else {
            frame.col(1) = -frame.col(1);
        }
        out.angle = canonical_angle_mod_pi(theta);
        out.normalizer = frame;
        return out;
    }
    if (disc <= boundary) {
        // repeated eigenvalue +-1 with a nilpotent part
        out.kind = MobiusClass::Kind::Parabolic;
        double lam = tr / 2.0;
        RMat u = n / lam;
        RMat shifted = u - RMat::Identity(2, 2);
        // eigenvector spans the kernel of the nilpotent part
        Eigen::JacobiSVD<RMat> svd(shifted, Eigen::ComputeFullV);
        RVec v = svd.matrixV().col(1); // smallest singular value direction
        RVec w_perp(2);
        w_perp << -v(1), v(0);
        RMat frame(2, 2);
        frame.col(0) = v;
        frame.col(1) = w_perp;
        RMat canon = frame.inverse() * u * frame;
        out.shift = canon(0, 1);
        out.normalizer = frame;
        return out;
    }
    out.kind = MobiusClass::Kind::Hyperbolic;
    Eigen::EigenSolver<RMat> es(n, true);
    double l0 = es.eigenvalues()(0).real();
    double l1 = es.eigenvalues()(1).real();
    RVec v0 = es.eigenvectors().col(0).real().normalized();
    RVec v1 = es.eigenvectors().col(1).real().normalized();
    if (std::abs(l0) < std::abs(l1)) {
        std::swap(l0, l1);
        std::swap(v0, v1);
    }
    out.ratio = l0 / l1;
    RMat frame(2, 2);
    frame.col(0) = v0;
    frame.col(1) = v1;
    out.normalizer = frame;
    return out;
}

namespace {

struct MobiusFamily {
    MobiusClass::Kind kind = MobiusClass::Kind::Identity;
    RMat frame = RMat::Identity(2, 2);
    std::vector<double> ratios; // hyperbolic, per generator
    std::vector<double> angles; // elliptic
    std::vector<double> shifts; // parabolic
};

// Common canonical frame of an abelian family sharing one trichotomy kind.
std::optional<MobiusFamily> analyze_family(const GeneratorSet& g,
                                           const std::vector<MobiusClass>& classes,
                                           const ToleranceConfig& tol) {
    MobiusFamily fam;
    int first = -1;
    for (std::size_t r = 0; r < classes.size(); ++r) {
        if (classes[r].kind == MobiusClass::Kind::Identity) continue;
        if (first < 0) {
            first = static_cast<int>(r);
            fam.kind = classes[r].kind;
        } else if (classes[r].kind != fam.kind) {
            return std::nullopt; // mixed kinds
        }
    }
    if (first < 0) {
        fam.kind = MobiusClass::Kind::Identity;
        return fam;
    }
    fam.frame = classes[static_cast<std::size_t>(first)].normalizer;
    RMat finv = fam.frame.inverse();
    const double ftol = 1e3 * tol.eig_rel;

    for (int r = 0; r < g.count(); ++r) {
        RMat n = real_part(g.normalized_generator(r));
        RMat c = finv * n * fam.frame;
        switch (fam.kind) {
        case MobiusClass::Kind::Hyperbolic: {
            if (std::abs(c(0, 1)) > ftol * c.norm() || std::abs(c(1, 0)) > ftol * c.norm())
                return std::nullopt;
            fam.ratios.push_back(c(0, 0) / c(1, 1));
            break;
        }
        case MobiusClass::Kind::Elliptic: {
            double det = c.determinant();
            if (det <= 0) return std::nullopt;
            RMat e = c / std::sqrt(det);
            if (std::abs(e(0, 0) - e(1, 1)) > ftol || std::abs(e(0, 1) + e(1, 0)) > ftol)
                return std::nullopt;
            fam.angles.push_back(canonical_angle_mod_pi(std::atan2(e(1, 0), e(0, 0))));
            break;
        }
        case MobiusClass::Kind::Parabolic: {
            double lam = (c(0, 0) + c(1, 1)) / 2.0;
            RMat u = c / lam;
            if (std::abs(u(1, 0)) > ftol || std::abs(u(0, 0) - 1.0) > ftol ||
                std::abs(u(1, 1) - 1.0) > ftol)
                return std::nullopt;
            fam.shifts.push_back(u(0, 1));
            break;
        }
        case MobiusClass::Kind::Identity: break;
        }
    }
    return fam;
}

} // namespace

Verdict classify_mobius_top(const GeneratorSet& ps, const GeneratorSet& qs,
                            const ToleranceConfig& tol) {
    const Category cat = Category::Topological;
    const int nu = ps.count();

    std::vector<MobiusClass> pc, qc;
    for (int r = 0; r < nu; ++r) {
        pc.push_back(mobius_type(real_part(ps.generators[static_cast<std::size_t>(r)]), tol));
        qc.push_back(mobius_type(real_part(qs.generators[static_cast<std::size_t>(r)]), tol));
        if (pc.back().kind != qc.back().kind)
            return Verdict::not_equivalent(cat, "normal form structures differ at generator " +
                                                    std::to_string(r));
    }

    auto pf = analyze_family(ps, pc, tol);
    auto qf = analyze_family(qs, qc, tol);
    if (!pf || !qf)
        return Verdict::inconclusive(cat, "mixed trichotomy kinds or no common canonical frame");

    if (pf->kind == MobiusClass::Kind::Identity) {
        MobiusMapWitness w;
        w.S = RMat::Identity(2, 2);
        return certified_equivalent(Witness{w}, ps, qs, cat, tol);
    }

    switch (pf->kind) {
    case MobiusClass::Kind::Hyperbolic: {
        auto alpha = solve_real_power_law(pf->ratios, qf->ratios, RealAlphaConstraint::NotMinusOne, tol);
        if (!alpha)
            return Verdict::not_equivalent(cat, "eigenvalue ratios admit no real exponent "
                                                "alpha != -1 with matching signs");
        DiagPowerWitness w;
        w.S = pf->frame.cast<cplx>();
        w.T = qf->frame.cast<cplx>();
        w.perm = {0, 1};
        w.alphas = {cplx(*alpha, 0.0), cplx(*alpha, 0.0)};
        w.gammas = {cplx(1.0, 0.0), cplx(1.0, 0.0)};
        w.projective = true;
        w.swapped_fixed_points = *alpha < -1.0;
        Verdict v = certified_equivalent(Witness{w}, ps, qs, cat, tol);
        if (v.equivalent()) v.details.emplace_back("alpha", cplx(*alpha, 0.0));
        return v;
    }
    case MobiusClass::Kind::Elliptic: {
        const double atol = 64.0 * tol.eig_rel;
        std::optional<Verdict> downgraded;
        for (int sign : {1, -1}) {
            bool ok = true;
            for (int r = 0; r < nu; ++r)
                if (angle_gap_mod_pi(qf->angles[static_cast<std::size_t>(r)],
                                     sign * pf->angles[static_cast<std::size_t>(r)]) > atol) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            CircleMapWitness w;
            w.sign = sign;
            w.shift = 0.0;
            w.S = pf->frame;
            w.T = qf->frame;
            Verdict v = certified_equivalent(Witness{w}, ps, qs, cat, tol);
            if (v.equivalent()) {
                v.details.emplace_back("sign", cplx(static_cast<double>(sign), 0.0));
                return v;
            }
            downgraded = std::move(v);
        }
        if (downgraded) return *downgraded;
        return Verdict::not_equivalent(cat, "rotation angles match in neither orientation");
    }
    case MobiusClass::Kind::Parabolic: {
        double lambda = 1.0;
        bool have = false;
        for (int r = 0; r < nu; ++r) {
            double p = pf->shifts[static_cast<std::size_t>(r)];
            double q = qf->shifts[static_cast<std::size_t>(r)];
            if (pc[static_cast<std::size_t>(r)].kind == MobiusClass::Kind::Identity) continue;
            if (!have) {
                lambda = q / p;
                have = true;
            } else if (std::abs(q - lambda * p) > 64.0 * tol.eig_rel * (1.0 + std::abs(lambda * p))) {
                return Verdict::not_equivalent(cat, "translation lengths admit no common scale");
            }
        }
        MobiusMapWitness w;
        RMat scale = RMat::Identity(2, 2);
        scale(0, 0) = lambda;
        w.S = qf->frame * scale * pf->frame.inverse();
        w.conj = w.S.determinant() < 0;
        Verdict v = certified_equivalent(Witness{w}, ps, qs, cat, tol);
        if (v.equivalent()) v.details.emplace_back("lambda", cplx(lambda, 0.0));
        return v;
    }
    case MobiusClass::Kind::Identity: break;
    }
    return Verdict::inconclusive(cat, "unreachable trichotomy state");
}

Verdict classify_mobius_rigid(const GeneratorSet& ps, const GeneratorSet& qs, Category level,
                              const ToleranceConfig& tol) {
    const int nu = ps.count();
    std::vector<CMat> pn, qn;
    for (int r = 0; r < nu; ++r) {
        double dp = real_part(ps.generators[static_cast<std::size_t>(r)]).determinant();
        double dq = real_part(qs.generators[static_cast<std::size_t>(r)]).determinant();
        if (dp * dq < 0)
            return Verdict::not_equivalent(level, "orientation behavior differs at generator " +
                                                      std::to_string(r));
        pn.push_back(ps.generators[static_cast<std::size_t>(r)] / std::sqrt(std::abs(dp)));
        qn.push_back(qs.generators[static_cast<std::size_t>(r)] / std::sqrt(std::abs(dq)));
    }

    std::vector<int> signs(static_cast<std::size_t>(nu), 0);
    std::optional<Verdict> downgraded;
    while (true) {
        std::vector<CMat> scaled = qn;
        for (int r = 0; r < nu; ++r)
            if (signs[static_cast<std::size_t>(r)]) scaled[static_cast<std::size_t>(r)] *= -1.0;
        auto basis = intertwiner_space(pn, scaled, /*conjugate=*/false, tol, /*real_solutions=*/true);
        if (auto s = contains_invertible(basis, tol, tol.seed)) {
            MobiusMapWitness w;
            w.S = s->real();
            w.conj = w.S.determinant() < 0;
            Verdict v = certified_equivalent(Witness{w}, ps, qs, level, tol);
            if (v.equivalent()) return v;
            downgraded = std::move(v);
        }
        int pos = 0;
        while (pos < nu) {
            if (++signs[static_cast<std::size_t>(pos)] < 2) break;
            signs[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == nu) break;
    }
    if (downgraded) return *downgraded;
    return Verdict::not_equivalent(level, "no invertible real projective intertwiner exists for "
                                          "any sign combination");
}

Verdict classify_real_mobius(const GeneratorSet& ps, const GeneratorSet& qs, Category category,
                             const ToleranceConfig& tol) {
    if (category == Category::RHolomorphic)
        throw Error(ErrorCode::InvalidInput, "R-holomorphic level applies to complex spaces only");
    if (category != Category::Topological) return classify_mobius_rigid(ps, qs, category, tol);

    bool pa = is_abelian(ps, tol);
    bool qa = is_abelian(qs, tol);
    if (pa != qa)
        return Verdict::not_equivalent(Category::Topological,
                                       "one phase group is abelian, the other is not");
    if (pa) return classify_mobius_top(ps, qs, tol);

    Verdict rigid = classify_mobius_rigid(ps, qs, Category::Smooth, tol);
    if (rigid.equivalent()) {
        rigid.category = Category::Topological;
        return rigid;
    }
    return Verdict::inconclusive(Category::Topological,
                                 "non-abelian topological rigidity is proven only in general "
                                 "position; no rigid witness found");
}

} // namespace phase
