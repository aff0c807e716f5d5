#include "phase/witness.hpp"

#include <cmath>

namespace phase {

namespace {

// c(w)|w|^alpha with the continuous extension 0 -> 0 at the fixed point.
cplx power_map(cplx w, cplx alpha, bool conj) {
    if (w == cplx(0.0, 0.0)) return w;
    cplx base = conj ? std::conj(w) : w;
    return base * std::exp(alpha * std::log(std::abs(w)));
}

std::vector<int> inverse_perm(const std::vector<int>& p) {
    std::vector<int> inv(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) inv[static_cast<std::size_t>(p[k])] = static_cast<int>(k);
    return inv;
}

cplx inverse_exponent(cplx alpha, bool conj) {
    double denom = 1.0 + alpha.real();
    cplx a = conj ? std::conj(alpha) : alpha;
    return -a / denom;
}

CVec eval_diag_power(const DiagPowerWitness& w, const CVec& x) {
    if (w.S.rows() != x.size() || w.T.rows() != x.size() ||
        w.perm.size() != static_cast<std::size_t>(x.size()) || w.alphas.size() != w.perm.size())
        throw Error(ErrorCode::InvalidInput, "diag_power witness does not fit the point dimension");
    CVec y = w.S.inverse() * x;
    CVec xi = CVec::Zero(y.size());
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        cplx gamma = w.gammas.empty() ? cplx(1.0, 0.0) : w.gammas[static_cast<std::size_t>(k)];
        xi(w.perm[static_cast<std::size_t>(k)]) =
            gamma * power_map(y(k), w.alphas[static_cast<std::size_t>(k)], w.conj);
    }
    return w.T * xi;
}

CVec eval_canonical_chain(const CanonicalChainWitness& w, const CVec& x) {
    RVec y = x.real();
    for (const auto& step : w.steps) {
        if (std::holds_alternative<RMat>(step)) {
            if (std::get<RMat>(step).cols() != y.size())
                throw Error(ErrorCode::InvalidInput, "chain step does not fit the point dimension");
            y = std::get<RMat>(step) * y;
        } else {
            for (const auto& b : std::get<CanonicalChainWitness::PowerLayer>(step)) {
                if (b.offset + b.dim > y.size())
                    throw Error(ErrorCode::InvalidInput, "chain block exceeds the point dimension");
                if (b.dim == 1) {
                    cplx v = power_map(cplx(y(b.offset), 0.0), b.alpha.real(), false);
                    y(b.offset) = v.real();
                } else {
                    cplx v = power_map(cplx(y(b.offset), y(b.offset + 1)), b.alpha, b.conj);
                    y(b.offset) = v.real();
                    y(b.offset + 1) = v.imag();
                }
            }
        }
    }
    return y.cast<cplx>();
}

double circle_angle(const CVec& x) {
    // extended real line as a circle: t = 2 arctan(v1/v2), well defined mod 2pi
    return 2.0 * std::atan2(x(0).real(), x(1).real());
}

CVec eval_circle_map(const CircleMapWitness& w, const CVec& x) {
    RVec u = w.S.inverse() * x.real();
    double t = 2.0 * std::atan2(u(0), u(1));
    double tp = w.sign * t + w.shift;
    RVec v(2);
    v << std::sin(tp / 2.0), std::cos(tp / 2.0);
    return (w.T * v).cast<cplx>();
}

} // namespace

CVec evaluate_witness(const Witness& w, const Space& space, const CVec& x) {
    if (w.is<DiagPowerWitness>()) return eval_diag_power(w.as<DiagPowerWitness>(), x);
    if (w.is<LinearMapWitness>()) {
        const auto& lw = w.as<LinearMapWitness>();
        return lw.S * (lw.conj ? x.conjugate() : x);
    }
    if (w.is<RLinearMapWitness>()) {
        const auto& rw = w.as<RLinearMapWitness>();
        return rw.A * x + rw.B * x.conjugate();
    }
    if (w.is<MobiusMapWitness>()) return w.as<MobiusMapWitness>().S.cast<cplx>() * x;
    if (w.is<CircleMapWitness>()) return eval_circle_map(w.as<CircleMapWitness>(), x);
    if (w.is<CanonicalChainWitness>()) return eval_canonical_chain(w.as<CanonicalChainWitness>(), x);
    if (w.is<IndexMapWitness>()) {
        const auto& iw = w.as<IndexMapWitness>();
        if (!iw.inner) throw Error(ErrorCode::InvalidInput, "index-map witness without inner map");
        return evaluate_witness(*iw.inner, space, x);
    }
    throw Error(ErrorCode::InvalidInput, "unknown witness variant");
}

Witness invert_witness(const Witness& w, const Space& space) {
    if (w.is<DiagPowerWitness>()) {
        const auto& d = w.as<DiagPowerWitness>();
        DiagPowerWitness inv;
        inv.S = d.T;
        inv.T = d.S;
        inv.perm = inverse_perm(d.perm);
        inv.conj = d.conj;
        inv.projective = d.projective;
        inv.swapped_fixed_points = d.swapped_fixed_points;
        inv.alphas.resize(d.alphas.size());
        inv.gammas.resize(d.alphas.size());
        for (std::size_t k = 0; k < d.alphas.size(); ++k) {
            cplx beta = inverse_exponent(d.alphas[k], d.conj);
            cplx gamma = d.gammas.empty() ? cplx(1.0, 0.0) : d.gammas[k];
            std::size_t slot = static_cast<std::size_t>(d.perm[k]);
            inv.alphas[slot] = beta;
            cplx ginv = 1.0 / gamma;
            inv.gammas[slot] = (d.conj ? std::conj(ginv) : ginv) *
                               std::exp(-beta * std::log(std::abs(gamma)));
        }
        return Witness{inv};
    }
    if (w.is<LinearMapWitness>()) {
        const auto& l = w.as<LinearMapWitness>();
        LinearMapWitness inv;
        inv.projective = l.projective;
        inv.conj = l.conj;
        CMat si = l.S.inverse();
        inv.S = l.conj ? CMat(si.conjugate()) : si;
        return Witness{inv};
    }
    if (w.is<RLinearMapWitness>()) {
        const auto& r = w.as<RLinearMapWitness>();
        const Eigen::Index n = r.A.rows();
        RMat realified(2 * n, 2 * n);
        realified.block(0, 0, n, n) = r.A.real() + r.B.real();
        realified.block(0, n, n, n) = -r.A.imag() + r.B.imag();
        realified.block(n, 0, n, n) = r.A.imag() + r.B.imag();
        realified.block(n, n, n, n) = r.A.real() - r.B.real();
        RMat ri = realified.inverse();
        RLinearMapWitness inv;
        inv.A = CMat(n, n);
        inv.B = CMat(n, n);
        inv.A.real() = 0.5 * (ri.block(0, 0, n, n) + ri.block(n, n, n, n));
        inv.A.imag() = 0.5 * (ri.block(n, 0, n, n) - ri.block(0, n, n, n));
        inv.B.real() = 0.5 * (ri.block(0, 0, n, n) - ri.block(n, n, n, n));
        inv.B.imag() = 0.5 * (ri.block(n, 0, n, n) + ri.block(0, n, n, n));
        return Witness{inv};
    }
    if (w.is<MobiusMapWitness>()) {
        MobiusMapWitness inv = w.as<MobiusMapWitness>();
        inv.S = inv.S.inverse().eval();
        return Witness{inv};
    }
    if (w.is<CircleMapWitness>()) {
        const auto& c = w.as<CircleMapWitness>();
        CircleMapWitness inv;
        inv.sign = c.sign;
        inv.shift = -c.sign * c.shift;
        inv.S = c.T;
        inv.T = c.S;
        return Witness{inv};
    }
    if (w.is<CanonicalChainWitness>()) {
        const auto& c = w.as<CanonicalChainWitness>();
        CanonicalChainWitness inv;
        for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) {
            if (std::holds_alternative<RMat>(*it)) {
                inv.steps.emplace_back(RMat(std::get<RMat>(*it).inverse()));
            } else {
                CanonicalChainWitness::PowerLayer layer;
                for (const auto& b : std::get<CanonicalChainWitness::PowerLayer>(*it)) {
                    CanonicalChainWitness::Block ib = b;
                    ib.alpha = inverse_exponent(b.alpha, b.conj);
                    layer.push_back(ib);
                }
                inv.steps.emplace_back(std::move(layer));
            }
        }
        return Witness{inv};
    }
    if (w.is<IndexMapWitness>()) {
        const auto& iw = w.as<IndexMapWitness>();
        if (!iw.inner) throw Error(ErrorCode::InvalidInput, "index-map witness without inner map");
        IndexMapWitness inv;
        inv.mapping = inverse_perm(iw.mapping);
        if (!iw.inverted.empty()) {
            inv.inverted.resize(iw.inverted.size());
            for (std::size_t r = 0; r < iw.mapping.size(); ++r)
                inv.inverted[static_cast<std::size_t>(iw.mapping[r])] = iw.inverted[r];
        }
        inv.inner = std::make_shared<Witness>(invert_witness(*iw.inner, space));
        return Witness{inv};
    }
    throw Error(ErrorCode::InvalidInput, "unknown witness variant");
}

CVec apply_generator(const Space& space, const CMat& g, const CVec& x) {
    (void)space; // homogeneous representatives make every action linear
    return g * x;
}

double chart_distance(const Space& space, const CVec& a, const CVec& b, const CVec& reference) {
    switch (space.kind) {
    case SpaceKind::ComplexLinear:
    case SpaceKind::RealLinear:
        return (a - b).norm() / (1.0 + reference.norm());
    case SpaceKind::ComplexProjective: {
        double na = a.norm(), nb = b.norm();
        if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ChartOverflow, "zero homogeneous vector");
        // sine of the Fubini-Study angle via the orthogonal component; stays
        // accurate near zero where 1 - cos^2 cancels
        CVec u = a / na;
        CVec v = b / nb;
        return (v - u * u.dot(v)).norm();
    }
    case SpaceKind::RealMobius: {
        double ta = circle_angle(a);
        double tb = circle_angle(b);
        double d = std::remainder(ta - tb, 2.0 * M_PI);
        return std::abs(d);
    }
    }
    return 0.0;
}

std::vector<CVec> sample_points(const Space& space, const ToleranceConfig& tol,
                                std::uint64_t stream) {
    auto rng = seeded_rng(tol.seed, 0x5A3F + stream);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int m = space.matrix_size();
    std::vector<CVec> out;
    out.reserve(static_cast<std::size_t>(tol.samples));
    for (int s = 0; s < tol.samples; ++s) {
        CVec x(m);
        switch (space.kind) {
        case SpaceKind::ComplexLinear: {
            for (int k = 0; k < m; ++k) x(k) = cplx(gauss(rng), gauss(rng));
            double r = std::pow(10.0, -3.0 + 6.0 * unif(rng)); // log-uniform in [1e-3, 1e3]
            x *= r / x.norm();
            break;
        }
        case SpaceKind::RealLinear: {
            for (int k = 0; k < m; ++k) x(k) = cplx(gauss(rng), 0.0);
            double r = std::pow(10.0, -3.0 + 6.0 * unif(rng));
            x *= r / x.norm();
            break;
        }
        case SpaceKind::ComplexProjective: {
            for (int k = 0; k < m; ++k) x(k) = cplx(gauss(rng), gauss(rng));
            x.normalize();
            break;
        }
        case SpaceKind::RealMobius: {
            double t = -M_PI + 2.0 * M_PI * unif(rng);
            x(0) = std::sin(t / 2.0);
            x(1) = std::cos(t / 2.0);
            break;
        }
        }
        out.push_back(std::move(x));
    }
    return out;
}

ResidualReport verify_conjugacy(const Witness& w, const GeneratorSet& g1, const GeneratorSet& g2,
                                const ToleranceConfig& tol) {
    if (w.is<IndexMapWitness>()) {
        const auto& iw = w.as<IndexMapWitness>();
        GeneratorSet picked;
        picked.space = g2.space;
        for (std::size_t r = 0; r < iw.mapping.size(); ++r) {
            CMat m = g2.generators.at(static_cast<std::size_t>(iw.mapping[r]));
            if (!iw.inverted.empty() && iw.inverted[r]) m = m.inverse().eval();
            picked.generators.push_back(std::move(m));
        }
        return verify_conjugacy(*iw.inner, g1, picked, tol);
    }
    if (!(g1.space == g2.space))
        throw Error(ErrorCode::SpaceMismatch, "verify_conjugacy: spaces differ");
    if (g1.count() != g2.count())
        throw Error(ErrorCode::InvalidInput, "verify_conjugacy: generator counts differ");

    ResidualReport report;
    report.samples = tol.samples;
    auto pts = sample_points(g1.space, tol);
    for (const CVec& x : pts) {
        CVec fx = evaluate_witness(w, g1.space, x);
        for (int r = 0; r < g1.count(); ++r) {
            CVec fpx = evaluate_witness(w, g1.space, apply_generator(g1.space, g1.generators[static_cast<std::size_t>(r)], x));
            CVec qfx = apply_generator(g2.space, g2.generators[static_cast<std::size_t>(r)], fx);
            double res = chart_distance(g1.space, fpx, qfx, fx);
            if (res > report.max_residual) report.max_residual = res;
        }
    }
    return report;
}

Verdict certified_equivalent(Witness w, const GeneratorSet& g1, const GeneratorSet& g2,
                             Category category, const ToleranceConfig& tol,
                             double residual_bound) {
    double bound = residual_bound > 0.0 ? residual_bound : tol.residual;
    ResidualReport report = verify_conjugacy(w, g1, g2, tol);
    Verdict v;
    v.category = category;
    v.seed = tol.seed;
    v.residual_report = report;
    if (report.max_residual <= bound) {
        v.status = Status::Equivalent;
        v.witness = std::move(w);
    } else {
        v.status = Status::Inconclusive;
        v.unmet_premise = "witness residual " + std::to_string(report.max_residual) +
                          " exceeds bound " + std::to_string(bound);
    }
    return v;
}

} // namespace phase
