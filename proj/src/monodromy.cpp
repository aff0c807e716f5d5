#include "phase/monodromy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

namespace phase {

std::string to_string(BaseKind k) {
    switch (k) {
    case BaseKind::PuncturedPlane: return "punctured_plane";
    case BaseKind::Cylinder: return "cylinder";
    case BaseKind::Torus: return "torus";
    }
    return "?";
}

void FuchsianSystemSpec::validate(const ToleranceConfig& tol) const {
    if (dimension < 1) throw Error(ErrorCode::InvalidInput, "system dimension must be >= 1");
    if (base_kind == BaseKind::PuncturedPlane) {
        if (!fourier.empty())
            throw Error(ErrorCode::InvalidInput, "punctured-plane systems use poles, not Fourier data");
        for (std::size_t r = 0; r < poles.size(); ++r) {
            for (std::size_t s = r + 1; s < poles.size(); ++s)
                if (std::abs(poles[r].location - poles[s].location) <=
                    1e3 * tol.eig_rel * (1.0 + std::abs(poles[r].location)))
                    throw Error(ErrorCode::InvalidInput, "pole locations must be pairwise distinct");
            if (std::abs(base_point - poles[r].location) <= 1e-9)
                throw Error(ErrorCode::PoleHit, "base point coincides with a pole");
            for (const PoleTerm& t : poles[r].terms) {
                if (t.order < 1) throw Error(ErrorCode::InvalidInput, "pole term order must be >= 1");
                if (t.coeff.rows() != dimension || t.coeff.cols() != dimension)
                    throw Error(ErrorCode::InvalidInput, "pole coefficient size mismatch");
            }
        }
    } else {
        if (!poles.empty())
            throw Error(ErrorCode::InvalidInput, "cylinder/torus systems use Fourier data, not poles");
        for (const FourierTerm& t : fourier)
            if (t.coeff.rows() != dimension || t.coeff.cols() != dimension)
                throw Error(ErrorCode::InvalidInput, "Fourier coefficient size mismatch");
    }
}

CMat evaluate_coefficient(const FuchsianSystemSpec& spec, cplx z) {
    CMat a = CMat::Zero(spec.dimension, spec.dimension);
    if (spec.base_kind == BaseKind::PuncturedPlane) {
        for (const Pole& p : spec.poles) {
            cplx d = z - p.location;
            if (std::abs(d) <= 1e-12 * (1.0 + std::abs(p.location)))
                throw Error(ErrorCode::PoleHit, "coefficient evaluated at a pole");
            for (const PoleTerm& t : p.terms) a += t.coeff / std::pow(d, t.order);
        }
    } else {
        for (const FourierTerm& t : spec.fourier)
            a += t.coeff * std::exp(cplx(0.0, 2.0 * M_PI * t.frequency) * z);
    }
    return a;
}

namespace {

cplx piece_point(const PathPiece& p, double t) {
    if (p.kind == PathPiece::Kind::Segment) return p.from + t * (p.to - p.from);
    double ang = p.angle_from + t * (p.angle_to - p.angle_from);
    return p.center + p.radius * std::exp(cplx(0.0, ang));
}

cplx piece_velocity(const PathPiece& p, double t) {
    if (p.kind == PathPiece::Kind::Segment) return p.to - p.from;
    double ang = p.angle_from + t * (p.angle_to - p.angle_from);
    return cplx(0.0, p.angle_to - p.angle_from) * p.radius * std::exp(cplx(0.0, ang));
}

// Dormand-Prince 5(4) embedded pair
struct Dopri {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

void integrate_piece(const FuchsianSystemSpec& spec, const PathPiece& piece, CMat& w,
                     const ToleranceConfig& tol, IntegrationStats* stats) {
    auto rhs = [&](double t, const CMat& y) -> CMat {
        return piece_velocity(piece, t) * (evaluate_coefficient(spec, piece_point(piece, t)) * y);
    };

    double t = 0.0;
    double h = 0.05;
    const double rtol = tol.ode_rel;
    const double atol = tol.ode_rel;
    long accepted = 0;

    while (t < 1.0) {
        if (h < 1e-14) throw Error(ErrorCode::StepUnderflow, "integration step underflow near a pole");
        if (t + h > 1.0) h = 1.0 - t;

        CMat k1 = rhs(t, w);
        CMat k2 = rhs(t + Dopri::c2 * h, w + h * (Dopri::a21 * k1));
        CMat k3 = rhs(t + Dopri::c3 * h, w + h * (Dopri::a31 * k1 + Dopri::a32 * k2));
        CMat k4 = rhs(t + Dopri::c4 * h, w + h * (Dopri::a41 * k1 + Dopri::a42 * k2 + Dopri::a43 * k3));
        CMat k5 = rhs(t + Dopri::c5 * h,
                      w + h * (Dopri::a51 * k1 + Dopri::a52 * k2 + Dopri::a53 * k3 + Dopri::a54 * k4));
        CMat k6 = rhs(t + h, w + h * (Dopri::a61 * k1 + Dopri::a62 * k2 + Dopri::a63 * k3 +
                                      Dopri::a64 * k4 + Dopri::a65 * k5));
        CMat w5 = w + h * (Dopri::b1 * k1 + Dopri::b3 * k3 + Dopri::b4 * k4 + Dopri::b5 * k5 +
                           Dopri::b6 * k6);
        CMat k7 = rhs(t + h, w5);
        CMat err = h * (Dopri::e1 * k1 + Dopri::e3 * k3 + Dopri::e4 * k4 + Dopri::e5 * k5 +
                        Dopri::e6 * k6 + Dopri::e7 * k7);

        double norm = 0.0;
        for (Eigen::Index i = 0; i < err.rows(); ++i)
            for (Eigen::Index j = 0; j < err.cols(); ++j) {
                double sc = atol + rtol * std::max(std::abs(w(i, j)), std::abs(w5(i, j)));
                norm = std::max(norm, std::abs(err(i, j)) / sc);
            }

        // error-per-unit-step control keeps the accumulated error at the
        // requested tolerance independently of the step count
        double ratio = norm / h;
        if (ratio <= 1.0) {
            t += h;
            w = std::move(w5);
            if (++accepted > 1000000)
                throw Error(ErrorCode::StepUnderflow, "integration exceeded the step budget");
            if (stats) stats->accepted_steps++;
        } else if (stats) {
            stats->rejected_steps++;
        }
        double factor = ratio > 0 ? 0.9 * std::pow(ratio, -0.25) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
}

Path reversed_path(const Path& path) {
    Path out;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        PathPiece p = *it;
        if (p.kind == PathPiece::Kind::Segment) {
            std::swap(p.from, p.to);
        } else {
            std::swap(p.angle_from, p.angle_to);
        }
        out.push_back(p);
    }
    return out;
}

double pole_clearance(const FuchsianSystemSpec& spec, int r) {
    double d = std::abs(spec.base_point - spec.poles[static_cast<std::size_t>(r)].location);
    for (std::size_t s = 0; s < spec.poles.size(); ++s) {
        if (static_cast<int>(s) == r) continue;
        d = std::min(d, std::abs(spec.poles[s].location -
                                 spec.poles[static_cast<std::size_t>(r)].location));
    }
    return 0.45 * d;
}

// Straight run from `a` to `b`, detoured around every intervening pole by an
// arc on that pole's clearance circle (counterclockwise by convention).
void append_connector(const FuchsianSystemSpec& spec, cplx a, cplx b, int target_pole, Path& out) {
    struct Crossing {
        double t_in, t_out;
        int pole;
    };
    std::vector<Crossing> crossings;
    cplx dir = b - a;
    double len2 = std::norm(dir);
    for (std::size_t s = 0; s < spec.poles.size(); ++s) {
        if (static_cast<int>(s) == target_pole) continue;
        cplx c = spec.poles[s].location;
        double rad = pole_clearance(spec, static_cast<int>(s));
        // |a + t dir - c|^2 = rad^2
        double tb = 2.0 * ((a - c) * std::conj(dir)).real();
        double tc = std::norm(a - c) - rad * rad;
        double disc = tb * tb - 4.0 * len2 * tc;
        if (disc <= 0) continue;
        double sq = std::sqrt(disc);
        double t1 = (-tb - sq) / (2.0 * len2);
        double t2 = (-tb + sq) / (2.0 * len2);
        if (t2 <= 0.0 || t1 >= 1.0) continue;
        crossings.push_back({std::max(t1, 0.0), std::min(t2, 1.0), static_cast<int>(s)});
    }
    std::sort(crossings.begin(), crossings.end(),
              [](const Crossing& x, const Crossing& y) { return x.t_in < y.t_in; });

    double t_cur = 0.0;
    cplx cur = a;
    for (const Crossing& cr : crossings) {
        cplx enter = a + cr.t_in * dir;
        cplx exit = a + cr.t_out * dir;
        if (cr.t_in > t_cur) out.push_back({PathPiece::Kind::Segment, cur, enter});
        cplx c = spec.poles[static_cast<std::size_t>(cr.pole)].location;
        double rad = pole_clearance(spec, cr.pole);
        double ang_in = std::arg(enter - c);
        double ang_out = std::arg(exit - c);
        double sweep = ang_out - ang_in;
        while (sweep < 0) sweep += 2.0 * M_PI; // counterclockwise detour
        PathPiece arc;
        arc.kind = PathPiece::Kind::Arc;
        arc.center = c;
        arc.radius = rad;
        arc.angle_from = ang_in;
        arc.angle_to = ang_in + sweep;
        out.push_back(arc);
        cur = exit;
        t_cur = cr.t_out;
    }
    if (t_cur < 1.0 || out.empty()) out.push_back({PathPiece::Kind::Segment, cur, b});
}

} // namespace

CMat integrate_loop(const FuchsianSystemSpec& spec, const Path& path, const ToleranceConfig& tol,
                    IntegrationStats* stats) {
    CMat w = CMat::Identity(spec.dimension, spec.dimension);
    for (const PathPiece& p : path) integrate_piece(spec, p, w, tol, stats);
    return w;
}

Path loop_around_pole(const FuchsianSystemSpec& spec, int pole_index) {
    const Pole& pole = spec.poles.at(static_cast<std::size_t>(pole_index));
    double rad = pole_clearance(spec, pole_index);
    cplx u = (spec.base_point - pole.location) / std::abs(spec.base_point - pole.location);
    cplx entry = pole.location + rad * u;

    Path out;
    append_connector(spec, spec.base_point, entry, pole_index, out);
    PathPiece circle;
    circle.kind = PathPiece::Kind::Arc;
    circle.center = pole.location;
    circle.radius = rad;
    circle.angle_from = std::arg(u);
    circle.angle_to = std::arg(u) + 2.0 * M_PI;
    Path back = reversed_path(out);
    out.push_back(circle);
    out.insert(out.end(), back.begin(), back.end());
    return out;
}

PhaseGroupResult phase_group(const FuchsianSystemSpec& spec, const ToleranceConfig& tol) {
    spec.validate(tol);
    PhaseGroupResult result;

    Space space;
    if (spec.projectivize) {
        space = spec.real_form && spec.dimension == 2 ? real_mobius()
                                                      : complex_projective(spec.dimension - 1);
    } else {
        space = spec.real_form ? real_linear(spec.dimension) : complex_linear(spec.dimension);
    }
    result.generators.space = space;

    if (spec.base_kind == BaseKind::PuncturedPlane) {
        std::vector<int> order(spec.poles.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            cplx za = spec.poles[static_cast<std::size_t>(a)].location;
            cplx zb = spec.poles[static_cast<std::size_t>(b)].location;
            if (za.real() != zb.real()) return za.real() < zb.real();
            return za.imag() < zb.imag();
        });
        for (int idx : order) {
            Path loop = loop_around_pole(spec, idx);
            result.generators.generators.push_back(integrate_loop(spec, loop, tol, &result.stats));
            cplx z = spec.poles[static_cast<std::size_t>(idx)].location;
            result.generators.labels.push_back("loop around pole (" + std::to_string(z.real()) +
                                               ", " + std::to_string(z.imag()) + ")");
        }
        return result;
    }

    PathPiece period1{PathPiece::Kind::Segment, spec.base_point, spec.base_point + cplx(1.0, 0.0)};
    CMat g1 = integrate_loop(spec, {period1}, tol, &result.stats);
    result.generators.generators.push_back(g1);
    result.generators.labels.push_back("period_1");
    if (spec.base_kind == BaseKind::Torus) {
        PathPiece period_i{PathPiece::Kind::Segment, spec.base_point,
                           spec.base_point + cplx(0.0, 1.0)};
        CMat g2 = integrate_loop(spec, {period_i}, tol, &result.stats);
        // necessary integrability of the doubly periodic system
        ToleranceConfig flat_tol = tol;
        flat_tol.eig_rel = std::sqrt(tol.ode_rel);
        if (!matrices_commute(g1, g2, space, flat_tol))
            throw Error(ErrorCode::TorusNonFlat, "torus period transports do not commute");
        result.generators.generators.push_back(g2);
        result.generators.labels.push_back("period_i");
    }
    return result;
}

GeneratorSet scalar_fuchsian_generators(const FuchsianSystemSpec& spec) {
    if (spec.dimension != 1 || spec.base_kind != BaseKind::PuncturedPlane)
        throw Error(ErrorCode::InvalidInput,
                    "closed form applies to scalar punctured-plane systems only");
    GeneratorSet g;
    g.space = complex_linear(1);

    std::vector<int> order(spec.poles.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        cplx za = spec.poles[static_cast<std::size_t>(a)].location;
        cplx zb = spec.poles[static_cast<std::size_t>(b)].location;
        if (za.real() != zb.real()) return za.real() < zb.real();
        return za.imag() < zb.imag();
    });
    for (int idx : order) {
        cplx residue = 0.0;
        for (const PoleTerm& t : spec.poles[static_cast<std::size_t>(idx)].terms)
            if (t.order == 1) residue += t.coeff(0, 0);
        CMat m(1, 1);
        m(0, 0) = std::exp(cplx(0.0, 2.0 * M_PI) * residue);
        g.generators.push_back(m);
        cplx z = spec.poles[static_cast<std::size_t>(idx)].location;
        g.labels.push_back("loop around pole (" + std::to_string(z.real()) + ", " +
                           std::to_string(z.imag()) + ")");
    }
    return g;
}

FuchsianSystemSpec riccati_lift(const RiccatiSpec& spec) {
    FuchsianSystemSpec out;
    out.dimension = 2;
    out.base_kind = spec.base_kind;
    out.base_point = spec.base_point;
    out.projectivize = true;

    auto lift_matrix = [](cplx a2, cplx a1, cplx a0) {
        CMat m(2, 2);
        m(0, 0) = a1 / 2.0;
        m(0, 1) = a0;
        m(1, 0) = -a2;
        m(1, 1) = -a1 / 2.0;
        return m;
    };

    if (spec.base_kind == BaseKind::PuncturedPlane) {
        struct Slot {
            cplx z;
            std::map<int, std::array<cplx, 3>> orders; // order -> (a2, a1, a0)
        };
        std::vector<Slot> slots;
        auto add = [&](const std::vector<Pole>& poles, int which) {
            for (const Pole& p : poles) {
                Slot* slot = nullptr;
                for (Slot& s : slots)
                    if (std::abs(s.z - p.location) <= 1e-12 * (1.0 + std::abs(p.location))) slot = &s;
                if (!slot) {
                    slots.push_back(Slot{p.location, {}});
                    slot = &slots.back();
                }
                for (const PoleTerm& t : p.terms)
                    slot->orders[t.order][static_cast<std::size_t>(which)] += t.coeff(0, 0);
            }
        };
        add(spec.a2.poles, 0);
        add(spec.a1.poles, 1);
        add(spec.a0.poles, 2);
        for (const auto& s : slots) {
            Pole p;
            p.location = s.z;
            for (const auto& [order, coeffs] : s.orders)
                p.terms.push_back({order, lift_matrix(coeffs[0], coeffs[1], coeffs[2])});
            out.poles.push_back(std::move(p));
        }
    } else {
        std::map<int, std::array<cplx, 3>> freqs;
        auto add = [&](const std::vector<FourierTerm>& terms, int which) {
            for (const FourierTerm& t : terms)
                freqs[t.frequency][static_cast<std::size_t>(which)] += t.coeff(0, 0);
        };
        add(spec.a2.fourier, 0);
        add(spec.a1.fourier, 1);
        add(spec.a0.fourier, 2);
        for (const auto& [k, coeffs] : freqs)
            out.fourier.push_back({k, lift_matrix(coeffs[0], coeffs[1], coeffs[2])});

        // a real periodic Riccati equation transported over the real period
        // stays real, so its phase group acts on the extended real line
        bool real_data = std::abs(spec.base_point.imag()) <= 1e-12;
        for (const FourierTerm& t : out.fourier) {
            auto it = freqs.find(-t.frequency);
            CMat mirrored = it == freqs.end()
                                ? CMat(CMat::Zero(2, 2))
                                : lift_matrix(it->second[0], it->second[1], it->second[2]);
            if ((mirrored - t.coeff.conjugate()).norm() > 1e-12 * (1.0 + t.coeff.norm()))
                real_data = false;
        }
        out.real_form = real_data && spec.base_kind == BaseKind::Cylinder;
    }
    if (spec.real_override) out.real_form = *spec.real_override && spec.base_kind == BaseKind::Cylinder;
    return out;
}

} // namespace phase
