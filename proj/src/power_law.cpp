#include "power_law.hpp"

#include <algorithm>
#include <cmath>

namespace phase::detail {

namespace {

double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * M_PI);
    return w;
}

bool alpha_allowed(double re, AlphaConstraint constraint, double tol) {
    if (constraint == AlphaConstraint::GreaterMinusOne) return re > -1.0 + tol;
    return std::abs(re + 1.0) > tol;
}

} // namespace

std::optional<cplx> solve_power_law(std::span<const cplx> ps, std::span<const cplx> qs, bool conj,
                                    AlphaConstraint constraint, const ToleranceConfig& tol) {
    if (ps.size() != qs.size()) throw Error(ErrorCode::InvalidInput, "solve_power_law: length mismatch");
    const double unit_tol = tol.eig_rel;
    const double match_tol = 16.0 * tol.eig_rel;

    for (std::size_t r = 0; r < ps.size(); ++r)
        if (std::abs(ps[r]) <= tol.det_floor || std::abs(qs[r]) <= tol.det_floor)
            throw Error(ErrorCode::ZeroGenerator, "solve_power_law: zero generator value");

    struct ModIdx {
        double log_mod;  // ln|p_r|
        double arg_gap;  // arg(q_r) - arg(c(p_r)), wrapped
        double re_alpha; // ln|q_r| / ln|p_r| - 1
    };
    std::vector<ModIdx> mod_idx;

    for (std::size_t r = 0; r < ps.size(); ++r) {
        cplx p_eff = conj ? std::conj(ps[r]) : ps[r];
        double lp = std::log(std::abs(ps[r]));
        if (std::abs(lp) <= unit_tol) {
            // unit modulus: rotations conjugate only with equal angle
            if (std::abs(qs[r] - p_eff) > match_tol * (1.0 + std::abs(p_eff))) return std::nullopt;
            continue;
        }
        double lq = std::log(std::abs(qs[r]));
        if (std::abs(lq) <= unit_tol) return std::nullopt; // would force Re(alpha) = -1
        ModIdx m;
        m.log_mod = lp;
        m.re_alpha = lq / lp - 1.0;
        m.arg_gap = wrap_angle(std::arg(qs[r]) - std::arg(p_eff));
        mod_idx.push_back(m);
    }

    if (mod_idx.empty()) {
        cplx alpha(0.0, 0.0);
        return alpha_allowed(0.0, constraint, tol.eig_rel) ? std::optional<cplx>(alpha)
                                                           : std::nullopt;
    }

    double re_alpha = mod_idx[0].re_alpha;
    for (const ModIdx& m : mod_idx)
        if (std::abs(m.re_alpha - re_alpha) > 64.0 * tol.eig_rel * (1.0 + std::abs(re_alpha)))
            return std::nullopt;
    if (!alpha_allowed(re_alpha, constraint, tol.eig_rel)) return std::nullopt;

    // anchor the Im(alpha) branch search on the largest |ln|p||
    std::size_t anchor = 0;
    for (std::size_t i = 1; i < mod_idx.size(); ++i)
        if (std::abs(mod_idx[i].log_mod) > std::abs(mod_idx[anchor].log_mod)) anchor = i;

    std::vector<double> candidates;
    for (int k = -tol.k_max; k <= tol.k_max; ++k)
        candidates.push_back((mod_idx[anchor].arg_gap + 2.0 * M_PI * k) / mod_idx[anchor].log_mod);
    std::sort(candidates.begin(), candidates.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });

    for (double im : candidates) {
        bool ok = true;
        for (const ModIdx& m : mod_idx) {
            double delta = im * m.log_mod - m.arg_gap;
            double branches = delta / (2.0 * M_PI);
            double nearest = std::round(branches);
            if (std::abs(nearest) > tol.k_max ||
                std::abs(delta - 2.0 * M_PI * nearest) >
                    64.0 * tol.eig_rel * (1.0 + std::abs(im)) * std::max(1.0, std::abs(m.log_mod))) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        cplx alpha(re_alpha, im);
        // final numeric confirmation of every relation
        bool confirmed = true;
        for (std::size_t r = 0; r < ps.size(); ++r) {
            cplx p_eff = conj ? std::conj(ps[r]) : ps[r];
            cplx rhs = p_eff * std::exp(alpha * std::log(std::abs(ps[r])));
            if (std::abs(qs[r] - rhs) > 256.0 * tol.eig_rel * (1.0 + std::abs(qs[r]))) {
                confirmed = false;
                break;
            }
        }
        if (confirmed) return alpha;
    }
    return std::nullopt;
}

std::optional<double> solve_real_power_law(std::span<const double> ps, std::span<const double> qs,
                                           RealAlphaConstraint constraint,
                                           const ToleranceConfig& tol) {
    if (ps.size() != qs.size())
        throw Error(ErrorCode::InvalidInput, "solve_real_power_law: length mismatch");
    const double unit_tol = tol.eig_rel;
    const double match_tol = 16.0 * tol.eig_rel;

    for (std::size_t r = 0; r < ps.size(); ++r)
        if (std::abs(ps[r]) <= tol.det_floor || std::abs(qs[r]) <= tol.det_floor)
            throw Error(ErrorCode::ZeroGenerator, "solve_real_power_law: zero generator value");

    bool have_alpha = false;
    double alpha = 0.0;
    for (std::size_t r = 0; r < ps.size(); ++r) {
        if ((ps[r] > 0) != (qs[r] > 0)) return std::nullopt; // orientation coordination
        double lp = std::log(std::abs(ps[r]));
        if (std::abs(lp) <= unit_tol) {
            if (std::abs(qs[r] - ps[r]) > match_tol * (1.0 + std::abs(ps[r]))) return std::nullopt;
            continue;
        }
        double lq = std::log(std::abs(qs[r]));
        if (std::abs(lq) <= unit_tol) return std::nullopt; // would force alpha = -1
        double a = lq / lp - 1.0;
        if (!have_alpha) {
            alpha = a;
            have_alpha = true;
        } else if (std::abs(a - alpha) > 64.0 * tol.eig_rel * (1.0 + std::abs(alpha))) {
            return std::nullopt;
        }
    }
    if (constraint == RealAlphaConstraint::GreaterMinusOne && !(alpha > -1.0 + tol.eig_rel))
        return std::nullopt;
    if (constraint == RealAlphaConstraint::NotMinusOne && std::abs(alpha + 1.0) <= tol.eig_rel)
        return std::nullopt;
    return alpha;
}

} // namespace phase::detail
