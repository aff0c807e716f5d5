#pragma once

// Internal solver for the recurring relation q_r = c(p_r) |p_r|^alpha:
// indices with |p_r| = 1 force exact equality, the others pin Re(alpha) and
// restrict Im(alpha) to arithmetic progressions whose bounded intersection
// is searched (branch bound K_max).

#include "phase/core.hpp"

#include <span>

namespace phase::detail {

enum class AlphaConstraint {
    GreaterMinusOne, // linear actions: Re(alpha) > -1
    NotMinusOne,     // projective/Mobius ratios: Re(alpha) != -1, < -1 swaps fixed points
};

std::optional<cplx> solve_power_law(std::span<const cplx> ps, std::span<const cplx> qs, bool conj,
                                    AlphaConstraint constraint, const ToleranceConfig& tol);

// Real form used on the real line: sign(q_r) = sign(p_r) is forced and the
// exponent is real.
enum class RealAlphaConstraint { GreaterMinusOne, NotMinusOne };

std::optional<double> solve_real_power_law(std::span<const double> ps, std::span<const double> qs,
                                           RealAlphaConstraint constraint,
                                           const ToleranceConfig& tol);

} // namespace phase::detail
