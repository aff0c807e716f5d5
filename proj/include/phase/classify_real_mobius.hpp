#pragma once

// Conjugacy of linear-fractional actions on the extended real line, including
// the elliptic / parabolic / hyperbolic trichotomy.

#include "phase/core.hpp"

namespace phase {

struct MobiusClass {
    enum class Kind { Identity, Elliptic, Parabolic, Hyperbolic };
    Kind kind = Kind::Identity;
    double angle = 0.0; // Elliptic: canonical rotation angle in (-pi/2, pi/2]
    double shift = 0.0; // Parabolic: translation length w.r.t. the normalizer
    double ratio = 1.0; // Hyperbolic: eigenvalue ratio, |ratio| >= 1 representative
    RMat normalizer = RMat::Identity(2, 2); // frame reaching the canonical form
};

std::string to_string(MobiusClass::Kind k);

MobiusClass mobius_type(const RMat& m, const ToleranceConfig& tol);

// Abelian topological criterion, dispatching on the shared trichotomy kind.
Verdict classify_mobius_top(const GeneratorSet& ps, const GeneratorSet& qs,
                            const ToleranceConfig& tol);

// Smooth and holomorphic levels (they coincide here): invertible real 2x2
// projective intertwiner with det-sign enumeration.
Verdict classify_mobius_rigid(const GeneratorSet& ps, const GeneratorSet& qs, Category level,
                              const ToleranceConfig& tol);

Verdict classify_real_mobius(const GeneratorSet& ps, const GeneratorSet& qs, Category category,
                             const ToleranceConfig& tol);

} // namespace phase
