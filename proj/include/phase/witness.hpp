#pragma once

// Materializes every witness variant as an evaluable map and certifies the
// conjugacy identity f(P_r x) = Q_r f(x) numerically on seeded samples.

#include "phase/core.hpp"

namespace phase {

// Points are plain vectors on linear spaces and homogeneous representatives
// on projective spaces (real 2-vectors for the extended real line).
CVec evaluate_witness(const Witness& w, const Space& space, const CVec& x);

Witness invert_witness(const Witness& w, const Space& space);

CVec apply_generator(const Space& space, const CMat& g, const CVec& x);

// Chart-normalized distance: Fubini-Study-style on CP^n, circle angle on the
// extended real line, norm scaled by (1 + |reference|) on linear spaces.
double chart_distance(const Space& space, const CVec& a, const CVec& b, const CVec& reference);

std::vector<CVec> sample_points(const Space& space, const ToleranceConfig& tol,
                                std::uint64_t stream = 0);

ResidualReport verify_conjugacy(const Witness& w, const GeneratorSet& g1, const GeneratorSet& g2,
                                const ToleranceConfig& tol);

// Routes an Equivalent candidate through verification; downgrades to
// Inconclusive when the residual exceeds tol.residual.
Verdict certified_equivalent(Witness w, const GeneratorSet& g1, const GeneratorSet& g2,
                             Category category, const ToleranceConfig& tol,
                             double residual_bound = 0.0);

} // namespace phase
