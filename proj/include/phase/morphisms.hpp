#pragma once

// Lifts the pairwise criteria to system-level relations: equivalence
// (isomorphism of phase groups via a generator-index bijection), embedding
// (homomorphism via an injection) and covering (monomorphism).

#include "phase/core.hpp"

namespace phase {

// Searches index bijections (optionally composed with per-generator
// inversion) and invokes the space classifier on the reordered target; the
// first Equivalent verdict wins, with the index map recorded in the witness.
Verdict equivalence(const GeneratorSet& g1, const GeneratorSet& g2, Category category,
                    const ToleranceConfig& tol, bool allow_inversion = false);

Verdict embedding(const GeneratorSet& g1, const GeneratorSet& g2, Category category,
                  const ToleranceConfig& tol);

Verdict covering(const GeneratorSet& g1, const GeneratorSet& g2, Category category,
                 const ToleranceConfig& tol);

} // namespace phase
