#pragma once

// Space dispatch: routes a pair of generator sets to the classifier for
// their common ambient space.

#include "phase/core.hpp"

namespace phase {

Verdict classify(const GeneratorSet& g1, const GeneratorSet& g2, Category category,
                 const ToleranceConfig& tol);

} // namespace phase
