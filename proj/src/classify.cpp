#include "phase/classify.hpp"

#include "phase/classify_complex_linear.hpp"
#include "phase/classify_projective.hpp"
#include "phase/classify_real_linear.hpp"
#include "phase/classify_real_mobius.hpp"

namespace phase {

Verdict classify(const GeneratorSet& g1, const GeneratorSet& g2, Category category,
                 const ToleranceConfig& tol) {
    tol.validate();
    g1.validate(tol);
    g2.validate(tol);
    if (!(g1.space == g2.space))
        throw Error(ErrorCode::SpaceMismatch, "generator sets live on different spaces");
    if (g1.count() != g2.count())
        return Verdict::not_equivalent(category, "generator counts differ");

    switch (g1.space.kind) {
    case SpaceKind::ComplexLinear: return classify_complex_linear(g1, g2, category, tol);
    case SpaceKind::ComplexProjective: return classify_projective(g1, g2, category, tol);
    case SpaceKind::RealLinear: return classify_real_linear(g1, g2, category, tol);
    case SpaceKind::RealMobius: return classify_real_mobius(g1, g2, category, tol);
    }
    throw Error(ErrorCode::InvalidInput, "unknown space kind");
}

} // namespace phase
