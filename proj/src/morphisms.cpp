#include "phase/morphisms.hpp"

#include "phase/classify.hpp"
#include "phase/classify_real_mobius.hpp"

#include <functional>

namespace phase {

namespace {

bool is_identity_action(const GeneratorSet& g, int r, const ToleranceConfig& tol) {
    CMat n = g.normalized_generator(r);
    const int m = static_cast<int>(n.rows());
    cplx mean = n.trace() / static_cast<double>(m);
    return (n - mean * CMat::Identity(m, m)).norm() <= 1e2 * tol.eig_rel * std::max(1.0, n.norm());
}

// Cheap per-generator profile for pruning the index-map search; only
// conjugacy invariants may enter here.
std::vector<int> generator_profiles(const GeneratorSet& g, const ToleranceConfig& tol) {
    std::vector<int> out;
    for (int r = 0; r < g.count(); ++r) {
        int profile = is_identity_action(g, r, tol) ? 1 : 0;
        if (g.space.kind == SpaceKind::RealMobius) {
            MobiusClass mc = mobius_type(g.generators[static_cast<std::size_t>(r)].real(), tol);
            profile = profile * 10 + static_cast<int>(mc.kind);
        }
        out.push_back(profile);
    }
    return out;
}

GeneratorSet pick(const GeneratorSet& g, const std::vector<int>& mapping,
                  const std::vector<bool>& inverted) {
    GeneratorSet out;
    out.space = g.space;
    for (std::size_t r = 0; r < mapping.size(); ++r) {
        CMat m = g.generators.at(static_cast<std::size_t>(mapping[r]));
        if (!inverted.empty() && inverted[r]) m = m.inverse().eval();
        out.generators.push_back(std::move(m));
    }
    return out;
}

struct SearchOutcome {
    std::optional<Verdict> equivalent;
    bool any_inconclusive = false;
    std::string premise;
};

// Enumerates injective index maps source -> target in lexicographic order,
// invoking the pairwise classifier; profiles prune incompatible images.
SearchOutcome search_index_maps(const GeneratorSet& g1, const GeneratorSet& g2, Category category,
                                const ToleranceConfig& tol, bool allow_inversion) {
    SearchOutcome outcome;
    const int n1 = g1.count();
    const int n2 = g2.count();
    auto prof1 = generator_profiles(g1, tol);
    auto prof2 = generator_profiles(g2, tol);

    std::vector<int> mapping(static_cast<std::size_t>(n1), -1);
    std::vector<bool> used(static_cast<std::size_t>(n2), false);

    std::vector<std::vector<bool>> inversion_choices;
    {
        int combos = allow_inversion ? (1 << n1) : 1;
        for (int mask = 0; mask < combos; ++mask) {
            std::vector<bool> inv(static_cast<std::size_t>(n1), false);
            for (int r = 0; r < n1; ++r) inv[static_cast<std::size_t>(r)] = (mask >> r) & 1;
            inversion_choices.push_back(std::move(inv));
        }
    }

    std::function<bool(int)> extend = [&](int k) -> bool {
        if (k == n1) {
            for (const auto& inv : inversion_choices) {
                GeneratorSet target = pick(g2, mapping, inv);
                Verdict v = classify(g1, target, category, tol);
                if (v.equivalent()) {
                    IndexMapWitness iw;
                    iw.mapping = mapping;
                    iw.inverted = inv;
                    iw.inner = std::make_shared<Witness>(std::move(*v.witness));
                    v.witness = Witness{iw};
                    outcome.equivalent = std::move(v);
                    return true;
                }
                if (v.status == Status::Inconclusive) {
                    outcome.any_inconclusive = true;
                    if (outcome.premise.empty()) outcome.premise = v.unmet_premise;
                }
            }
            return false;
        }
        for (int j = 0; j < n2; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            if (prof1[static_cast<std::size_t>(k)] != prof2[static_cast<std::size_t>(j)]) continue;
            used[static_cast<std::size_t>(j)] = true;
            mapping[static_cast<std::size_t>(k)] = j;
            if (extend(k + 1)) return true;
            used[static_cast<std::size_t>(j)] = false;
        }
        return false;
    };
    extend(0);
    return outcome;
}

Verdict finish(SearchOutcome outcome, Category category, const std::string& relation,
               const std::string& fail_reason) {
    if (outcome.equivalent) {
        outcome.equivalent->relation = relation;
        return std::move(*outcome.equivalent);
    }
    if (outcome.any_inconclusive) {
        Verdict v = Verdict::inconclusive(category, outcome.premise.empty()
                                                        ? "some candidate index maps were undecided"
                                                        : outcome.premise);
        v.relation = relation;
        return v;
    }
    Verdict v = Verdict::not_equivalent(category, fail_reason);
    v.relation = relation;
    return v;
}

} // namespace

Verdict equivalence(const GeneratorSet& g1, const GeneratorSet& g2, Category category,
                    const ToleranceConfig& tol, bool allow_inversion) {
    if (!(g1.space == g2.space))
        throw Error(ErrorCode::SpaceMismatch, "generator sets live on different spaces");
    if (g1.count() != g2.count()) {
        Verdict v = Verdict::not_equivalent(category, "fundamental-group ranks differ");
        v.relation = "equivalence";
        return v;
    }
    return finish(search_index_maps(g1, g2, category, tol, allow_inversion), category,
                  "equivalence", "no generator bijection yields conjugate families");
}

Verdict embedding(const GeneratorSet& g1, const GeneratorSet& g2, Category category,
                  const ToleranceConfig& tol) {
    if (!(g1.space == g2.space))
        throw Error(ErrorCode::SpaceMismatch, "generator sets live on different spaces");
    if (g1.count() > g2.count()) {
        Verdict v = Verdict::not_equivalent(category,
                                            "no injective index map: source has more generators");
        v.relation = "embedding";
        return v;
    }
    return finish(search_index_maps(g1, g2, category, tol, /*allow_inversion=*/false), category,
                  "embedding", "no injective index map yields conjugate families");
}

Verdict covering(const GeneratorSet& g1, const GeneratorSet& g2, Category category,
                 const ToleranceConfig& tol) {
    if (!(g1.space == g2.space))
        throw Error(ErrorCode::SpaceMismatch, "generator sets live on different spaces");
    if (g1.count() > g2.count()) {
        Verdict v = Verdict::not_equivalent(category,
                                            "no injective index map: source has more generators");
        v.relation = "covering";
        return v;
    }
    return finish(search_index_maps(g1, g2, category, tol, /*allow_inversion=*/false), category,
                  "covering", "no injective index map yields conjugate families");
}

} // namespace phase
