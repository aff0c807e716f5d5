#pragma once

// JSON ingestion and emission: system specs, generator sets, witnesses,
// verdicts and tolerance overrides. Complex numbers serialize as [re, im];
// matrices as row-major nested arrays (plain numbers on real spaces).

#include "phase/core.hpp"
#include "phase/monodromy.hpp"

#include <json.hpp>
#include <string>

namespace phase {

using Json = nlohmann::json;

Json space_to_json(const Space& s);
Space space_from_json(const Json& j);

Json generator_set_to_json(const GeneratorSet& g);
GeneratorSet generator_set_from_json(const Json& j);

FuchsianSystemSpec fuchsian_from_json(const Json& j);
RiccatiSpec riccati_from_json(const Json& j);

Json witness_to_json(const Witness& w);
Witness witness_from_json(const Json& j);

Json verdict_to_json(const Verdict& v);

// Parses an input document of kind "generators", "fuchsian_linear" or
// "fuchsian_riccati" and resolves it to a generator set, integrating
// monodromy when needed. `stats` receives integration diagnostics.
GeneratorSet resolve_generators(const Json& j, const ToleranceConfig& tol,
                                IntegrationStats* stats = nullptr);

// Applies comma- or repeat-separated key=value overrides (eig_rel, det_floor,
// residual, ode_rel, s_max, k_max, samples, seed).
void apply_tolerance_overrides(ToleranceConfig& tol, const std::string& overrides);

std::string dump_json(const Json& j);
Json parse_json(const std::string& text); // throws Error(ErrorCode::InvalidInput)

} // namespace phase
