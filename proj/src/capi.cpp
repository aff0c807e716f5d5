#include "phasegroup.h"

#include "phase/classify.hpp"
#include "phase/json_io.hpp"
#include "phase/morphisms.hpp"
#include "phase/witness.hpp"

#include <cstring>
#include <new>
#include <string>

using namespace phase;

struct pg_input {
    Json doc;
};

struct pg_generators {
    GeneratorSet set;
    IntegrationStats stats;
};

struct pg_verdict {
    Verdict verdict;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_err(char** err, const std::string& msg) {
    if (err) *err = dup_string(msg);
}

pg_status status_of(const Error& e) {
    switch (e.code()) {
    case ErrorCode::InvalidInput: return PG_ERR_PARSE;
    case ErrorCode::SpaceMismatch: return PG_ERR_SPACE;
    case ErrorCode::PoleHit:
    case ErrorCode::StepUnderflow:
    case ErrorCode::TorusNonFlat: return PG_ERR_INTEGRATION;
    default: return PG_ERR_INVALID;
    }
}

ToleranceConfig tolerances_from(const char* overrides) {
    ToleranceConfig tol;
    if (overrides && *overrides) apply_tolerance_overrides(tol, overrides);
    return tol;
}

Category category_from(const char* name) {
    std::string c = name ? name : "top";
    if (c == "top" || c == "topological") return Category::Topological;
    if (c == "smooth") return Category::Smooth;
    if (c == "rholo" || c == "r_holomorphic") return Category::RHolomorphic;
    if (c == "holo" || c == "holomorphic") return Category::Holomorphic;
    throw Error(ErrorCode::InvalidInput, "unknown category: " + c);
}

template <class F> pg_status guarded(char** err, F&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        set_err(err, e.what());
        return status_of(e);
    } catch (const std::exception& e) {
        set_err(err, e.what());
        return PG_ERR_INVALID;
    }
}

} // namespace

extern "C" {

const char* pg_version(void) { return "0.1.0"; }

pg_status pg_input_parse(const char* json, pg_input** out, char** err) {
    if (!json || !out) return PG_ERR_INVALID;
    *out = nullptr;
    return guarded(err, [&]() {
        Json doc = parse_json(json);
        std::string kind = doc.value("kind", "generators");
        if (kind != "generators" && kind != "fuchsian_linear" && kind != "fuchsian_riccati")
            throw Error(ErrorCode::InvalidInput, "unknown input kind: " + kind);
        *out = new pg_input{std::move(doc)};
        return PG_OK;
    });
}

void pg_input_free(pg_input* input) { delete input; }

pg_status pg_input_phase_group(const pg_input* input, const char* tol_overrides,
                               pg_generators** out, char** err) {
    if (!input || !out) return PG_ERR_INVALID;
    *out = nullptr;
    return guarded(err, [&]() {
        ToleranceConfig tol = tolerances_from(tol_overrides);
        auto gens = new pg_generators;
        try {
            gens->set = resolve_generators(input->doc, tol, &gens->stats);
            gens->set.validate(tol);
        } catch (...) {
            delete gens;
            throw;
        }
        *out = gens;
        return PG_OK;
    });
}

void pg_generators_free(pg_generators* gens) { delete gens; }

pg_status pg_generators_to_json(const pg_generators* gens, char** json_out) {
    if (!gens || !json_out) return PG_ERR_INVALID;
    return guarded(nullptr, [&]() {
        Json j = generator_set_to_json(gens->set);
        j["integration"] = Json{{"accepted_steps", gens->stats.accepted_steps},
                                {"rejected_steps", gens->stats.rejected_steps}};
        *json_out = dup_string(dump_json(j));
        return PG_OK;
    });
}

pg_status pg_relate(const pg_generators* a, const pg_generators* b, const char* relation,
                    const char* category, const char* tol_overrides, int allow_inversion,
                    pg_verdict** out, char** err) {
    if (!a || !b || !out) return PG_ERR_INVALID;
    *out = nullptr;
    return guarded(err, [&]() {
        ToleranceConfig tol = tolerances_from(tol_overrides);
        Category cat = category_from(category);
        std::string rel = relation ? relation : "equivalence";
        Verdict v;
        if (rel == "equivalence" || rel == "classify") {
            v = equivalence(a->set, b->set, cat, tol, allow_inversion != 0);
        } else if (rel == "embedding" || rel == "embed") {
            v = embedding(a->set, b->set, cat, tol);
        } else if (rel == "covering" || rel == "cover") {
            v = covering(a->set, b->set, cat, tol);
        } else {
            throw Error(ErrorCode::InvalidInput, "unknown relation: " + rel);
        }
        *out = new pg_verdict{std::move(v)};
        return PG_OK;
    });
}

void pg_verdict_free(pg_verdict* verdict) { delete verdict; }

pg_status pg_verdict_code_of(const pg_verdict* verdict, int* code) {
    if (!verdict || !code) return PG_ERR_INVALID;
    switch (verdict->verdict.status) {
    case Status::Equivalent: *code = PG_EQUIVALENT; break;
    case Status::NotEquivalent: *code = PG_NOT_EQUIVALENT; break;
    case Status::Inconclusive: *code = PG_INCONCLUSIVE; break;
    }
    return PG_OK;
}

pg_status pg_verdict_to_json(const pg_verdict* verdict, char** json_out) {
    if (!verdict || !json_out) return PG_ERR_INVALID;
    return guarded(nullptr, [&]() {
        *json_out = dup_string(dump_json(verdict_to_json(verdict->verdict)));
        return PG_OK;
    });
}

pg_status pg_verify_witness(const char* witness_json, const pg_generators* a,
                            const pg_generators* b, const char* tol_overrides,
                            char** report_json, double* max_residual, char** err) {
    if (!witness_json || !a || !b) return PG_ERR_INVALID;
    return guarded(err, [&]() {
        ToleranceConfig tol = tolerances_from(tol_overrides);
        Witness w = witness_from_json(parse_json(witness_json));
        ResidualReport rep = verify_conjugacy(w, a->set, b->set, tol);
        if (max_residual) *max_residual = rep.max_residual;
        if (report_json) {
            Json j{{"max_residual", rep.max_residual},
                   {"samples", rep.samples},
                   {"bound", tol.residual},
                   {"pass", rep.max_residual <= tol.residual}};
            *report_json = dup_string(dump_json(j));
        }
        return PG_OK;
    });
}

void pg_string_free(char* s) { delete[] s; }

} // extern "C"
