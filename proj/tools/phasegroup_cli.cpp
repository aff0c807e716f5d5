// Command-line front end over the C API: monodromy extraction, pairwise
// classification, embedding/covering, and witness verification.
//
// Exit codes: 0 equivalent / verified, 1 not equivalent / verification
// failed, 2 inconclusive, 3 parse error, 4 integration failure, 5 space
// mismatch, 6 internal error.

#include "phasegroup.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
    std::vector<std::string> tol;
    std::uint64_t seed = 0;
    bool seed_set = false;

    std::string tol_string() const {
        std::string joined;
        for (const std::string& t : tol) {
            if (!joined.empty()) joined += ",";
            joined += t;
        }
        if (seed_set) {
            if (!joined.empty()) joined += ",";
            joined += "seed=" + std::to_string(seed);
        }
        return joined;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--tol", opts.tol, "tolerance override key=value (repeatable)");
    cmd->add_option("--seed", opts.seed, "RNG seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
}

int read_input(const std::string& path, std::string& out) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        out = ss.str();
        return 0;
    }
    std::ifstream f(path);
    if (!f) {
        std::cerr << "error: cannot open " << path << "\n";
        return 3;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    out = ss.str();
    return 0;
}

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { pg_string_free(ptr); }
};

int report_error(pg_status st, char* err) {
    if (err) {
        std::cerr << "error: " << err << "\n";
        pg_string_free(err);
    } else {
        std::cerr << "error: status " << static_cast<int>(st) << "\n";
    }
    return static_cast<int>(st);
}

int load_generators(const std::string& path, const std::string& tol, pg_generators** out) {
    std::string text;
    if (int rc = read_input(path, text)) return rc;
    pg_input* input = nullptr;
    char* err = nullptr;
    pg_status st = pg_input_parse(text.c_str(), &input, &err);
    if (st != PG_OK) return report_error(st, err);
    st = pg_input_phase_group(input, tol.empty() ? nullptr : tol.c_str(), out, &err);
    pg_input_free(input);
    if (st != PG_OK) return report_error(st, err);
    return 0;
}

int run_monodromy(const std::string& path, const CommonOpts& opts) {
    pg_generators* gens = nullptr;
    if (int rc = load_generators(path, opts.tol_string(), &gens)) return rc;
    OwnedString json;
    pg_status st = pg_generators_to_json(gens, &json.ptr);
    if (st == PG_OK) {
        std::string text = json.ptr;
        if (text.find("\"matrices\": []") != std::string::npos)
            std::cerr << "warning: system has no singularities; phase group is trivial\n";
        std::cout << text << "\n";
    }
    pg_generators_free(gens);
    return st == PG_OK ? 0 : static_cast<int>(st);
}

int run_relation(const char* relation, const std::string& a_path, const std::string& b_path,
                 const std::string& category, bool allow_inversion, const CommonOpts& opts) {
    std::string tol = opts.tol_string();
    pg_generators* a = nullptr;
    pg_generators* b = nullptr;
    if (int rc = load_generators(a_path, tol, &a)) return rc;
    if (int rc = load_generators(b_path, tol, &b)) {
        pg_generators_free(a);
        return rc;
    }
    pg_verdict* verdict = nullptr;
    char* err = nullptr;
    pg_status st = pg_relate(a, b, relation, category.c_str(), tol.empty() ? nullptr : tol.c_str(),
                             allow_inversion ? 1 : 0, &verdict, &err);
    pg_generators_free(a);
    pg_generators_free(b);
    if (st != PG_OK) return report_error(st, err);

    OwnedString json;
    pg_verdict_to_json(verdict, &json.ptr);
    std::cout << json.ptr << "\n";
    int code = 2;
    pg_verdict_code_of(verdict, &code);
    pg_verdict_free(verdict);
    return code;
}

int run_verify(const std::string& witness_path, const std::string& a_path,
               const std::string& b_path, const CommonOpts& opts) {
    std::string tol = opts.tol_string();
    std::string witness_text;
    if (int rc = read_input(witness_path, witness_text)) return rc;
    pg_generators* a = nullptr;
    pg_generators* b = nullptr;
    if (int rc = load_generators(a_path, tol, &a)) return rc;
    if (int rc = load_generators(b_path, tol, &b)) {
        pg_generators_free(a);
        return rc;
    }
    OwnedString report;
    double max_residual = 0.0;
    char* err = nullptr;
    pg_status st = pg_verify_witness(witness_text.c_str(), a, b,
                                     tol.empty() ? nullptr : tol.c_str(), &report.ptr,
                                     &max_residual, &err);
    pg_generators_free(a);
    pg_generators_free(b);
    if (st != PG_OK) return report_error(st, err);
    std::cout << report.ptr << "\n";
    std::string text = report.ptr;
    return text.find("\"pass\": true") != std::string::npos ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase groups of nonautonomous linear systems and Riccati equations: "
                 "monodromy extraction and conjugacy classification"};
    app.require_subcommand(1);

    std::string a_path, b_path, witness_path, category = "top";
    bool allow_inversion = false;
    CommonOpts opts;

    auto* mono = app.add_subcommand("monodromy", "compute the phase group of a system spec");
    mono->add_option("input", a_path, "system JSON (or - for stdin)")->required();
    add_common(mono, opts);

    auto add_pair = [&](const char* name, const char* desc) {
        auto* cmd = app.add_subcommand(name, desc);
        cmd->add_option("a", a_path, "first input JSON")->required();
        cmd->add_option("b", b_path, "second input JSON")->required();
        cmd->add_option("--category", category, "top | smooth | rholo | holo");
        add_common(cmd, opts);
        return cmd;
    };
    auto* classify_cmd = add_pair("classify", "decide equivalence of two systems' phase groups");
    classify_cmd->add_flag("--allow-inversion", allow_inversion,
                           "also search generator-inverting index maps");
    add_pair("embed", "decide embedding of the first system into the second");
    add_pair("cover", "decide covering of the second system by the first");

    auto* verify = app.add_subcommand("verify", "verify a stored witness against two inputs");
    verify->add_option("witness", witness_path, "witness JSON")->required();
    verify->add_option("a", a_path, "first input JSON")->required();
    verify->add_option("b", b_path, "second input JSON")->required();
    add_common(verify, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 3 : 0;
    }

    if (app.got_subcommand("monodromy")) return run_monodromy(a_path, opts);
    if (app.got_subcommand("classify"))
        return run_relation("equivalence", a_path, b_path, category, allow_inversion, opts);
    if (app.got_subcommand("embed"))
        return run_relation("embedding", a_path, b_path, category, false, opts);
    if (app.got_subcommand("cover"))
        return run_relation("covering", a_path, b_path, category, false, opts);
    if (app.got_subcommand("verify")) return run_verify(witness_path, a_path, b_path, opts);
    return 3;
}
