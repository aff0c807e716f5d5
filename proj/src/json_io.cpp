#include "phase/json_io.hpp"

#include <sstream>

namespace phase {

namespace {

cplx cplx_from_json(const Json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw Error(ErrorCode::InvalidInput, "expected a number or [re, im] pair");
}

Json cplx_to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

Json scalar_to_json(cplx c, bool real_space) {
    if (real_space) return Json(c.real());
    return cplx_to_json(c);
}

CMat matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::InvalidInput, "expected a matrix");
    const auto rows = j.size();
    const auto cols = j[0].size();
    CMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw Error(ErrorCode::InvalidInput, "ragged matrix rows");
        for (std::size_t k = 0; k < cols; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cplx_from_json(j[i][k]);
    }
    return m;
}

Json matrix_to_json(const CMat& m, bool real_space) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k), real_space));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json rmatrix_to_json(const RMat& m) { return matrix_to_json(m.cast<cplx>(), true); }

BaseKind base_kind_from_string(const std::string& s) {
    if (s == "punctured_plane") return BaseKind::PuncturedPlane;
    if (s == "cylinder") return BaseKind::Cylinder;
    if (s == "torus") return BaseKind::Torus;
    throw Error(ErrorCode::InvalidInput, "unknown base_kind: " + s);
}

std::vector<Pole> poles_from_json(const Json& j, bool scalar) {
    std::vector<Pole> out;
    for (const Json& pj : j) {
        Pole p;
        p.location = cplx_from_json(pj.at("z"));
        for (const Json& tj : pj.at("terms")) {
            PoleTerm t;
            t.order = tj.at("order").get<int>();
            if (scalar) {
                t.coeff = CMat(1, 1);
                t.coeff(0, 0) = cplx_from_json(tj.at("value"));
            } else {
                t.coeff = matrix_from_json(tj.at("matrix"));
            }
            p.terms.push_back(std::move(t));
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<FourierTerm> fourier_from_json(const Json& j, bool scalar) {
    std::vector<FourierTerm> out;
    for (const Json& tj : j) {
        FourierTerm t;
        t.frequency = tj.at("k").get<int>();
        if (scalar) {
            t.coeff = CMat(1, 1);
            t.coeff(0, 0) = cplx_from_json(tj.at("value"));
        } else {
            t.coeff = matrix_from_json(tj.at("matrix"));
        }
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace

Json space_to_json(const Space& s) { return Json{{"kind", to_string(s.kind)}, {"n", s.n}}; }

Space space_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    int n = j.value("n", 1);
    if (kind == "complex_linear") return complex_linear(n);
    if (kind == "complex_projective") return complex_projective(n);
    if (kind == "real_linear") return real_linear(n);
    if (kind == "real_mobius") return real_mobius();
    throw Error(ErrorCode::InvalidInput, "unknown space kind: " + kind);
}

Json generator_set_to_json(const GeneratorSet& g) {
    Json out;
    out["kind"] = "generators";
    out["space"] = space_to_json(g.space);
    Json mats = Json::array();
    for (const CMat& m : g.generators) mats.push_back(matrix_to_json(m, g.space.is_real()));
    out["matrices"] = std::move(mats);
    if (!g.labels.empty()) out["labels"] = g.labels;
    return out;
}

GeneratorSet generator_set_from_json(const Json& j) {
    GeneratorSet g;
    g.space = space_from_json(j.at("space"));
    for (const Json& mj : j.at("matrices")) g.generators.push_back(matrix_from_json(mj));
    if (j.contains("labels")) g.labels = j.at("labels").get<std::vector<std::string>>();
    return g;
}

FuchsianSystemSpec fuchsian_from_json(const Json& j) {
    FuchsianSystemSpec spec;
    spec.dimension = j.at("dimension").get<int>();
    spec.base_kind = base_kind_from_string(j.value("base_kind", "punctured_plane"));
    if (j.contains("base_point")) spec.base_point = cplx_from_json(j.at("base_point"));
    if (j.contains("poles")) spec.poles = poles_from_json(j.at("poles"), /*scalar=*/false);
    if (j.contains("fourier")) spec.fourier = fourier_from_json(j.at("fourier"), /*scalar=*/false);
    spec.projectivize = j.value("projective", false);
    spec.real_form = j.value("real", false);
    return spec;
}

RiccatiSpec riccati_from_json(const Json& j) {
    RiccatiSpec spec;
    spec.base_kind = base_kind_from_string(j.value("base_kind", "punctured_plane"));
    if (j.contains("base_point")) spec.base_point = cplx_from_json(j.at("base_point"));
    const Json& c = j.at("coefficients");
    auto load = [&](const char* key, RiccatiSpec::ScalarCoeff& dst) {
        if (!c.contains(key)) return;
        const Json& cj = c.at(key);
        if (cj.contains("poles")) dst.poles = poles_from_json(cj.at("poles"), /*scalar=*/true);
        if (cj.contains("fourier")) dst.fourier = fourier_from_json(cj.at("fourier"), /*scalar=*/true);
    };
    load("a2", spec.a2);
    load("a1", spec.a1);
    load("a0", spec.a0);
    if (j.contains("real")) spec.real_override = j.at("real").get<bool>();
    return spec;
}

namespace {

Json chain_step_to_json(const CanonicalChainWitness::Step& step) {
    if (std::holds_alternative<RMat>(step)) return Json{{"linear", rmatrix_to_json(std::get<RMat>(step))}};
    Json blocks = Json::array();
    for (const auto& b : std::get<CanonicalChainWitness::PowerLayer>(step))
        blocks.push_back(Json{{"offset", b.offset},
                              {"dim", b.dim},
                              {"alpha", cplx_to_json(b.alpha)},
                              {"conj", b.conj}});
    return Json{{"powers", std::move(blocks)}};
}

CanonicalChainWitness::Step chain_step_from_json(const Json& j) {
    if (j.contains("linear")) return RMat(matrix_from_json(j.at("linear")).real());
    CanonicalChainWitness::PowerLayer layer;
    for (const Json& bj : j.at("powers"))
        layer.push_back({bj.at("offset").get<int>(), bj.at("dim").get<int>(),
                         cplx_from_json(bj.at("alpha")), bj.value("conj", false)});
    return layer;
}

} // namespace

Json witness_to_json(const Witness& w) {
    Json out;
    if (w.is<DiagPowerWitness>()) {
        const auto& d = w.as<DiagPowerWitness>();
        out["type"] = "diag_power";
        out["S"] = matrix_to_json(d.S, false);
        out["T"] = matrix_to_json(d.T, false);
        out["perm"] = d.perm;
        Json alphas = Json::array(), gammas = Json::array();
        for (cplx a : d.alphas) alphas.push_back(cplx_to_json(a));
        for (cplx g : d.gammas) gammas.push_back(cplx_to_json(g));
        out["alphas"] = std::move(alphas);
        out["gammas"] = std::move(gammas);
        out["conj"] = d.conj;
        out["projective"] = d.projective;
        out["swapped_fixed_points"] = d.swapped_fixed_points;
    } else if (w.is<LinearMapWitness>()) {
        const auto& l = w.as<LinearMapWitness>();
        out["type"] = "linear_map";
        out["S"] = matrix_to_json(l.S, false);
        out["conj"] = l.conj;
        out["projective"] = l.projective;
    } else if (w.is<RLinearMapWitness>()) {
        const auto& r = w.as<RLinearMapWitness>();
        out["type"] = "rlinear_map";
        out["A"] = matrix_to_json(r.A, false);
        out["B"] = matrix_to_json(r.B, false);
    } else if (w.is<MobiusMapWitness>()) {
        const auto& m = w.as<MobiusMapWitness>();
        out["type"] = "mobius_map";
        out["S"] = rmatrix_to_json(m.S);
        out["conj"] = m.conj;
    } else if (w.is<CircleMapWitness>()) {
        const auto& c = w.as<CircleMapWitness>();
        out["type"] = "circle_map";
        out["sign"] = c.sign;
        out["shift"] = c.shift;
        out["S"] = rmatrix_to_json(c.S);
        out["T"] = rmatrix_to_json(c.T);
    } else if (w.is<CanonicalChainWitness>()) {
        const auto& c = w.as<CanonicalChainWitness>();
        out["type"] = "canonical_chain";
        Json steps = Json::array();
        for (const auto& s : c.steps) steps.push_back(chain_step_to_json(s));
        out["steps"] = std::move(steps);
    } else if (w.is<IndexMapWitness>()) {
        const auto& i = w.as<IndexMapWitness>();
        out["type"] = "index_map";
        out["mapping"] = i.mapping;
        if (!i.inverted.empty()) out["inverted"] = i.inverted;
        out["inner"] = witness_to_json(*i.inner);
    }
    return out;
}

namespace {

void require_bijection(const std::vector<int>& perm, std::size_t n, const char* what) {
    std::vector<bool> seen(n, false);
    if (perm.size() != n)
        throw Error(ErrorCode::InvalidInput, std::string(what) + ": permutation size mismatch");
    for (int p : perm) {
        if (p < 0 || static_cast<std::size_t>(p) >= n || seen[static_cast<std::size_t>(p)])
            throw Error(ErrorCode::InvalidInput, std::string(what) + ": not a bijection");
        seen[static_cast<std::size_t>(p)] = true;
    }
}

} // namespace

Witness witness_from_json(const Json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "diag_power") {
        DiagPowerWitness d;
        d.S = matrix_from_json(j.at("S"));
        d.T = matrix_from_json(j.at("T"));
        d.perm = j.at("perm").get<std::vector<int>>();
        for (const Json& a : j.at("alphas")) d.alphas.push_back(cplx_from_json(a));
        for (const Json& g : j.at("gammas")) d.gammas.push_back(cplx_from_json(g));
        d.conj = j.value("conj", false);
        d.projective = j.value("projective", false);
        d.swapped_fixed_points = j.value("swapped_fixed_points", false);
        const std::size_t n = static_cast<std::size_t>(d.S.rows());
        require_bijection(d.perm, n, "diag_power witness");
        if (d.alphas.size() != n || (!d.gammas.empty() && d.gammas.size() != n))
            throw Error(ErrorCode::InvalidInput, "diag_power witness: field sizes disagree");
        for (cplx g : d.gammas)
            if (std::abs(g) == 0.0)
                throw Error(ErrorCode::InvalidInput, "diag_power witness: zero scale factor");
        return Witness{d};
    }
    if (type == "linear_map") {
        LinearMapWitness l;
        l.S = matrix_from_json(j.at("S"));
        l.conj = j.value("conj", false);
        l.projective = j.value("projective", false);
        return Witness{l};
    }
    if (type == "rlinear_map") {
        RLinearMapWitness r;
        r.A = matrix_from_json(j.at("A"));
        r.B = matrix_from_json(j.at("B"));
        return Witness{r};
    }
    if (type == "mobius_map") {
        MobiusMapWitness m;
        m.S = matrix_from_json(j.at("S")).real();
        m.conj = j.value("conj", false);
        return Witness{m};
    }
    if (type == "circle_map") {
        CircleMapWitness c;
        c.sign = j.at("sign").get<int>();
        c.shift = j.at("shift").get<double>();
        if (j.contains("S")) c.S = matrix_from_json(j.at("S")).real();
        if (j.contains("T")) c.T = matrix_from_json(j.at("T")).real();
        return Witness{c};
    }
    if (type == "canonical_chain") {
        CanonicalChainWitness c;
        for (const Json& sj : j.at("steps")) c.steps.push_back(chain_step_from_json(sj));
        for (const auto& step : c.steps) {
            if (!std::holds_alternative<CanonicalChainWitness::PowerLayer>(step)) continue;
            for (const auto& b : std::get<CanonicalChainWitness::PowerLayer>(step))
                if (b.offset < 0 || (b.dim != 1 && b.dim != 2))
                    throw Error(ErrorCode::InvalidInput, "canonical_chain witness: bad block");
        }
        return Witness{c};
    }
    if (type == "index_map") {
        IndexMapWitness i;
        i.mapping = j.at("mapping").get<std::vector<int>>();
        for (int m : i.mapping)
            if (m < 0) throw Error(ErrorCode::InvalidInput, "index_map witness: negative index");
        if (j.contains("inverted")) i.inverted = j.at("inverted").get<std::vector<bool>>();
        i.inner = std::make_shared<Witness>(witness_from_json(j.at("inner")));
        return Witness{i};
    }
    throw Error(ErrorCode::InvalidInput, "unknown witness type: " + type);
}

Json verdict_to_json(const Verdict& v) {
    Json out;
    out["status"] = to_string(v.status);
    out["category"] = to_string(v.category);
    if (!v.relation.empty()) out["relation"] = v.relation;
    if (v.status == Status::NotEquivalent) out["reason"] = v.reason;
    if (v.status == Status::Inconclusive) out["unmet_premise"] = v.unmet_premise;
    if (v.witness) out["witness"] = witness_to_json(*v.witness);
    if (v.residual_report)
        out["residual_report"] = Json{{"max_residual", v.residual_report->max_residual},
                                      {"samples", v.residual_report->samples}};
    out["seed"] = v.seed;
    if (!v.details.empty()) {
        Json d;
        for (const auto& [key, value] : v.details) d[key] = cplx_to_json(value);
        out["details"] = std::move(d);
    }
    return out;
}

GeneratorSet resolve_generators(const Json& j, const ToleranceConfig& tol,
                                IntegrationStats* stats) {
    std::string kind = j.value("kind", "generators");
    if (kind == "generators") return generator_set_from_json(j);
    if (kind == "fuchsian_linear") {
        FuchsianSystemSpec spec = fuchsian_from_json(j);
        PhaseGroupResult r = phase_group(spec, tol);
        if (stats) *stats = r.stats;
        return std::move(r.generators);
    }
    if (kind == "fuchsian_riccati") {
        FuchsianSystemSpec spec = riccati_lift(riccati_from_json(j));
        PhaseGroupResult r = phase_group(spec, tol);
        if (stats) *stats = r.stats;
        return std::move(r.generators);
    }
    throw Error(ErrorCode::InvalidInput, "unknown input kind: " + kind);
}

void apply_tolerance_overrides(ToleranceConfig& tol, const std::string& overrides) {
    std::stringstream ss(overrides);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidInput, "tolerance override must be key=value: " + item);
        std::string key = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        try {
            if (key == "eig_rel") tol.eig_rel = std::stod(value);
            else if (key == "det_floor") tol.det_floor = std::stod(value);
            else if (key == "residual") tol.residual = std::stod(value);
            else if (key == "ode_rel") tol.ode_rel = std::stod(value);
            else if (key == "s_max" || key == "S_max") tol.s_max = std::stoi(value);
            else if (key == "k_max" || key == "K_max") tol.k_max = std::stoi(value);
            else if (key == "samples") tol.samples = std::stoi(value);
            else if (key == "seed") tol.seed = std::stoull(value);
            else throw Error(ErrorCode::InvalidInput, "unknown tolerance key: " + key);
        } catch (const std::invalid_argument&) {
            throw Error(ErrorCode::InvalidInput, "bad tolerance value: " + item);
        }
    }
    tol.validate();
}

std::string dump_json(const Json& j) { return j.dump(2); }

Json parse_json(const std::string& text) {
    Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw Error(ErrorCode::InvalidInput, "malformed JSON input");
    return j;
}

} // namespace phase
