#include "spacedmod/pipeline.hpp"

#include <algorithm>

namespace spacedmod {

using nlohmann::json;

bool RunReport::has_error() const {
    return std::any_of(stages.begin(), stages.end(), [](const StageReport& s) { return s.status == "error"; });
}

bool RunReport::has_violation() const {
    return std::any_of(stages.begin(), stages.end(),
                       [](const StageReport& s) { return s.status == "certified-violation"; });
}

int RunReport::exit_code() const {
    if (has_error()) return 1;
    return has_violation() ? 2 : 0;
}

json RunReport::to_json() const {
    json j;
    j["stages"] = json::array();
    for (const auto& s : stages) {
        json e{{"stage", s.name}, {"status", s.status}};
        if (!s.payload.is_null()) e["payload"] = s.payload;
        j["stages"].push_back(std::move(e));
    }
    if (!final_payload.is_null()) j["final"] = final_payload;
    j["exit_code"] = exit_code();
    return j;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) {
            const ExactScalar& x = m.at(i, j);
            if (x.is_q()) {
                const Rat& q = x.rat();
                Int num = boost::multiprecision::numerator(q);
                if (boost::multiprecision::denominator(q) == 1 &&
                    num >= std::numeric_limits<std::int64_t>::min() &&
                    num <= std::numeric_limits<std::int64_t>::max())
                    row.push_back(static_cast<std::int64_t>(num));
                else
                    row.push_back(x.str());
            } else {
                row.push_back(x.fp().r);
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

json certs_to_json(const std::vector<Certificate>& certs) {
    json j = json::array();
    for (const auto& c : certs) j.push_back(c.to_json());
    return j;
}

struct PipelineRun {
    RunReport report;
    PipelineState state;
    bool violated = false;

    void stage_ok(const std::string& name, json payload = nullptr) {
        report.stages.push_back({name, "ok", std::move(payload)});
    }
    void stage_violation(const std::string& name, json payload) {
        report.stages.push_back({name, "certified-violation", std::move(payload)});
        violated = true;
    }
    void stage_error(const std::string& name, const std::string& message, json extra = nullptr) {
        json payload{{"message", message}};
        if (!extra.is_null()) payload["detail"] = extra;
        report.stages.push_back({name, "error", std::move(payload)});
    }
};

std::string kind_str(MorKind k) { return k == MorKind::Prime ? "prime" : "double"; }

json morphisms_to_json(const ClassifiedBasis& b) {
    json arr = json::array();
    for (const auto& m : b.morphisms) {
        json pos = json::array();
        for (const Step& s : m.positions) pos.push_back({s.row, s.col});
        json e{{"from", b.pres.objects[m.from].name},
               {"to", b.pres.objects[m.to].name},
               {"kind", kind_str(m.kind)},
               {"short", m.is_short},
               {"positions", pos}};
        if (m.param) e["parameter"] = m.param->str();
        arr.push_back(std::move(e));
    }
    return arr;
}

json endo_to_json(const EndoType& t) {
    switch (t.kind) {
        case EndoKind::D1: return {{"kind", "d1"}};
        case EndoKind::D2: return {{"kind", "d2"}};
        case EndoKind::D3Chain: return {{"kind", "d3_chain"}};
        case EndoKind::D3Double: return {{"kind", "d3_double"}, {"lambda", t.lambda->str()}};
    }
    return {};
}

json hom_to_json(const HomClassification& h, const SpacedModulePresentation& p) {
    json steps = json::array();
    for (const Step& s : h.steps) steps.push_back({s.row, s.col});
    json e{{"from", p.objects[h.from].name}, {"to", p.objects[h.to].name}, {"steps", steps}};
    switch (h.homcase) {
        case HomCase::Saturated: e["case"] = "saturated"; break;
        case HomCase::TwoStep: e["case"] = "two_step"; break;
        case HomCase::DiagOneDouble:
            e["case"] = "diag_one_double";
            e["variant"] = h.diag_variant;
            break;
        case HomCase::DiagTwoDouble: e["case"] = "diag_two_double"; break;
    }
    if (h.lambda) e["lambda"] = h.lambda->str();
    if (h.mu) e["mu"] = h.mu->str();
    return e;
}

PipelineRun analyze_core_impl(const std::string& input_text);

/// Runs parse .. graph checks; the later rescaling stages are appended by
/// the specific commands. Any internal failure is reported as an error
/// stage rather than escaping the pipeline.
PipelineRun analyze_core(const std::string& input_text) {
    try {
        return analyze_core_impl(input_text);
    } catch (const std::exception& e) {
        PipelineRun run;
        run.stage_error("internal", e.what());
        return run;
    }
}

PipelineRun analyze_core_impl(const std::string& input_text) {
    PipelineRun run;
    SpacedModulePresentation parsed;
    try {
        parsed = parse_presentation(input_text);
    } catch (const ParseError& e) {
        run.stage_error("parse", e.what(), json{{"line", e.line}, {"column", e.column}});
        return run;
    } catch (const std::exception& e) {
        run.stage_error("parse", e.what());
        return run;
    }
    run.state.input = canonicalize(parsed);
    const auto& p = *run.state.input;
    run.stage_ok("parse", json{{"field", p.field.str()}, {"objects", p.num_objects()}});

    ValidationReport vr = validate(p);
    if (!vr.valid()) {
        json issues = json::array();
        for (const auto& i : vr.issues) {
            const char* kind = i.kind == ValidationIssue::Kind::Independence ? "independence"
                               : i.kind == ValidationIssue::Kind::Closure   ? "closure"
                                                                            : "nilpotency";
            issues.push_back({{"kind", kind}, {"detail", i.detail}, {"objects", i.involved}});
        }
        run.stage_violation("validate", json{{"issues", issues}});
        return run;
    }
    run.stage_ok("validate");

    std::vector<Certificate> tri_certs;
    json fil_dims = json::object();
    for (int a = 0; a < p.num_objects(); ++a) {
        Filtration fil = radical_filtration(p, a);
        fil_dims[p.objects[a].name] = fil.dims();
        TriangularResult tr = triangular_basis(p, fil);
        if (tr.certificate) tri_certs.push_back(*tr.certificate);
        if (tr.basis) run.state.tri_bases.push_back(*tr.basis);
    }
    if (!tri_certs.empty()) {
        run.stage_violation("triangular", json{{"filtration_dims", fil_dims}, {"certificates", certs_to_json(tri_certs)}});
        return run;
    }
    run.state.rebased = rebase(p, run.state.tri_bases);
    run.stage_ok("triangular", json{{"filtration_dims", fil_dims}});

    BasisBuild bb = build_reduced_basis(*run.state.rebased, run.state.tri_bases);
    run.state.endos = bb.endos;
    run.state.homs = bb.homs;
    json basis_payload;
    {
        json endos = json::object();
        for (const auto& [obj, t] : bb.endos) endos[p.objects[obj].name] = endo_to_json(t);
        json homs = json::array();
        for (const auto& [key, h] : bb.homs) homs.push_back(hom_to_json(h, p));
        basis_payload = json{{"endomorphisms", endos}, {"hom_spaces", homs}};
    }
    if (!bb.basis) {
        basis_payload["certificates"] = certs_to_json(bb.certificates);
        run.stage_violation("basis", std::move(basis_payload));
        return run;
    }
    run.state.basis = bb.basis;
    basis_payload["morphisms"] = morphisms_to_json(*bb.basis);
    basis_payload["conditions"] = bb.conditions->to_json();
    {
        json counts = json::object();
        for (const auto& [key, n] : bb.basis->double_counts)
            counts[p.objects[key.first].name + "->" + p.objects[key.second].name] = n;
        basis_payload["double_directions"] = counts;
    }
    if (!bb.certificates.empty()) {
        basis_payload["certificates"] = certs_to_json(bb.certificates);
        run.stage_violation("basis", std::move(basis_payload));
    } else if (!bb.conditions->reduced()) {
        run.stage_violation("basis", std::move(basis_payload));
    } else {
        run.stage_ok("basis", std::move(basis_payload));
    }

    PosetBuild pb = build_poset(*run.state.basis);
    run.state.poset = pb.poset;
    json poset_payload;
    {
        json rel = json::array();
        for (int x = 0; x < pb.poset.size(); ++x)
            for (int y = 0; y < pb.poset.size(); ++y)
                if (x != y && pb.poset.le(x, y))
                    rel.push_back(pb.poset.names[static_cast<std::size_t>(x)] + "<" +
                                  pb.poset.names[static_cast<std::size_t>(y)]);
        poset_payload = json{{"elements", pb.poset.names}, {"relations", rel}};
    }
    if (!pb.certificates.empty()) {
        poset_payload["certificates"] = certs_to_json(pb.certificates);
        run.stage_violation("poset", std::move(poset_payload));
    } else {
        run.stage_ok("poset", std::move(poset_payload));
    }

    std::vector<Certificate> pc = check_poset_conditions(*run.state.poset);
    if (!pc.empty()) run.stage_violation("poset_checks", json{{"certificates", certs_to_json(pc)}});
    else run.stage_ok("poset_checks");

    ArrowGraph g = build_gamma(*run.state.basis, *run.state.poset);
    run.state.graph = g;
    {
        json pairs = json::array();
        for (const ArrowPair& pr : g.pairs) {
            const Arrow& a1 = g.arrows[static_cast<std::size_t>(pr.first)];
            const Arrow& a2 = g.arrows[static_cast<std::size_t>(pr.second)];
            pairs.push_back({{"id", pr.id},
                             {"weak", pr.weak},
                             {"arrows",
                              {run.state.poset->names[static_cast<std::size_t>(a1.source)] + "->" +
                                   run.state.poset->names[static_cast<std::size_t>(a1.target)],
                               run.state.poset->names[static_cast<std::size_t>(a2.source)] + "->" +
                                   run.state.poset->names[static_cast<std::size_t>(a2.target)]}}});
        }
        run.stage_ok("graph", json{{"pairs", pairs}, {"dot", to_dot(g, *run.state.poset)}});
    }

    std::vector<Certificate> gc = check_gamma_conditions(g, *run.state.poset, run.state.basis->double_counts);
    if (!gc.empty()) run.stage_violation("graph_checks", json{{"certificates", certs_to_json(gc)}});
    else run.stage_ok("graph_checks");
    return run;
}

json system_to_json(const ExponentSystem& sys) {
    json rows = json::array();
    for (std::size_t j = 0; j < sys.a.size(); ++j) {
        json coeffs = json::array();
        for (const Int& v : sys.a[j]) coeffs.push_back(v.str());
        rows.push_back({{"pair", sys.pair_ids[j]},
                        {"coefficients", coeffs},
                        {"lambda", sys.lambdas[j].str()},
                        {"p1", sys.vertex_names[static_cast<std::size_t>(sys.indices[j][0])]},
                        {"p2", sys.vertex_names[static_cast<std::size_t>(sys.indices[j][1])]},
                        {"q1", sys.vertex_names[static_cast<std::size_t>(sys.indices[j][2])]},
                        {"q2", sys.vertex_names[static_cast<std::size_t>(sys.indices[j][3])]}});
    }
    return json{{"vertices", sys.vertex_names}, {"rows", rows}};
}

json kernel_to_json(const KernelAnalysis& ka, const ExponentSystem& sys, const ArrowGraph& g, const Poset& p,
                    RescaleMode mode) {
    json gens = json::array();
    for (const auto& w : ka.kernel) {
        json z = json::array();
        for (const Int& v : w.row_weights) z.push_back(v.str());
        Coeff residual = !sys.field.is_q() ? Coeff::scalar(ExactScalar::one(sys.field))
                                           : Coeff::monomial(RadMonomial::one());
        for (std::size_t j = 0; j < sys.lambdas.size(); ++j) {
            Coeff lam = mode == RescaleMode::Symbolic && sys.field.is_q()
                            ? Coeff::monomial(RadMonomial::symbol("lambda_" + std::to_string(j + 1)))
                            : Coeff::scalar(sys.lambdas[j]);
            residual = residual.mul(lam.pow_int(w.row_weights[j]));
        }
        gens.push_back({{"z", z},
                        {"residual", residual.str()},
                        {"axioms", {{"antisymmetry", w.antisymmetry_ok}, {"flow", w.flow_ok}}}});
    }
    json obst = json::array();
    for (const auto& o : ka.obstructions) obst.push_back(o.to_json(g, p));
    return json{{"generators", gens}, {"obstructions", obst}};
}

}  // namespace

json basis_document(const ClassifiedBasis& b, const Poset& p, const RescaledBasis& r, const MultVerdict& v) {
    json doc;
    doc["mode"] = r.mode == RescaleMode::Symbolic ? "symbolic" : "numeric";
    doc["field"] = b.pres.field.str();
    doc["rank"] = v.rank;
    doc["multiplicative"] = v.multiplicative;
    json verts = json::array();
    for (int i = 0; i < p.size(); ++i)
        verts.push_back({{"name", p.names[static_cast<std::size_t>(i)]},
                         {"object", b.pres.objects[p.elements[static_cast<std::size_t>(i)].object].name},
                         {"layer", p.elements[static_cast<std::size_t>(i)].layer},
                         {"scale", r.vertex_scale[static_cast<std::size_t>(i)].str()}});
    doc["vertices"] = std::move(verts);
    json tris = json::object();
    for (const auto& tb : b.bases) tris[b.pres.objects[tb.object].name] = matrix_to_json(tb.change);
    doc["triangular_bases"] = std::move(tris);
    json morphs = json::array();
    for (const auto& m : r.morphisms) {
        json pos = json::array(), coeffs = json::array();
        for (const Step& s : m.positions) pos.push_back({s.row, s.col});
        for (const Coeff& c : m.coeffs) coeffs.push_back(c.str());
        morphs.push_back({{"from", b.pres.objects[m.from].name},
                          {"to", b.pres.objects[m.to].name},
                          {"kind", kind_str(m.kind)},
                          {"short", m.is_short},
                          {"positions", pos},
                          {"coefficients", coeffs}});
    }
    doc["morphisms"] = std::move(morphs);
    return doc;
}

RunReport run_analyze(const std::string& input_text) {
    return analyze_core(input_text).report;
}

RunReport run_certify(const std::string& input_text) {
    PipelineRun run = analyze_core(input_text);
    if (!run.state.basis || !run.state.graph) return run.report;
    ExponentSystem sys = exponent_system(*run.state.basis, *run.state.graph, *run.state.poset);
    run.stage_ok("system", system_to_json(sys));
    KernelAnalysis ka = weight_kernel(sys, *run.state.graph, *run.state.poset, RescaleMode::Numeric);
    json payload = kernel_to_json(ka, sys, *run.state.graph, *run.state.poset, RescaleMode::Numeric);
    if (!ka.obstructions.empty()) run.stage_violation("kernel", std::move(payload));
    else run.stage_ok("kernel", std::move(payload));
    run.report.final_payload = json{{"kernel_generators", run.report.stages.back().payload["generators"]},
                                    {"obstructions", run.report.stages.back().payload["obstructions"]}};
    return run.report;
}

RunReport run_normalize(const std::string& input_text, RescaleMode mode) {
    PipelineRun run = analyze_core(input_text);
    if (!run.state.basis || !run.state.graph) return run.report;
    ExponentSystem sys = exponent_system(*run.state.basis, *run.state.graph, *run.state.poset);
    run.stage_ok("system", system_to_json(sys));
    KernelAnalysis ka = weight_kernel(sys, *run.state.graph, *run.state.poset, mode);
    {
        json payload = kernel_to_json(ka, sys, *run.state.graph, *run.state.poset, mode);
        if (!ka.obstructions.empty()) run.stage_violation("kernel", std::move(payload));
        else run.stage_ok("kernel", std::move(payload));
    }
    if (run.violated) {
        // synthesis halted; the checks above still ran
        json bundle = json::array();
        for (const auto& s : run.report.stages)
            if (s.status == "certified-violation") bundle.push_back({{"stage", s.name}, {"payload", s.payload}});
        run.report.final_payload = json{{"certificates", bundle}};
        return run.report;
    }

    SolveOutcome so = solve_rescaling(sys, mode);
    if (so.root_failure) {
        run.stage_violation("solve", json{{"certificates", json::array({so.root_failure->to_json()})}});
        run.report.final_payload = json{{"certificates", json::array({so.root_failure->to_json()})}};
        return run.report;
    }
    if (!so.solution) {
        json obst = json::array();
        for (const auto& o : so.obstructions) obst.push_back(o.to_json(*run.state.graph, *run.state.poset));
        run.stage_violation("solve", json{{"obstructions", obst}});
        run.report.final_payload = json{{"obstructions", obst}};
        return run.report;
    }
    if (!verify_solution(sys, *so.solution, mode)) {
        run.stage_error("solve", "solution failed substitution into the rescaling equations");
        return run.report;
    }
    json xmap = json::object();
    for (int i = 0; i < run.state.poset->size(); ++i)
        xmap[run.state.poset->names[static_cast<std::size_t>(i)]] =
            so.solution->x[static_cast<std::size_t>(i)].str();
    json solve_payload{{"x", xmap}};
    if (so.promoted_to_symbolic || so.solution->promoted_to_symbolic)
        solve_payload["notice"] = "nonpositive double parameter; run promoted to symbolic mode";
    run.stage_ok("solve", std::move(solve_payload));

    RescaledBasis rb = apply_rescaling(*run.state.basis, *run.state.poset, *so.solution);
    MultVerdict v = verify_multiplicative(rb);
    if (!v.multiplicative || v.rank > 2) {
        run.stage_error("verify", "rescaled basis failed the multiplicativity check", v.detail);
        return run.report;
    }
    run.stage_ok("verify", json{{"multiplicative", v.multiplicative}, {"rank", v.rank}});
    run.report.final_payload = basis_document(*run.state.basis, *run.state.poset, rb, v);
    return run.report;
}

json run_witness(FamilyKind kind, const std::vector<ExactScalar>& params, const FieldDesc& field,
                 std::uint64_t seed, int lemma6_i, int lemma6_j) {
    SpacedModulePresentation ctx = family_context(kind, field);
    json out;
    out["family"] = family_to_string(kind);
    out["field"] = field.str();
    out["context"] = json::parse(serialize_presentation(ctx));
    json members = json::array();
    std::vector<SpaceOnM> spaces;
    for (const ExactScalar& lam : params) {
        SpaceOnM s = build_family(kind, ctx, lam, lemma6_i, lemma6_j);
        json t = json::array();
        for (int o : s.target) t.push_back(ctx.objects[o].name);
        members.push_back({{"parameter", lam.str()}, {"target", t}, {"h", matrix_to_json(s.h)}});
        spaces.push_back(std::move(s));
    }
    out["members"] = std::move(members);
    json pairwise = json::array();
    for (std::size_t i = 0; i < spaces.size(); ++i)
        for (std::size_t j = i; j < spaces.size(); ++j) {
            IsoResult r = spaces_isomorphic(spaces[i], spaces[j], ctx, seed);
            json e{{"left", params[i].str()}, {"right", params[j].str()}};
            if (r.scale_exceeded) e["result"] = "scale_exceeded";
            else if (r.witness) {
                e["result"] = "isomorphic";
                e["phi"] = matrix_to_json(r.witness->phi);
                e["xi"] = matrix_to_json(r.witness->xi);
            } else {
                e["result"] = "not_isomorphic";
            }
            pairwise.push_back(std::move(e));
        }
    out["pairwise"] = std::move(pairwise);
    return out;
}

json verify_basis_document(const json& doc) {
    FieldDesc field = FieldDesc::rationals();
    if (doc.contains("field")) {
        std::string fs = doc.at("field").get<std::string>();
        if (fs != "Q" && fs.size() > 1 && fs[0] == 'F') field = FieldDesc::prime_field(std::stoll(fs.substr(1)));
    }
    // reconstruct a presentation generated by the emitted basis morphisms
    SpacedModulePresentation pres;
    pres.field = field;
    std::map<std::string, int> dims;
    for (const json& v : doc.at("vertices")) {
        std::string obj = v.at("object").get<std::string>();
        dims[obj] = std::max(dims[obj], v.at("layer").get<int>());
    }
    for (const auto& [name, d] : dims) {
        pres.objects.push_back({name, pres.num_objects()});
        pres.dims.push_back(d);
    }
    ClassifiedBasis basis;
    bool coefficients_unit = true;
    for (const json& m : doc.at("morphisms")) {
        int from = pres.object_index(m.at("from").get<std::string>());
        int to = pres.object_index(m.at("to").get<std::string>());
        BasisMorphism bm;
        bm.from = from;
        bm.to = to;
        bm.kind = m.at("kind").get<std::string>() == "prime" ? MorKind::Prime : MorKind::Double;
        bm.is_short = m.value("short", false);
        Matrix mat(pres.dim(to), pres.dim(from), field);
        const json& pos = m.at("positions");
        const json& coeffs = m.at("coefficients");
        for (std::size_t k = 0; k < pos.size(); ++k) {
            Step s{pos[k][0].get<int>(), pos[k][1].get<int>()};
            bm.positions.push_back(s);
            if (coeffs[k].get<std::string>() != "1") coefficients_unit = false;
            mat.at(s.row - 1, s.col - 1) = ExactScalar::one(field);
        }
        bm.mat = mat;
        if (bm.kind == MorKind::Double) bm.param = ExactScalar::one(field);
        pres.rad[{from, to}].push_back(mat);
        basis.morphisms.push_back(std::move(bm));
    }
    basis.pres = canonicalize(pres);
    for (int i = 0; i < pres.num_objects(); ++i)
        basis.bases.push_back({i, Matrix::identity(pres.dim(i), field)});
    ConditionReport rep = check_basis_conditions(basis);
    MultVerdict v = verify_multiplicative(basis);
    return json{{"conditions", rep.to_json()},
                {"multiplicative", v.multiplicative && coefficients_unit},
                {"rank", v.rank}};
}

}  // namespace spacedmod
