#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spacedmod/pipeline.hpp"

#include <fstream>
#include <sstream>

using namespace spacedmod;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(SPACEDMOD_DATA_DIR) + "/corpus/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> violated_stages(const RunReport& r) {
    std::vector<std::string> out;
    for (const auto& s : r.stages)
        if (s.status == "certified-violation") out.push_back(s.name);
    return out;
}

std::vector<std::string> cert_codes(const RunReport& r) {
    std::vector<std::string> out;
    for (const auto& s : r.stages) {
        if (s.status != "certified-violation" || !s.payload.is_object()) continue;
        if (s.payload.contains("certificates"))
            for (const auto& c : s.payload.at("certificates")) out.push_back(c.at("code").get<std::string>());
    }
    return out;
}

}  // namespace

TEST_CASE("valid corpus entries analyze clean with exit zero") {
    for (const char* name : {"primes_d1.json", "single_d2.json", "single_d3_full.json",
                             "endo_double_d3.json", "two_step_pair.json", "diag_one_double.json",
                             "lemma9_weak.json"}) {
        RunReport r = run_analyze(slurp(name));
        CHECK(r.exit_code() == 0);
        CHECK(violated_stages(r).empty());
    }
}

TEST_CASE("an oversized object is certified with exit two") {
    RunReport r = run_analyze(slurp("d4_reject.json"));
    CHECK(r.exit_code() == 2);
    CHECK(violated_stages(r) == std::vector<std::string>{"triangular"});
    CHECK(cert_codes(r) == std::vector<std::string>{"not_finitely_spaced"});
}

TEST_CASE("malformed input exits with code one and a located parse error") {
    RunReport r = run_analyze("{not json");
    CHECK(r.exit_code() == 1);
    REQUIRE(r.stages.size() == 1);
    CHECK(r.stages[0].status == "error");
    CHECK(r.stages[0].payload.contains("detail"));
}

TEST_CASE("normalize emits a verified multiplicative basis") {
    RunReport r = run_normalize(slurp("two_step_pair.json"), RescaleMode::Numeric);
    REQUIRE(r.exit_code() == 0);
    const auto& fin = r.final_payload;
    CHECK(fin.at("multiplicative") == true);
    CHECK(fin.at("rank") == 2);
    // every emitted product coefficient is exactly one
    for (const auto& m : fin.at("morphisms"))
        for (const auto& c : m.at("coefficients")) CHECK(c.get<std::string>() == "1");
}

TEST_CASE("normalize reports are deterministic") {
    std::string text = slurp("lemma9_weak.json");
    auto a = run_normalize(text, RescaleMode::Numeric).to_json().dump();
    auto b = run_normalize(text, RescaleMode::Numeric).to_json().dump();
    CHECK(a == b);
}

TEST_CASE("the emitted basis re-ingests through the verification-only path") {
    for (const char* name : {"two_step_pair.json", "diag_one_double.json", "lemma9_weak.json"}) {
        RunReport r = run_normalize(slurp(name), RescaleMode::Numeric);
        REQUIRE(r.exit_code() == 0);
        nlohmann::json verdict = verify_basis_document(r.final_payload);
        CHECK(verdict.at("multiplicative") == true);
        CHECK(verdict.at("rank").get<int>() <= 2);
        const auto& cond = verdict.at("conditions");
        for (const char* letter : {"a", "b", "c", "d", "e"}) CHECK(cond.at(letter).at("pass") == true);
        CHECK(cond.at("structural").at("pass") == true);
    }
}

TEST_CASE("a violated entry halts synthesis but still reports the kernel check") {
    RunReport r = run_normalize(slurp("obstructed_diamond.json"), RescaleMode::Numeric);
    CHECK(r.exit_code() == 2);
    bool kernel_ran = false, solve_ran = false;
    for (const auto& s : r.stages) {
        if (s.name == "kernel") kernel_ran = true;
        if (s.name == "solve") solve_ran = true;
    }
    CHECK(kernel_ran);
    CHECK_FALSE(solve_ran);
    CHECK(r.final_payload.contains("certificates"));
}

TEST_CASE("certify prints kernel generators with residuals") {
    RunReport r = run_certify(slurp("obstructed_diamond.json"));
    CHECK(r.exit_code() == 2);
    const auto& gens = r.final_payload.at("kernel_generators");
    REQUIRE(gens.size() == 1);
    CHECK(gens[0].at("residual") == "2^1");
    CHECK(gens[0].at("axioms").at("antisymmetry") == true);
    CHECK(gens[0].at("axioms").at("flow") == true);
    const auto& obst = r.final_payload.at("obstructions");
    REQUIRE(obst.size() == 1);
}

TEST_CASE("certify reports an empty obstruction list on an unobstructed entry") {
    RunReport r = run_certify(slurp("two_step_pair.json"));
    CHECK(r.exit_code() == 0);
    CHECK(r.final_payload.at("obstructions").empty());
}

TEST_CASE("mutation fixtures produce exactly the expected lemma certificates") {
    struct Row {
        const char* file;
        const char* code;
    };
    for (Row row : {Row{"mutation_l6.json", "lemma6"}, Row{"mutation_l7.json", "lemma7"},
                    Row{"mutation_l8.json", "lemma8"}}) {
        RunReport r = run_analyze(slurp(row.file));
        CHECK(r.exit_code() == 2);
        auto codes = cert_codes(r);
        REQUIRE_FALSE(codes.empty());
        for (const auto& c : codes) CHECK(c == row.code);
    }
}

TEST_CASE("the lemma2 and lemma3 configuration fixtures are certified by name") {
    for (auto [file, code] : std::vector<std::pair<const char*, const char*>>{
             {"ctx_lemma2.json", "lemma2"}, {"ctx_lemma3.json", "lemma3"}}) {
        RunReport r = run_analyze(slurp(file));
        CHECK(r.exit_code() == 2);
        auto codes = cert_codes(r);
        CHECK(std::find(codes.begin(), codes.end(), code) != codes.end());
    }
}

TEST_CASE("the arrow graph ships in DOT form inside the report") {
    RunReport r = run_analyze(slurp("lemma9_weak.json"));
    bool found = false;
    for (const auto& s : r.stages)
        if (s.name == "graph") {
            found = true;
            std::string dot = s.payload.at("dot").get<std::string>();
            CHECK(dot.rfind("digraph", 0) == 0);
        }
    CHECK(found);
}

TEST_CASE("symbolic normalize emits formally unit coefficients") {
    RunReport r = run_normalize(slurp("two_step_pair.json"), RescaleMode::Symbolic);
    REQUIRE(r.exit_code() == 0);
    CHECK(r.final_payload.at("mode") == "symbolic");
    for (const auto& m : r.final_payload.at("morphisms"))
        for (const auto& c : m.at("coefficients")) CHECK(c.get<std::string>() == "1");
    // the vertex scales carry the formal parameter
    bool formal = false;
    for (const auto& v : r.final_payload.at("vertices"))
        if (v.at("scale").get<std::string>().find("lambda_1") != std::string::npos) formal = true;
    CHECK(formal);
}

TEST_CASE("witness command payload carries members and pairwise verdicts") {
    nlohmann::json w = run_witness(FamilyKind::Lemma7Two,
                                   {ExactScalar::from_int(0, FieldDesc::rationals()),
                                    ExactScalar::from_int(1, FieldDesc::rationals()),
                                    ExactScalar::from_int(2, FieldDesc::rationals())},
                                   FieldDesc::rationals(), 3);
    CHECK(w.at("members").size() == 3);
    int noniso = 0;
    for (const auto& p : w.at("pairwise"))
        if (p.at("result") == "not_isomorphic") ++noniso;
    CHECK(noniso == 3);
}
