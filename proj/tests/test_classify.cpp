#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spacedmod/classify.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace spacedmod;

namespace {

const FieldDesc kQ = FieldDesc::rationals();

Matrix units(int rows, int cols, std::initializer_list<std::pair<std::pair<int, int>, int>> entries,
             const FieldDesc& f = kQ) {
    Matrix m(rows, cols, f);
    for (const auto& [pos, val] : entries) m.at(pos.first - 1, pos.second - 1) = ExactScalar::from_int(val, f);
    return m;
}

SpacedModulePresentation load_corpus(const std::string& name) {
    std::ifstream in(std::string(SPACEDMOD_DATA_DIR) + "/corpus/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return canonicalize(parse_presentation(buf.str()));
}

ClassifiedBasis build_from(const SpacedModulePresentation& p) {
    std::vector<TriangularBasis> bases;
    for (int a = 0; a < p.num_objects(); ++a) {
        auto tr = triangular_basis(p, radical_filtration(p, a));
        REQUIRE(tr.basis.has_value());
        bases.push_back(*tr.basis);
    }
    auto reb = rebase(p, bases);
    BasisBuild bb = build_reduced_basis(reb, bases);
    REQUIRE(bb.basis.has_value());
    return *bb.basis;
}

// independent maximality oracle over all positions, with random span samples
std::vector<Step> oracle_steps(const std::vector<Matrix>& span_basis, int rows, int cols,
                               std::mt19937& rng, const FieldDesc& f) {
    std::vector<Matrix> samples = span_basis;
    std::uniform_int_distribution<int> coef(-5, 5);
    for (int s = 0; s < 100 && !span_basis.empty(); ++s) {
        Matrix acc(rows, cols, f);
        for (const Matrix& b : span_basis) acc = acc + b.scaled(ExactScalar::from_int(coef(rng), f));
        samples.push_back(acc);
    }
    std::vector<Step> supp;
    for (int i = 1; i <= rows; ++i)
        for (int j = 1; j <= cols; ++j) {
            bool hit = false;
            for (const Matrix& m : samples)
                if (!m.at(i - 1, j - 1).is_zero()) hit = true;
            if (hit) supp.push_back({i, j});
        }
    std::vector<Step> steps;
    for (const Step& cand : supp) {
        bool maximal = true;
        for (const Step& other : supp)
            if (other.row <= cand.row && other.col >= cand.col && !(other == cand)) maximal = false;
        if (maximal) steps.push_back(cand);
    }
    return steps;
}

}  // namespace

TEST_CASE("steps of single maps") {
    CHECK(steps_of_map(units(3, 3, {{{2, 1}, 1}})) == std::vector<Step>{{2, 1}});
    CHECK(steps_of_map(units(3, 3, {{{1, 1}, 1}, {{2, 2}, 1}})) == std::vector<Step>{{1, 1}, {2, 2}});
    CHECK(steps_of_map(Matrix(3, 3, kQ)).empty());
}

TEST_CASE("steps of spaces from the span basis") {
    std::vector<Matrix> span{units(2, 2, {{{1, 1}, 1}, {{2, 2}, 2}}), units(2, 2, {{{2, 1}, 1}})};
    CHECK(steps_of_space(span, 2, 2) == std::vector<Step>{{1, 1}, {2, 2}});
    CHECK(steps_of_space({}, 2, 2).empty());
    std::vector<Matrix> two{units(3, 3, {{{1, 2}, 1}, {{2, 3}, 1}}), units(3, 3, {{{2, 1}, 1}}),
                            units(3, 3, {{{3, 2}, 1}})};
    CHECK(steps_of_space(two, 3, 3) == std::vector<Step>{{1, 2}, {2, 3}});
}

TEST_CASE("steps agree with the brute-force maximality oracle on random spans") {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> dim(1, 3), count(0, 3), coef(-3, 3);
    for (int it = 0; it < 200; ++it) {
        FieldDesc f = it % 2 ? FieldDesc::prime_field(5) : kQ;
        int rows = dim(rng), cols = dim(rng);
        SpanBasis span(rows, cols, f);
        int n = count(rng);
        for (int k = 0; k < n; ++k) {
            Matrix m(rows, cols, f);
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) m.at(i, j) = ExactScalar::from_int(coef(rng), f);
            span.insert(m);
        }
        auto basis = span.canonical_basis();
        CHECK(steps_of_space(basis, rows, cols) == oracle_steps(basis, rows, cols, rng, f));
    }
}

TEST_CASE("lower sets enumerate the order relation") {
    LowerSets ls = lower_sets({{1, 1}}, 3, 3);
    CHECK(ls.s_positions == std::vector<Step>{{2, 1}, {3, 1}});
    CHECK(ls.sbar_positions == std::vector<Step>{{1, 1}, {2, 1}, {3, 1}});
    CHECK(lower_sets({}, 3, 3).s_positions.empty());
    LowerSets one = lower_sets({{2, 1}}, 3, 3);
    CHECK(one.s_positions == std::vector<Step>{{3, 1}});
    CHECK(one.sbar_positions == std::vector<Step>{{2, 1}, {3, 1}});
}

TEST_CASE("endomorphism classification over the admitted forms") {
    auto d2 = load_corpus("single_d2.json");
    CHECK(classify_endo(d2, 0).type->kind == EndoKind::D2);

    auto dbl = load_corpus("endo_double_d3.json");
    auto et = classify_endo(dbl, 0);
    REQUIRE(et.type.has_value());
    CHECK(et.type->kind == EndoKind::D3Double);
    CHECK(et.type->lambda->str() == "2");

    auto full = load_corpus("single_d3_full.json");
    CHECK(classify_endo(full, 0).type->kind == EndoKind::D3Chain);
}

TEST_CASE("hom classification: two_step with the parameter echoed") {
    auto p = load_corpus("two_step_pair.json");
    auto hr = classify_hom(p, 0, 1);
    REQUIRE(hr.classification.has_value());
    CHECK(hr.classification->homcase == HomCase::TwoStep);
    CHECK(hr.classification->lambda->str() == "2");
}

TEST_CASE("hom classification: saturated when the space is the full lower set") {
    auto p = load_corpus("mutation_l6.json");
    auto hr = classify_hom(p, 0, 1);
    REQUIRE(hr.classification.has_value());
    CHECK(hr.classification->homcase == HomCase::Saturated);
}

TEST_CASE("hom classification: a pair of diagonal doubles with extracted parameters") {
    auto p = load_corpus("lemma9_weak.json");
    auto hr = classify_hom(p, 0, 2);
    REQUIRE(hr.classification.has_value());
    CHECK(hr.classification->homcase == HomCase::DiagTwoDouble);
    CHECK(hr.classification->lambda->str() == "-2");
    CHECK(hr.classification->mu->str() == "2");
}

TEST_CASE("hom classification: the other one-double diagonal variants") {
    SpacedModulePresentation p;
    p.field = kQ;
    p.objects = {{"a", 0}, {"b", 1}};
    p.dims = {3, 3};
    auto lower = [&]() {
        return std::vector<Matrix>{units(3, 3, {{{2, 1}, 1}}), units(3, 3, {{{3, 1}, 1}}),
                                   units(3, 3, {{{3, 2}, 1}})};
    };
    auto spans = lower();
    spans.push_back(units(3, 3, {{{1, 1}, 1}, {{3, 3}, 5}}));
    spans.push_back(units(3, 3, {{{2, 2}, 1}}));
    p.rad[{0, 1}] = spans;
    auto hr = classify_hom(p, 0, 1);
    REQUIRE(hr.classification.has_value());
    CHECK(hr.classification->homcase == HomCase::DiagOneDouble);
    CHECK(hr.classification->diag_variant == 13);
    CHECK(hr.classification->lambda->str() == "5");

    spans = lower();
    spans.push_back(units(3, 3, {{{2, 2}, 1}, {{3, 3}, 7}}));
    spans.push_back(units(3, 3, {{{1, 1}, 1}}));
    p.rad[{0, 1}] = spans;
    hr = classify_hom(p, 0, 1);
    REQUIRE(hr.classification.has_value());
    CHECK(hr.classification->homcase == HomCase::DiagOneDouble);
    CHECK(hr.classification->diag_variant == 23);
    CHECK(hr.classification->lambda->str() == "7");
}

TEST_CASE("the lemma2 necessary condition fires when the reverse space is empty") {
    auto p = load_corpus("ctx_lemma2.json");
    auto hr = classify_hom(p, 0, 1);
    REQUIRE_FALSE(hr.certificates.empty());
    CHECK(hr.certificates[0].code == "lemma2");
    CHECK(hr.certificates[0].witness_handle.at("family") == "lemma2");
}

TEST_CASE("a one-dimensional residual over the diagonal steps is certified") {
    auto p = load_corpus("ctx_lemma3.json");
    auto hr = classify_hom(p, 0, 1);
    REQUIRE_FALSE(hr.certificates.empty());
    CHECK(hr.certificates[0].code == "lemma3");
    CHECK_FALSE(hr.classification.has_value());
}

TEST_CASE("a missing lower-set unit is certified") {
    SpacedModulePresentation p;
    p.field = kQ;
    p.objects = {{"a", 0}, {"b", 1}};
    p.dims = {2, 2};
    p.rad[{0, 1}] = {units(2, 2, {{{1, 1}, 1}, {{2, 2}, 2}})};  // the unit below (1,1) is absent
    auto hr = classify_hom(p, 0, 1);
    REQUIRE_FALSE(hr.certificates.empty());
    CHECK(hr.certificates[0].code == "lemma4");
}

TEST_CASE("enumeration of the three double directions") {
    auto p = load_corpus("lemma9_weak.json");
    auto hr = classify_hom(p, 0, 2);
    auto et_a = classify_endo(p, 0);
    MorphismEnumeration me = enumerate_basis_morphisms(p, 0, 2, nullptr, &*hr.classification);
    int doubles = 0;
    bool has_third = false;
    for (const auto& m : me.all) {
        if (m.kind != MorKind::Double) continue;
        ++doubles;
        // the normalized third direction: e22 + e33 with nu = -mu/lambda = 1
        if (m.positions == std::vector<Step>{{2, 2}, {3, 3}}) {
            has_third = true;
            CHECK(m.param->str() == "1");
        }
    }
    CHECK(doubles == 3);
    CHECK(has_third);
    CHECK(me.certificates.empty());
    (void)et_a;
}

TEST_CASE("shortness against the composite span") {
    auto p = load_corpus("lemma9_weak.json");
    // the long double e22 + e33 from a to c is a product through b
    BasisMorphism lng;
    lng.from = 0;
    lng.to = 2;
    lng.mat = units(3, 3, {{{2, 2}, 1}, {{3, 3}, 1}});
    CHECK_FALSE(is_short(p, lng));
    BasisMorphism f2;
    f2.from = 0;
    f2.to = 2;
    f2.mat = units(3, 3, {{{1, 1}, 1}, {{3, 3}, 2}});
    CHECK(is_short(p, f2));
    // no composite path at all
    auto q = load_corpus("two_step_pair.json");
    BasisMorphism dbl;
    dbl.from = 0;
    dbl.to = 1;
    dbl.mat = units(2, 2, {{{1, 1}, 1}, {{2, 2}, 2}});
    CHECK(is_short(q, dbl));
}

TEST_CASE("the reduced basis drops exactly the lexicographically first short double") {
    auto basis = build_from(load_corpus("lemma9_weak.json"));
    int ac_doubles = 0;
    bool dropped_present = false;
    for (const auto& m : basis.morphisms) {
        if (m.from != 0 || m.to != 2 || m.kind != MorKind::Double) continue;
        ++ac_doubles;
        if (m.positions == std::vector<Step>{{1, 1}, {2, 2}}) dropped_present = true;
    }
    CHECK(basis.double_counts.at({0, 2}) == 3);
    CHECK(ac_doubles == 2);
    CHECK_FALSE(dropped_present);  // the short (1,1),(2,2) direction is excluded
    CHECK(basis.reduced);
}

TEST_CASE("double directions count lies in {0, 1, 3} across the corpus") {
    for (const char* name : {"primes_d1.json", "single_d2.json", "single_d3_full.json",
                             "endo_double_d3.json", "two_step_pair.json", "diag_one_double.json",
                             "lemma9_weak.json"}) {
        auto basis = build_from(load_corpus(name));
        for (const auto& [key, n] : basis.double_counts) CHECK((n == 0 || n == 1 || n == 3));
    }
}

TEST_CASE("condition d fails when a double's first product is not one") {
    auto p = load_corpus("two_step_pair.json");
    ClassifiedBasis b;
    b.pres = p;
    for (int i = 0; i < p.num_objects(); ++i) b.bases.push_back({i, Matrix::identity(2, kQ)});
    BasisMorphism bad;
    bad.from = 0;
    bad.to = 1;
    bad.kind = MorKind::Double;
    bad.mat = units(2, 2, {{{1, 1}, 3}, {{2, 2}, 6}});  // both products differ from one
    bad.positions = {{1, 1}, {2, 2}};
    bad.param = ExactScalar::from_int(2, kQ);
    b.morphisms.push_back(bad);
    ConditionReport rep = check_basis_conditions(b);
    CHECK_FALSE(rep.d.pass);
    CHECK(rep.d.witness.at("coefficient") == "3");
}

TEST_CASE("conditions b and c reject multi-entry columns and rows") {
    auto p = load_corpus("two_step_pair.json");
    ClassifiedBasis b;
    b.pres = p;
    BasisMorphism m;
    m.from = 0;
    m.to = 1;
    m.kind = MorKind::Prime;
    m.positions = {{1, 1}};
    m.mat = units(2, 2, {{{1, 1}, 1}, {{2, 1}, 1}});  // two entries in one column
    b.morphisms.push_back(m);
    ConditionReport rep = check_basis_conditions(b);
    CHECK_FALSE(rep.b.pass);
    BasisMorphism r = m;
    r.mat = units(2, 2, {{{1, 1}, 1}, {{1, 2}, 1}});  // two entries in one row
    b.morphisms = {r};
    CHECK_FALSE(check_basis_conditions(b).c.pass);
}

TEST_CASE("the built corpus bases satisfy every condition") {
    for (const char* name : {"endo_double_d3.json", "two_step_pair.json", "diag_one_double.json",
                             "lemma9_weak.json"}) {
        auto basis = build_from(load_corpus(name));
        ConditionReport rep = check_basis_conditions(basis);
        CHECK(rep.structural.pass);
        CHECK(rep.a.pass);
        CHECK(rep.b.pass);
        CHECK(rep.c.pass);
        CHECK(rep.d.pass);
        CHECK(rep.e.pass);
        CHECK(rep.reduced());
    }
}

TEST_CASE("every long double in the basis is a product of basis doubles") {
    auto basis = build_from(load_corpus("lemma9_weak.json"));
    for (const auto& m : basis.morphisms) {
        if (m.kind != MorKind::Double || m.is_short) continue;
        bool factored = false;
        for (const auto& g : basis.morphisms) {
            if (g.kind != MorKind::Double || g.from != m.from) continue;
            for (const auto& h : basis.morphisms) {
                if (h.kind != MorKind::Double || h.from != g.to || h.to != m.to) continue;
                if (h.mat * g.mat == m.mat) factored = true;
            }
        }
        CHECK(factored);
    }
}
