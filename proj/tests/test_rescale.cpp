#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spacedmod/pipeline.hpp"

#include <fstream>
#include <sstream>

using namespace spacedmod;

namespace {

struct Built {
    ClassifiedBasis basis;
    Poset poset;
    ArrowGraph graph;
    ExponentSystem sys;
};

Built build(const std::string& name) {
    std::ifstream in(std::string(SPACEDMOD_DATA_DIR) + "/corpus/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    auto p = canonicalize(parse_presentation(buf.str()));
    std::vector<TriangularBasis> bases;
    for (int a = 0; a < p.num_objects(); ++a) {
        auto tr = triangular_basis(p, radical_filtration(p, a));
        REQUIRE(tr.basis.has_value());
        bases.push_back(*tr.basis);
    }
    auto reb = rebase(p, bases);
    BasisBuild bb = build_reduced_basis(reb, bases);
    REQUIRE(bb.basis.has_value());
    auto pb = build_poset(*bb.basis);
    REQUIRE(pb.certificates.empty());
    ArrowGraph g = build_gamma(*bb.basis, pb.poset);
    ExponentSystem sys = exponent_system(*bb.basis, g, pb.poset);
    return {*bb.basis, pb.poset, g, sys};
}

IntVec row_of(const IntMat& m, std::size_t i) { return m[i]; }

/// Synthetic system whose only pivot has coefficient two; forces a
/// fractional exponent over Q and a root congruence over small fields.
ExponentSystem doubled_pivot_system(const FieldDesc& f, std::int64_t lambda) {
    ExponentSystem sys;
    sys.field = f;
    sys.num_vertices = 3;
    sys.vertex_names = {"a_1", "a_2", "a_3"};
    sys.a = {{0, 2, -2}};  // q1 = p2 = a_2, p1 = q2 = a_3
    sys.lambdas = {ExactScalar::from_int(lambda, f)};
    sys.indices.push_back({2, 1, 1, 2});
    sys.pair_ids = {0};
    return sys;
}

}  // namespace

TEST_CASE("exponent system of the single two_step pair") {
    Built b = build("two_step_pair.json");
    REQUIRE(b.sys.a.size() == 1);
    // vertex order a_1, a_2, b_1, b_2; signed pattern -p1 +p2 +q1 -q2
    CHECK(row_of(b.sys.a, 0) == IntVec{-1, 1, 1, -1});
    CHECK(b.sys.lambdas[0].str() == "2");
}

TEST_CASE("an empty system has no kernel and the trivial solution") {
    Built b = build("single_d3_full.json");
    CHECK(b.sys.a.empty());
    auto ka = weight_kernel(b.sys, b.graph, b.poset, RescaleMode::Numeric);
    CHECK(ka.kernel.empty());
    auto so = solve_rescaling(b.sys, RescaleMode::Numeric);
    REQUIRE(so.solution.has_value());
    for (const Coeff& x : so.solution->x) CHECK(x.is_one());
}

TEST_CASE("opposite rows with residual one carry a weight function but no obstruction") {
    ExponentSystem sys;
    sys.field = FieldDesc::rationals();
    sys.num_vertices = 4;
    sys.vertex_names = {"a_1", "a_2", "b_1", "b_2"};
    sys.a = {{-1, 1, 1, -1}, {1, -1, -1, 1}};
    sys.lambdas = {ExactScalar::from_int(2, sys.field), parse_scalar("1/2", sys.field)};
    sys.indices = {{0, 1, 2, 3}, {2, 3, 0, 1}};
    sys.pair_ids = {0, 1};
    Poset p;
    p.first_element = {0, 2};
    p.object_dim = {2, 2};
    p.elements = {{0, 1}, {0, 2}, {1, 1}, {1, 2}};
    p.object_of = {0, 0, 1, 1};
    p.names = sys.vertex_names;
    p.leq.assign(4, std::vector<bool>(4, false));
    for (int i = 0; i < 4; ++i) p.leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = true;
    ArrowGraph g;
    g.arrows = {{0, 2, 0, false}, {1, 3, 0, false}, {2, 0, 1, false}, {3, 1, 1, false}};
    g.pairs = {{0, 0, 1, 0, 1, -1, false}, {1, 2, 3, 1, 0, -1, false}};

    auto ka = weight_kernel(sys, g, p, RescaleMode::Numeric);
    REQUIRE(ka.kernel.size() == 1);
    CHECK(ka.kernel[0].row_weights == IntVec{1, 1});
    CHECK(ka.kernel[0].antisymmetry_ok);
    CHECK(ka.kernel[0].flow_ok);
    CHECK(ka.obstructions.empty());  // 2 * 1/2 = 1

    sys.lambdas[1] = ExactScalar::one(sys.field);  // now the product is 2
    auto ka2 = weight_kernel(sys, g, p, RescaleMode::Numeric);
    REQUIRE(ka2.obstructions.size() == 1);
    CHECK(ka2.obstructions[0].residual.str() == "2^1");
    CHECK(ka2.obstructions[0].z.antisymmetry_ok);
    CHECK(ka2.obstructions[0].z.flow_ok);
    auto so = solve_rescaling(sys, RescaleMode::Numeric);
    CHECK_FALSE(so.solution.has_value());
    REQUIRE(so.obstructions.size() == 1);
    CHECK(so.obstructions[0].residual.str() == "2^1");
}

TEST_CASE("single pair with parameter two solves and verifies by substitution") {
    Built b = build("two_step_pair.json");
    auto so = solve_rescaling(b.sys, RescaleMode::Numeric);
    REQUIRE(so.solution.has_value());
    CHECK(verify_solution(b.sys, *so.solution, RescaleMode::Numeric));
    RescaledBasis rb = apply_rescaling(b.basis, b.poset, *so.solution);
    MultVerdict v = verify_multiplicative(rb);
    CHECK(v.multiplicative);
    CHECK(v.rank == 2);
}

TEST_CASE("identity solution leaves a parameter-free basis unchanged") {
    Built b = build("single_d3_full.json");
    RescalingSolution sol;
    sol.mode = RescaleMode::Numeric;
    sol.x.assign(static_cast<std::size_t>(b.poset.size()), Coeff::monomial(RadMonomial::one()));
    RescaledBasis rb = apply_rescaling(b.basis, b.poset, sol);
    for (const auto& m : rb.morphisms)
        for (const Coeff& c : m.coeffs) CHECK(c.is_one());
    CHECK(verify_multiplicative(rb).rank == 1);
}

TEST_CASE("the unrescaled scalar check rejects a parameter other than one") {
    Built b = build("two_step_pair.json");
    MultVerdict before = verify_multiplicative(b.basis);
    CHECK_FALSE(before.multiplicative);
    CHECK(before.rank == 2);
}

TEST_CASE("symbolic mode cancels a free parameter formally") {
    Built b = build("two_step_pair.json");
    auto so = solve_rescaling(b.sys, RescaleMode::Symbolic);
    REQUIRE(so.solution.has_value());
    CHECK(verify_solution(b.sys, *so.solution, RescaleMode::Symbolic));
    RescaledBasis rb = apply_rescaling(b.basis, b.poset, *so.solution);
    CHECK(verify_multiplicative(rb).multiplicative);
    bool symbolic_scale = false;
    for (const Coeff& x : rb.vertex_scale)
        if (x.is_mono() && !x.mono().factors().empty()) symbolic_scale = true;
    CHECK(symbolic_scale);
}

TEST_CASE("symbolic mode tracks long doubles through their factorizations") {
    Built b = build("lemma9_weak.json");
    auto so = solve_rescaling(b.sys, RescaleMode::Symbolic);
    REQUIRE(so.solution.has_value());
    RescaledBasis rb = apply_rescaling(b.basis, b.poset, *so.solution);
    MultVerdict v = verify_multiplicative(rb);
    CHECK(v.multiplicative);
    CHECK(v.rank == 2);
}

TEST_CASE("a doubled pivot forces a fractional exponent over Q") {
    ExponentSystem sys = doubled_pivot_system(FieldDesc::rationals(), 2);
    auto so = solve_rescaling(sys, RescaleMode::Numeric);
    REQUIRE(so.solution.has_value());
    CHECK(verify_solution(sys, *so.solution, RescaleMode::Numeric));
    bool fractional = false;
    for (const Coeff& x : so.solution->x)
        if (x.is_mono())
            for (const auto& [g, e] : x.mono().factors())
                if (boost::multiprecision::denominator(e) != 1) fractional = true;
    CHECK(fractional);
}

TEST_CASE("root congruences over prime fields: solvable and unsolvable") {
    // 2 e = dlog(2) mod (p-1): solvable mod 7, unsolvable mod 5
    ExponentSystem s7 = doubled_pivot_system(FieldDesc::prime_field(7), 2);
    auto so7 = solve_rescaling(s7, RescaleMode::Numeric);
    REQUIRE(so7.solution.has_value());
    CHECK(verify_solution(s7, *so7.solution, RescaleMode::Numeric));

    ExponentSystem s5 = doubled_pivot_system(FieldDesc::prime_field(5), 2);
    auto so5 = solve_rescaling(s5, RescaleMode::Numeric);
    CHECK_FALSE(so5.solution.has_value());
    REQUIRE(so5.root_failure.has_value());
    CHECK(so5.root_failure->code == "unsolvable_root");
    CHECK(so5.root_failure->data.at("modulus") == 4);
}

TEST_CASE("nonpositive parameters promote a numeric run to symbolic") {
    ExponentSystem sys;
    sys.field = FieldDesc::rationals();
    sys.num_vertices = 4;
    sys.vertex_names = {"a_1", "a_2", "b_1", "b_2"};
    sys.a = {{-1, 1, 1, -1}};
    sys.lambdas = {ExactScalar::from_int(-2, sys.field)};
    sys.indices = {{0, 1, 2, 3}};
    sys.pair_ids = {0};
    auto so = solve_rescaling(sys, RescaleMode::Numeric);
    REQUIRE(so.solution.has_value());
    CHECK(so.promoted_to_symbolic);
    CHECK(so.solution->mode == RescaleMode::Symbolic);
    CHECK(verify_solution(sys, *so.solution, RescaleMode::Symbolic));
}

TEST_CASE("kernel vectors always satisfy both weight-function axioms") {
    for (const char* name : {"obstructed_diamond.json"}) {
        Built b = build(name);
        auto ka = weight_kernel(b.sys, b.graph, b.poset, RescaleMode::Numeric);
        for (const auto& w : ka.kernel) {
            CHECK(w.antisymmetry_ok);
            CHECK(w.flow_ok);
        }
        REQUIRE(ka.obstructions.size() == 1);
        CHECK(ka.obstructions[0].residual.str() == "2^1");
    }
}
