#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spacedmod/graph.hpp"

#include <fstream>
#include <sstream>

using namespace spacedmod;

namespace {

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

int idx(const Poset& p, const std::string& name) {
    for (int i = 0; i < p.size(); ++i)
        if (p.names[static_cast<std::size_t>(i)] == name) return i;
    FAIL("unknown element ", name);
    return -1;
}

/// Hand-built poset: object dims plus explicit strict relations, closed
/// transitively. Layers of one object are always chained.
Poset synthetic_poset(const std::vector<std::pair<std::string, int>>& objects,
                      const std::vector<std::pair<std::string, std::string>>& relations) {
    Poset p;
    for (const auto& [name, d] : objects) {
        p.first_element.push_back(p.size());
        p.object_dim.push_back(d);
        for (int i = 1; i <= d; ++i) {
            p.elements.push_back({static_cast<int>(p.object_dim.size()) - 1, i});
            p.object_of.push_back(static_cast<int>(p.object_dim.size()) - 1);
            p.names.push_back(name + "_" + std::to_string(i));
        }
    }
    const int n = p.size();
    p.leq.assign(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int x = 0; x < n; ++x) p.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)] = true;
    for (std::size_t o = 0; o < p.object_dim.size(); ++o)
        for (int i = 1; i < p.object_dim[o]; ++i)
            p.leq[static_cast<std::size_t>(p.first_element[o] + i - 1)]
                 [static_cast<std::size_t>(p.first_element[o] + i)] = true;
    for (const auto& [from, to] : relations) {
        int x = -1, y = -1;
        for (int i = 0; i < n; ++i) {
            if (p.names[static_cast<std::size_t>(i)] == from) x = i;
            if (p.names[static_cast<std::size_t>(i)] == to) y = i;
        }
        REQUIRE(x >= 0);
        REQUIRE(y >= 0);
        p.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = true;
    }
    for (int k = 0; k < n; ++k)
        for (int x = 0; x < n; ++x)
            if (p.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(k)])
                for (int y = 0; y < n; ++y)
                    if (p.leq[static_cast<std::size_t>(k)][static_cast<std::size_t>(y)])
                        p.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = true;
    return p;
}

/// Adds a connected pair of arrows between named elements.
void add_pair(ArrowGraph& g, const Poset& p, const std::string& s1, const std::string& t1,
              const std::string& s2, const std::string& t2, bool weak = false) {
    int id = static_cast<int>(g.pairs.size());
    int a1 = static_cast<int>(g.arrows.size());
    g.arrows.push_back({idx(p, s1), idx(p, t1), id, weak});
    int a2 = static_cast<int>(g.arrows.size());
    g.arrows.push_back({idx(p, s2), idx(p, t2), id, weak});
    g.pairs.push_back({id, a1, a2, p.object_of[static_cast<std::size_t>(idx(p, s1))],
                       p.object_of[static_cast<std::size_t>(idx(p, t1))], -1, weak});
}

std::vector<std::string> codes(const std::vector<Certificate>& certs) {
    std::vector<std::string> out;
    for (const auto& c : certs) out.push_back(c.code);
    return out;
}

}  // namespace

TEST_CASE("poset of a single chained object") {
    auto basis = build_from(load_corpus("single_d2.json"));
    auto pb = build_poset(basis);
    CHECK(pb.certificates.empty());
    CHECK(pb.poset.lt(idx(pb.poset, "a_1"), idx(pb.poset, "a_2")));
}

TEST_CASE("a single product relation leaves the other layers incomparable") {
    SpacedModulePresentation p;
    p.field = FieldDesc::rationals();
    p.objects = {{"a", 0}, {"b", 1}};
    p.dims = {2, 2};
    ClassifiedBasis b;
    b.pres = p;
    for (int o = 0; o < 2; ++o) b.bases.push_back({o, Matrix::identity(2, p.field)});
    BasisMorphism f;
    f.from = 0;
    f.to = 1;
    f.kind = MorKind::Prime;
    f.positions = {{1, 1}};
    f.mat = Matrix::unit(2, 2, 0, 0, p.field);
    b.morphisms.push_back(f);
    auto pb = build_poset(b);
    REQUIRE(pb.certificates.empty());
    const Poset& ps = pb.poset;
    CHECK(ps.lt(idx(ps, "a_1"), idx(ps, "b_1")));
    CHECK_FALSE(ps.comparable(idx(ps, "b_1"), idx(ps, "a_2")));
    CHECK_FALSE(ps.comparable(idx(ps, "b_2"), idx(ps, "a_2")));
}

TEST_CASE("composite relations close transitively") {
    auto basis = build_from(load_corpus("lemma9_weak.json"));
    auto pb = build_poset(basis);
    REQUIRE(pb.certificates.empty());
    const Poset& p = pb.poset;
    // chain through distinct objects: a_2 < b_1 < c_2
    CHECK(p.lt(idx(p, "a_2"), idx(p, "b_1")));
    CHECK(p.lt(idx(p, "b_1"), idx(p, "c_2")));
    CHECK(p.lt(idx(p, "a_2"), idx(p, "c_2")));
    // interleaved total order of the triple layers
    const char* chain[] = {"a_1", "c_1", "a_2", "c_2", "a_3", "c_3"};
    for (int i = 0; i < 5; ++i) CHECK(p.lt(idx(p, chain[i]), idx(p, chain[i + 1])));
    // partial order axioms
    for (int x = 0; x < p.size(); ++x) {
        CHECK(p.le(x, x));
        for (int y = 0; y < p.size(); ++y) {
            if (x != y && p.le(x, y)) CHECK_FALSE(p.le(y, x));
            for (int z = 0; z < p.size(); ++z)
                if (p.le(x, y) && p.le(y, z)) CHECK(p.le(x, z));
        }
    }
}

TEST_CASE("a relation cycle yields a certificate") {
    auto basis = build_from(load_corpus("primes_d1.json"));
    // force b_1 < a_1 on top of a_1 < b_1 by adding a fake reverse morphism
    BasisMorphism rev;
    rev.from = 1;
    rev.to = 0;
    rev.kind = MorKind::Prime;
    rev.positions = {{1, 1}};
    rev.mat = Matrix::unit(1, 1, 0, 0, basis.pres.field);
    basis.morphisms.push_back(rev);
    auto pb = build_poset(basis);
    REQUIRE_FALSE(pb.certificates.empty());
    CHECK(pb.certificates[0].code == "cycle");
}

TEST_CASE("incomparable triple layers trigger the total-order rule") {
    // a_2 and b_1 are the only incomparable pair
    Poset p = synthetic_poset({{"a", 3}, {"b", 3}},
                              {{"a_1", "b_1"}, {"a_2", "b_2"}, {"a_3", "b_3"}, {"b_1", "a_3"}, {"b_2", "a_3"}});
    auto certs = check_poset_conditions(p);
    REQUIRE(certs.size() == 1);
    CHECK(certs[0].code == "lemma6");
    CHECK(certs[0].witness_handle.at("family") == "lemma6");
    CHECK(certs[0].witness_handle.at("i") == 2);
    CHECK(certs[0].witness_handle.at("j") == 1);
    CHECK(certs[0].elements == std::vector<std::string>{"a_2", "b_1"});
}

TEST_CASE("crossing incomparabilities over two objects trigger the crossing rule") {
    Poset p = synthetic_poset({{"a", 2}, {"b", 2}}, {});
    auto certs = check_poset_conditions(p);
    REQUIRE(certs.size() == 1);
    CHECK(certs[0].code == "lemma7");
    CHECK(certs[0].witness_handle.at("family") == "lemma7_two");
}

TEST_CASE("the cyclic three-object pattern is detected") {
    Poset p = synthetic_poset({{"a", 2}, {"b", 2}, {"c", 2}}, {});
    auto certs = check_poset_conditions(p);
    bool three = false;
    for (const auto& c : certs)
        if (c.code == "lemma7" && c.witness_handle.at("family") == "lemma7_three") three = true;
    CHECK(three);
}

TEST_CASE("a triple with one fully comparable layer violates the double-comparability rule") {
    Poset p = synthetic_poset({{"a", 3}, {"b", 2}},
                              {{"a_1", "b_1"}, {"a_1", "b_2"}, {"a_2", "b_2"}, {"a_3", "b_2"}});
    auto certs = check_poset_conditions(p);
    REQUIRE(certs.size() == 1);
    CHECK(certs[0].code == "lemma8");
    CHECK(certs[0].witness_handle.at("family") == "lemma8_case2");
}

TEST_CASE("arrow graph of the weak-pair corpus entry") {
    auto basis = build_from(load_corpus("lemma9_weak.json"));
    auto pb = build_poset(basis);
    ArrowGraph g = build_gamma(basis, pb.poset);
    REQUIRE(g.pairs.size() == 3);
    int weak_pairs = 0;
    for (const auto& pr : g.pairs) weak_pairs += pr.weak ? 1 : 0;
    CHECK(weak_pairs == 1);
    // arrows only touch layers of doubles and triples
    for (const Arrow& a : g.arrows) {
        CHECK(pb.poset.object_dim[static_cast<std::size_t>(
                  pb.poset.object_of[static_cast<std::size_t>(a.source)])] >= 2);
        CHECK(pb.poset.object_dim[static_cast<std::size_t>(
                  pb.poset.object_of[static_cast<std::size_t>(a.target)])] >= 2);
    }
    auto certs = check_gamma_conditions(g, pb.poset, basis.double_counts);
    CHECK(certs.empty());
    // the weak arrow a_3 -> c_3 sits over the intermediate b_2, so the
    // factorization search must have found the parallel strong paths
    std::string dot = to_dot(g, pb.poset);
    CHECK(dot.find("\"a_3\" -> \"c_3\"") != std::string::npos);
    CHECK(dot.find("style=dashed") != std::string::npos);
}

TEST_CASE("a basis without doubles yields an empty graph") {
    auto basis = build_from(load_corpus("single_d3_full.json"));
    auto pb = build_poset(basis);
    CHECK(build_gamma(basis, pb.poset).pairs.empty());
}

TEST_CASE("lemma9 rule rejects a missing factorization") {
    // arrow a_1 -> c_1 with a_1 < b_1 < c_1 but no strong paths at all
    Poset p = synthetic_poset({{"a", 3}, {"b", 2}, {"c", 3}},
                              {{"a_1", "b_1"}, {"b_1", "c_1"}, {"a_1", "c_1"}});
    ArrowGraph g;
    add_pair(g, p, "a_1", "c_1", "a_2", "c_2", true);
    std::map<std::pair<int, int>, int> counts{{{0, 1}, 1}, {{1, 2}, 1}, {{0, 2}, 3}};
    auto certs = check_gamma_conditions(g, p, counts);
    REQUIRE_FALSE(certs.empty());
    CHECK(codes(certs) == std::vector<std::string>{"lemma9"});
}

TEST_CASE("extra pair from a triple vertex with colliding partners: the partner rule alone") {
    Poset p = synthetic_poset({{"a", 3}, {"b", 2}, {"c", 2}},
                              {{"a_1", "b_1"}, {"a_2", "b_2"}, {"a_1", "c_1"}, {"a_2", "c_2"}});
    ArrowGraph g;
    add_pair(g, p, "a_1", "b_1", "a_2", "b_2");
    add_pair(g, p, "a_1", "c_1", "a_2", "c_2");
    auto certs = check_gamma_conditions(g, p, {});
    REQUIRE(certs.size() == 1);
    CHECK(certs[0].code == "lemma10");
}

TEST_CASE("two pairs from one double vertex: the degree rule subsumes the partner rule") {
    Poset p = synthetic_poset({{"a", 2}, {"b", 2}, {"c", 2}},
                              {{"a_1", "b_1"}, {"a_2", "b_2"}, {"a_1", "c_1"}, {"a_2", "c_2"}});
    ArrowGraph g;
    add_pair(g, p, "a_1", "b_1", "a_2", "b_2");
    add_pair(g, p, "a_1", "c_1", "a_2", "c_2");
    auto certs = check_gamma_conditions(g, p, {});
    REQUIRE_FALSE(certs.empty());
    for (const auto& c : certs) CHECK(c.code == "lemma11");
}

TEST_CASE("three pairs leaving one triple: the pair-count rule alone") {
    Poset p = synthetic_poset({{"a", 3}, {"b", 2}, {"c", 2}, {"d", 2}},
                              {{"a_1", "b_1"}, {"a_2", "b_2"}, {"a_1", "c_1"}, {"a_3", "c_2"},
                               {"a_2", "d_1"}, {"a_3", "d_2"}});
    ArrowGraph g;
    add_pair(g, p, "a_1", "b_1", "a_2", "b_2");
    add_pair(g, p, "a_1", "c_1", "a_3", "c_2");
    add_pair(g, p, "a_2", "d_1", "a_3", "d_2");
    auto certs = check_gamma_conditions(g, p, {});
    REQUIRE(certs.size() == 1);
    CHECK(certs[0].code == "lemma12");
}
