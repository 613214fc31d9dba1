#include "spacedmod/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace spacedmod {

using nlohmann::json;

ArrowGraph build_gamma(const ClassifiedBasis& b, const Poset& p) {
    ArrowGraph g;
    struct Cand {
        std::array<int, 4> key;  // source object, source layer, target object, target layer
        std::size_t morphism;
    };
    std::vector<Cand> cands;
    for (std::size_t k = 0; k < b.morphisms.size(); ++k) {
        const auto& m = b.morphisms[k];
        if (m.kind != MorKind::Double || !m.is_short) continue;
        cands.push_back({{m.from, m.positions[0].col, m.to, m.positions[0].row}, k});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.key < y.key; });
    for (const Cand& c : cands) {
        const auto& m = b.morphisms[c.morphism];
        bool weak = b.double_counts.at({m.from, m.to}) == 3;
        int id = static_cast<int>(g.pairs.size());
        int a1 = static_cast<int>(g.arrows.size());
        g.arrows.push_back({p.index_of(m.from, m.positions[0].col), p.index_of(m.to, m.positions[0].row), id, weak});
        int a2 = static_cast<int>(g.arrows.size());
        g.arrows.push_back({p.index_of(m.from, m.positions[1].col), p.index_of(m.to, m.positions[1].row), id, weak});
        g.pairs.push_back({id, a1, a2, m.from, m.to, static_cast<int>(c.morphism), weak});
    }
    return g;
}

namespace {

/// Searches for two parallel oriented paths of connected strong arrows: one
/// from `src1` through `via` to `dst1`, the partner strand running alongside
/// and returning to its own starting layer.
bool strong_path_pair_exists(const ArrowGraph& g, const Poset& p, int src1, int via, int dst1) {
    struct State {
        int at1, at2, start2_layer;
        bool passed;
    };
    const int n = p.size();
    auto enc = [n](const State& s) { return ((s.at1 * n + s.at2) * 4 + s.start2_layer) * 2 + (s.passed ? 1 : 0); };
    std::set<int> seen;
    std::vector<State> queue;
    for (const ArrowPair& pr : g.pairs) {
        if (pr.weak) continue;
        const Arrow& f = g.arrows[static_cast<std::size_t>(pr.first)];
        const Arrow& s = g.arrows[static_cast<std::size_t>(pr.second)];
        for (auto [a1, a2] : {std::pair{f, s}, std::pair{s, f}}) {
            if (a1.source != src1) continue;
            State st{a1.target, a2.target, p.elements[static_cast<std::size_t>(a2.source)].layer,
                     a1.target == via};
            if (seen.insert(enc(st)).second) queue.push_back(st);
        }
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        State st = queue[qi];
        if (st.at1 == dst1 && st.passed &&
            p.elements[static_cast<std::size_t>(st.at2)].layer == st.start2_layer)
            return true;
        for (const ArrowPair& pr : g.pairs) {
            if (pr.weak) continue;
            const Arrow& f = g.arrows[static_cast<std::size_t>(pr.first)];
            const Arrow& s = g.arrows[static_cast<std::size_t>(pr.second)];
            for (auto [a1, a2] : {std::pair{f, s}, std::pair{s, f}}) {
                if (a1.source != st.at1 || a2.source != st.at2) continue;
                State nx{a1.target, a2.target, st.start2_layer, st.passed || a1.target == via};
                if (seen.insert(enc(nx)).second) queue.push_back(nx);
            }
        }
    }
    return false;
}

}  // namespace

std::vector<Certificate> check_gamma_conditions(const ArrowGraph& g, const Poset& p,
                                                const std::map<std::pair<int, int>, int>& double_counts) {
    std::vector<Certificate> certs;
    const int n = p.size();

    auto dcount = [&](int a, int b) {
        auto it = double_counts.find({a, b});
        return it == double_counts.end() ? 0 : it->second;
    };

    // rule lemma9: an arrow across a strictly intermediate layer forces the
    // full factorization picture
    for (std::size_t ai = 0; ai < g.arrows.size(); ++ai) {
        const Arrow& arr = g.arrows[ai];
        const int src = arr.source, dst = arr.target;
        const int a_obj = p.object_of[static_cast<std::size_t>(src)];
        const int c_obj = p.object_of[static_cast<std::size_t>(dst)];
        for (int mid = 0; mid < n; ++mid) {
            if (mid == src || mid == dst) continue;
            if (!(p.lt(src, mid) && p.lt(mid, dst))) continue;
            const int b_obj = p.object_of[static_cast<std::size_t>(mid)];
            auto report = [&](const std::string& why) {
                Certificate c;
                c.code = "lemma9";
                c.detail = "arrow " + p.names[static_cast<std::size_t>(src)] + " -> " +
                           p.names[static_cast<std::size_t>(dst)] + " over intermediate layer " +
                           p.names[static_cast<std::size_t>(mid)] + ": " + why;
                c.elements = {p.names[static_cast<std::size_t>(src)], p.names[static_cast<std::size_t>(mid)],
                              p.names[static_cast<std::size_t>(dst)]};
                certs.push_back(c);
            };
            if (a_obj == b_obj || b_obj == c_obj || a_obj == c_obj) {
                report("the three layers do not lie in three distinct objects");
                continue;
            }
            if (p.elements[static_cast<std::size_t>(src)].layer != p.elements[static_cast<std::size_t>(dst)].layer) {
                report("source and target layer indices differ");
                continue;
            }
            if (dcount(a_obj, b_obj) != 1 || dcount(b_obj, c_obj) != 1 || dcount(a_obj, c_obj) != 3) {
                report("double direction counts are not 1, 1 and 3 along the factorization");
                continue;
            }
            if (!arr.weak) {
                report("the crossing arrow is not weak");
                continue;
            }
            int partner = g.partner(static_cast<int>(ai));
            if (p.elements[static_cast<std::size_t>(g.arrows[static_cast<std::size_t>(partner)].source)].layer ==
                p.elements[static_cast<std::size_t>(src)].layer) {
                report("the connected weak arrow starts at the same layer");
                continue;
            }
            int pairs_ac = 0;
            for (const ArrowPair& pr : g.pairs)
                if (pr.from_object == a_obj && pr.to_object == c_obj) ++pairs_ac;
            if (pairs_ac != 1) {
                report("more than one connected pair between the end objects");
                continue;
            }
            if (!strong_path_pair_exists(g, p, src, mid, dst))
                report("no pair of parallel strong-arrow paths through the intermediate layer");
        }
    }

    // rule lemma11: at most one arrow per double layer, two per triple layer,
    // in each direction
    std::set<int> lemma11_vertices;
    for (int v = 0; v < n; ++v) {
        const int obj = p.object_of[static_cast<std::size_t>(v)];
        if (!p.is_double_obj(obj) && !p.is_triple_obj(obj)) continue;
        const int bound = p.is_double_obj(obj) ? 1 : 2;
        int out_deg = 0, in_deg = 0;
        for (const Arrow& a : g.arrows) {
            out_deg += a.source == v ? 1 : 0;
            in_deg += a.target == v ? 1 : 0;
        }
        for (auto [deg, dir] : {std::pair{out_deg, "starting from"}, std::pair{in_deg, "stopping at"}}) {
            if (deg > bound) {
                Certificate c;
                c.code = "lemma11";
                c.detail = std::to_string(deg) + " arrows " + dir + " " + p.names[static_cast<std::size_t>(v)] +
                           ", a " + (p.is_double_obj(obj) ? "double" : "triple") + " layer allowing " +
                           std::to_string(bound);
                c.elements = {p.names[static_cast<std::size_t>(v)]};
                certs.push_back(c);
                lemma11_vertices.insert(v);
            }
        }
    }

    // rule lemma10: partners of arrows sharing an endpoint have distinct
    // endpoints; subsumed at vertices already reported by lemma11
    std::set<std::array<int, 5>> reported10;
    for (std::size_t x = 0; x < g.arrows.size(); ++x)
        for (std::size_t y = x + 1; y < g.arrows.size(); ++y) {
            const Arrow& ax = g.arrows[x];
            const Arrow& ay = g.arrows[y];
            if (ax.pair_id == ay.pair_id) continue;
            const Arrow& px = g.arrows[static_cast<std::size_t>(g.partner(static_cast<int>(x)))];
            const Arrow& py = g.arrows[static_cast<std::size_t>(g.partner(static_cast<int>(y)))];
            auto emit = [&](int shared, int collide, int dir, const char* what) {
                if (lemma11_vertices.count(shared)) return;
                std::array<int, 5> key{dir, std::min(ax.pair_id, ay.pair_id), std::max(ax.pair_id, ay.pair_id),
                                       std::min(shared, collide), std::max(shared, collide)};
                if (!reported10.insert(key).second) return;
                Certificate c;
                c.code = "lemma10";
                c.detail = std::string("arrows ") + what + " " + p.names[static_cast<std::size_t>(shared)] +
                           " have connected arrows meeting at " + p.names[static_cast<std::size_t>(collide)];
                c.elements = {p.names[static_cast<std::size_t>(shared)], p.names[static_cast<std::size_t>(collide)]};
                certs.push_back(c);
            };
            if (ax.source == ay.source && px.source == py.source) emit(ax.source, px.source, 0, "starting from");
            if (ax.target == ay.target && px.target == py.target) emit(ax.target, px.target, 1, "stopping at");
        }

    // rule lemma12: at most two pairs leaving or entering one triple
    const int nobj = static_cast<int>(p.object_dim.size());
    for (int obj = 0; obj < nobj; ++obj) {
        if (!p.is_triple_obj(obj)) continue;
        int leaving = 0, entering = 0;
        for (const ArrowPair& pr : g.pairs) {
            leaving += pr.from_object == obj ? 1 : 0;
            entering += pr.to_object == obj ? 1 : 0;
        }
        for (auto [cnt, dir] : {std::pair{leaving, "leaving"}, std::pair{entering, "entering"}}) {
            if (cnt > 2) {
                Certificate c;
                c.code = "lemma12";
                c.detail = std::to_string(cnt) + " connected pairs " + dir + " the triple " +
                           p.names[static_cast<std::size_t>(p.index_of(obj, 1))] + ".." +
                           p.names[static_cast<std::size_t>(p.index_of(obj, p.object_dim[static_cast<std::size_t>(obj)]))];
                c.elements = {p.names[static_cast<std::size_t>(p.index_of(obj, 1))]};
                certs.push_back(c);
            }
        }
    }
    return certs;
}

std::string to_dot(const ArrowGraph& g, const Poset& p) {
    std::ostringstream out;
    out << "digraph arrow_graph {\n";
    for (const std::string& nm : p.names) out << "  \"" << nm << "\";\n";
    for (const Arrow& a : g.arrows) {
        out << "  \"" << p.names[static_cast<std::size_t>(a.source)] << "\" -> \""
            << p.names[static_cast<std::size_t>(a.target)] << "\" [label=\"p" << a.pair_id << "\""
            << (a.weak ? ", style=dashed" : "") << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace spacedmod
