#pragma once

#include "spacedmod/poset.hpp"

namespace spacedmod {

struct Arrow {
    int source, target;  // poset element indices
    int pair_id;
    bool weak;
};

struct ArrowPair {
    int id;
    int first, second;        // arrow indices; first starts at the lower source layer
    int from_object, to_object;
    int morphism = -1;        // index into ClassifiedBasis::morphisms, -1 for injected pairs
    bool weak;
};

struct ArrowGraph {
    std::vector<Arrow> arrows;
    std::vector<ArrowPair> pairs;
    int partner(int arrow) const {
        const ArrowPair& p = pairs[static_cast<std::size_t>(arrows[static_cast<std::size_t>(arrow)].pair_id)];
        return p.first == arrow ? p.second : p.first;
    }
};

/// One connected arrow pair per short double basis morphism; weak when the
/// pair's hom space carries three double directions.
ArrowGraph build_gamma(const ClassifiedBasis& b, const Poset& p);

/// Combinatorial checks on the graph: the between-layer factorization rule
/// (lemma9), distinct partner endpoints (lemma10), per-vertex arrow bounds
/// (lemma11) and the two-pairs-per-triple bound (lemma12). A lemma10
/// certificate at a vertex is subsumed by a lemma11 certificate there.
std::vector<Certificate> check_gamma_conditions(const ArrowGraph& g, const Poset& p,
                                                const std::map<std::pair<int, int>, int>& double_counts);

std::string to_dot(const ArrowGraph& g, const Poset& p);

}  // namespace spacedmod
