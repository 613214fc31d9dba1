#pragma once

#include "spacedmod/classify.hpp"

namespace spacedmod {

struct PosetElement {
    int object;
    int layer;  // 1-based
};

/// Filtration-layer poset: one element per (object, layer), ordered by the
/// reflexive-transitive closure of nonzero basis-morphism products.
struct Poset {
    std::vector<PosetElement> elements;        // grouped by object, layers ascending
    std::vector<std::string> names;            // "a_1", ...
    std::vector<int> object_of;                // element -> object
    std::vector<int> first_element;            // object -> first element index
    std::vector<int> object_dim;               // object -> layer count
    std::vector<std::vector<bool>> leq;

    int size() const { return static_cast<int>(elements.size()); }
    int index_of(int object, int layer) const { return first_element[static_cast<std::size_t>(object)] + layer - 1; }
    bool le(int x, int y) const { return leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; }
    bool lt(int x, int y) const { return x != y && le(x, y); }
    bool comparable(int x, int y) const { return le(x, y) || le(y, x); }
    bool is_double_obj(int object) const { return object_dim[static_cast<std::size_t>(object)] == 2; }
    bool is_triple_obj(int object) const { return object_dim[static_cast<std::size_t>(object)] == 3; }
};

struct PosetBuild {
    Poset poset;
    std::vector<Certificate> certificates;  // antisymmetry violations
};

PosetBuild build_poset(const ClassifiedBasis& b);

/// Checks on the layer poset: total order on triple layers, no crossing
/// incomparability patterns over two or three objects, and the two-per-triple
/// comparability bound against doubles. Certificates carry family handles.
std::vector<Certificate> check_poset_conditions(const Poset& p);

}  // namespace spacedmod
