#include "spacedmod/triangular.hpp"

namespace spacedmod {

std::vector<int> Filtration::dims() const {
    std::vector<int> d;
    d.reserve(chain.size());
    for (const auto& layer : chain) d.push_back(static_cast<int>(layer.size()));
    return d;
}

namespace {

std::vector<Matrix> span_columns(const std::vector<Matrix>& vecs, int dim, const FieldDesc& f) {
    SpanBasis s(dim, 1, f);
    for (const Matrix& v : vecs) s.insert(v);
    return s.canonical_basis();
}

}  // namespace

Filtration radical_filtration(const SpacedModulePresentation& p, int object) {
    const int d = p.dim(object);
    const FieldDesc& f = p.field;
    Filtration fil{object, {}};

    std::vector<Matrix> layer;
    for (int i = 0; i < d; ++i) layer.push_back(Matrix::unit(d, 1, i, 0, f));
    fil.chain.push_back(layer);

    const auto& gens = p.rad_list(object, object);
    while (!fil.chain.back().empty()) {
        std::vector<Matrix> next;
        for (const Matrix& g : gens)
            for (const Matrix& v : fil.chain.back()) {
                Matrix w = g * v;
                if (!w.is_zero()) next.push_back(w);
            }
        auto canon = span_columns(next, d, f);
        if (canon.size() >= fil.chain.back().size()) {
            // non-nilpotent input; validation reports it, stop here
            break;
        }
        fil.chain.push_back(canon);
    }
    return fil;
}

TriangularResult triangular_basis(const SpacedModulePresentation& p, const Filtration& f) {
    const int obj = f.object;
    const int d = p.dim(obj);
    if (d > 3) {
        Certificate c;
        c.code = "not_finitely_spaced";
        c.detail = "object " + p.objects[obj].name + " has dimension " + std::to_string(d) +
                   "; accepted inputs have dimension at most 3";
        c.elements = {p.objects[obj].name};
        c.data = {{"reason", "dimension_bound"}, {"dimension", d}};
        return {std::nullopt, c};
    }
    auto dims = f.dims();
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        if (dims[i] - dims[i + 1] != 1) {
            Certificate c;
            c.code = "not_finitely_spaced";
            c.detail = "radical filtration of " + p.objects[obj].name + " drops from dimension " +
                       std::to_string(dims[i]) + " to " + std::to_string(dims[i + 1]) +
                       "; no layered basis with one vector per step exists";
            c.elements = {p.objects[obj].name};
            c.data = {{"reason", "filtration_jump"}, {"dims", dims}};
            return {std::nullopt, c};
        }
    }
    if (dims.back() != 0 || static_cast<int>(dims.size()) != d + 1) {
        Certificate c;
        c.code = "not_finitely_spaced";
        c.detail = "radical filtration of " + p.objects[obj].name + " does not reach zero";
        c.elements = {p.objects[obj].name};
        c.data = {{"reason", "filtration_stalls"}, {"dims", dims}};
        return {std::nullopt, c};
    }

    // m_i: RREF representative of chain[i-1] modulo chain[i] with the
    // earliest pivot, normalized to leading coefficient one.
    Matrix change(d, d, p.field);
    for (int i = 0; i < d; ++i) {
        SpanBasis lower(d, 1, p.field);
        for (const Matrix& v : f.chain[static_cast<std::size_t>(i) + 1]) lower.insert(v);
        SpanBasis joint = lower;
        for (const Matrix& v : f.chain[static_cast<std::size_t>(i)]) joint.insert(v);
        Matrix chosen;
        int best_pivot = d;
        for (const Matrix& row : joint.canonical_basis()) {
            if (lower.contains(row)) continue;
            int piv = -1;
            for (int r = 0; r < d; ++r)
                if (!row.at(r, 0).is_zero()) { piv = r; break; }
            if (piv >= 0 && piv < best_pivot) {
                best_pivot = piv;
                chosen = row;
            }
        }
        if (best_pivot == d) {
            Certificate c;
            c.code = "not_finitely_spaced";
            c.detail = "no basis vector separates filtration layers of " + p.objects[obj].name;
            c.elements = {p.objects[obj].name};
            c.data = {{"reason", "filtration_jump"}};
            return {std::nullopt, c};
        }
        for (int r = 0; r < d; ++r) change.at(r, i) = chosen.at(r, 0);
    }
    return {TriangularBasis{obj, change}, std::nullopt};
}

SpacedModulePresentation rebase(const SpacedModulePresentation& p, const std::vector<TriangularBasis>& bases) {
    SpacedModulePresentation out = p;
    std::vector<Matrix> inv;
    inv.reserve(bases.size());
    for (const auto& b : bases) inv.push_back(b.change.inverted());
    for (auto& [key, mats] : out.rad) {
        const Matrix& t_from = bases[static_cast<std::size_t>(key.first)].change;
        const Matrix& t_to_inv = inv[static_cast<std::size_t>(key.second)];
        for (Matrix& m : mats) m = t_to_inv * m * t_from;
    }
    return canonicalize(out);
}

}  // namespace spacedmod
