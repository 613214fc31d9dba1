#include "spacedmod/witness.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace spacedmod {

std::optional<FamilyKind> family_from_string(const std::string& s) {
    if (s == "lemma2") return FamilyKind::Lemma2;
    if (s == "lemma3") return FamilyKind::Lemma3;
    if (s == "lemma6") return FamilyKind::Lemma6;
    if (s == "lemma7_two") return FamilyKind::Lemma7Two;
    if (s == "lemma7_three") return FamilyKind::Lemma7Three;
    if (s == "lemma8" || s == "lemma8_case1") return FamilyKind::Lemma8Case1;
    if (s == "lemma8_case2") return FamilyKind::Lemma8Case2;
    return std::nullopt;
}

std::string family_to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::Lemma2: return "lemma2";
        case FamilyKind::Lemma3: return "lemma3";
        case FamilyKind::Lemma6: return "lemma6";
        case FamilyKind::Lemma7Two: return "lemma7_two";
        case FamilyKind::Lemma7Three: return "lemma7_three";
        case FamilyKind::Lemma8Case1: return "lemma8_case1";
        case FamilyKind::Lemma8Case2: return "lemma8_case2";
    }
    return "?";
}

namespace {

struct PresBuilder {
    SpacedModulePresentation p;
    explicit PresBuilder(const FieldDesc& f) { p.field = f; }
    int object(const std::string& name, int dim) {
        p.objects.push_back({name, p.num_objects()});
        p.dims.push_back(dim);
        return p.num_objects() - 1;
    }
    Matrix unit(int from, int to, int i, int j) {  // 1-based position
        return Matrix::unit(p.dim(to), p.dim(from), i - 1, j - 1, p.field);
    }
    void rad(int from, int to, std::vector<Matrix> mats) { p.rad[{from, to}] = std::move(mats); }
    void full_lower(int obj) {
        std::vector<Matrix> mats;
        for (int i = 2; i <= p.dim(obj); ++i)
            for (int j = 1; j < i; ++j) mats.push_back(unit(obj, obj, i, j));
        rad(obj, obj, std::move(mats));
    }
};

}  // namespace

SpacedModulePresentation family_context(FamilyKind k, const FieldDesc& f) {
    PresBuilder b(f);
    auto one = ExactScalar::one(f);
    switch (k) {
        case FamilyKind::Lemma2: {
            int a = b.object("a", 3), bb = b.object("b", 3);
            b.full_lower(a);
            b.full_lower(bb);
            // steps (1,2) and (2,3), reverse hom zero
            Matrix psi = b.unit(a, bb, 1, 2) + b.unit(a, bb, 2, 3);
            std::vector<Matrix> mats{psi};
            for (auto [i, j] : {std::pair{1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}})
                mats.push_back(b.unit(a, bb, i, j));
            b.rad(a, bb, std::move(mats));
            (void)one;
            return b.p;
        }
        case FamilyKind::Lemma3: {
            int a = b.object("a", 3), bb = b.object("b", 3);
            b.full_lower(a);
            b.full_lower(bb);
            Matrix psi = b.unit(a, bb, 1, 1) + b.unit(a, bb, 2, 2) + b.unit(a, bb, 3, 3);
            std::vector<Matrix> mats{psi};
            for (auto [i, j] : {std::pair{2, 1}, {3, 1}, {3, 2}}) mats.push_back(b.unit(a, bb, i, j));
            b.rad(a, bb, std::move(mats));
            return b.p;
        }
        case FamilyKind::Lemma6: {
            b.object("a", 3);
            b.object("b", 3);
            b.full_lower(0);
            b.full_lower(1);
            return b.p;
        }
        case FamilyKind::Lemma7Two: {
            b.object("a", 2);
            b.object("b", 2);
            b.full_lower(0);
            b.full_lower(1);
            return b.p;
        }
        case FamilyKind::Lemma7Three: {
            for (auto name : {"a", "b", "c"}) b.object(name, 2);
            for (int o = 0; o < 3; ++o) b.full_lower(o);
            return b.p;
        }
        case FamilyKind::Lemma8Case1: {
            b.object("a", 3);
            b.object("b", 2);
            b.object("c", 2);
            for (int o = 0; o < 3; ++o) b.full_lower(o);
            return b.p;
        }
        case FamilyKind::Lemma8Case2: {
            b.object("a", 3);
            b.object("b", 2);
            for (int o = 0; o < 2; ++o) b.full_lower(o);
            return b.p;
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

/// Row layout of M(X): classes in order of first appearance, rows grouped
/// by (class, layer), copies adjacent.
struct TargetLayout {
    std::vector<int> classes;
    std::vector<int> mult;
    std::vector<int> offset;  // row offset per class
    int total = 0;

    static TargetLayout of(const std::vector<int>& target, const SpacedModulePresentation& p) {
        TargetLayout l;
        for (int o : target) {
            auto it = std::find(l.classes.begin(), l.classes.end(), o);
            if (it == l.classes.end()) {
                l.classes.push_back(o);
                l.mult.push_back(1);
            } else {
                ++l.mult[static_cast<std::size_t>(it - l.classes.begin())];
            }
        }
        for (std::size_t c = 0; c < l.classes.size(); ++c) {
            l.offset.push_back(l.total);
            l.total += p.dim(l.classes[c]) * l.mult[c];
        }
        return l;
    }
    int row(std::size_t cls, int layer, int copy) const {  // layer 1-based, copy 0-based
        return offset[cls] + (layer - 1) * mult[cls] + copy;
    }
};

void put_block(Matrix& h, const TargetLayout& l, std::size_t cls, int layer, int col0,
               const std::vector<std::vector<ExactScalar>>& block) {
    for (std::size_t copy = 0; copy < block.size(); ++copy)
        for (std::size_t c = 0; c < block[copy].size(); ++c)
            h.at(l.row(cls, layer, static_cast<int>(copy)), col0 + static_cast<int>(c)) = block[copy][c];
}

}  // namespace

SpaceOnM build_family(FamilyKind k, const SpacedModulePresentation& ctx, const ExactScalar& param,
                      int lemma6_i, int lemma6_j) {
    const FieldDesc& f = ctx.field;
    auto one = ExactScalar::one(f);
    auto zero = ExactScalar::zero(f);
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) throw ContextMismatch("family context mismatch: " + msg);
    };

    switch (k) {
        case FamilyKind::Lemma2:
        case FamilyKind::Lemma6: {
            need(ctx.num_objects() >= 2 && ctx.dim(0) == 3 && ctx.dim(1) == 3, "two objects of dimension 3");
            int i = k == FamilyKind::Lemma2 ? 3 : lemma6_i;
            int j = k == FamilyKind::Lemma2 ? 1 : lemma6_j;
            need(i >= 1 && i <= 3 && j >= 1 && j <= 3, "layer indices in 1..3");
            SpaceOnM s;
            s.target = {0, 0, 1, 1};
            TargetLayout l = TargetLayout::of(s.target, ctx);
            s.h = Matrix(l.total, 6, f);
            int col = 0;
            int a_seen = 0, b_seen = 0, icols = -1;
            for (std::size_t cls = 0; cls < 2; ++cls)
                for (int layer = 1; layer <= 3; ++layer) {
                    if (cls == 0 && layer == i) {
                        icols = col;
                        put_block(s.h, l, cls, layer, col, {{one, zero}, {zero, one}});
                        col += 2;
                    } else if (cls == 1 && layer == j) {
                        put_block(s.h, l, cls, layer, icols, {{one, zero}, {zero, one}});
                    } else if (cls == 0) {
                        put_block(s.h, l, cls, layer, col,
                                  a_seen == 0 ? std::vector<std::vector<ExactScalar>>{{one}, {zero}}
                                              : std::vector<std::vector<ExactScalar>>{{zero}, {one}});
                        ++a_seen;
                        ++col;
                    } else {
                        put_block(s.h, l, cls, layer, col,
                                  b_seen == 0 ? std::vector<std::vector<ExactScalar>>{{one}, {one}}
                                              : std::vector<std::vector<ExactScalar>>{{one}, {param}});
                        ++b_seen;
                        ++col;
                    }
                }
            return s;
        }
        case FamilyKind::Lemma3: {
            need(ctx.num_objects() >= 2 && ctx.dim(0) == 3 && ctx.dim(1) == 3, "two objects of dimension 3");
            SpaceOnM s;
            s.target = {0, 1};
            TargetLayout l = TargetLayout::of(s.target, ctx);
            s.h = Matrix(l.total, 3, f);
            for (int layer = 1; layer <= 3; ++layer) s.h.at(l.row(0, layer, 0), layer - 1) = one;
            s.h.at(l.row(1, 2, 0), 1) = one;
            s.h.at(l.row(1, 3, 0), 2) = param;
            return s;
        }
        case FamilyKind::Lemma7Two: {
            need(ctx.num_objects() >= 2 && ctx.dim(0) == 2 && ctx.dim(1) == 2, "two objects of dimension 2");
            SpaceOnM s;
            s.target = {0, 1};
            TargetLayout l = TargetLayout::of(s.target, ctx);
            s.h = Matrix(l.total, 2, f);
            s.h.at(l.row(0, 1, 0), 0) = one;  // m_i^a
            s.h.at(l.row(1, 2, 0), 0) = one;  // m_{j'}^b
            s.h.at(l.row(1, 1, 0), 1) = one;  // m_j^b
            s.h.at(l.row(0, 2, 0), 1) = param;  // lambda m_{i'}^a
            return s;
        }
        case FamilyKind::Lemma7Three: {
            need(ctx.num_objects() >= 3 && ctx.dim(0) == 2 && ctx.dim(1) == 2 && ctx.dim(2) == 2,
                 "three objects of dimension 2");
            SpaceOnM s;
            s.target = {0, 1, 2};
            TargetLayout l = TargetLayout::of(s.target, ctx);
            s.h = Matrix(l.total, 3, f);
            s.h.at(l.row(0, 1, 0), 0) = one;
            s.h.at(l.row(1, 2, 0), 0) = one;
            s.h.at(l.row(1, 1, 0), 1) = one;
            s.h.at(l.row(2, 2, 0), 1) = one;
            s.h.at(l.row(2, 1, 0), 2) = one;
            s.h.at(l.row(0, 2, 0), 2) = param;
            return s;
        }
        case FamilyKind::Lemma8Case1:
        case FamilyKind::Lemma8Case2: {
            const bool merged = k == FamilyKind::Lemma8Case2;
            if (merged)
                need(ctx.num_objects() >= 2 && ctx.dim(0) == 3 && ctx.dim(1) == 2,
                     "a triple and a double object");
            else
                need(ctx.num_objects() >= 3 && ctx.dim(0) == 3 && ctx.dim(1) == 2 && ctx.dim(2) == 2,
                     "a triple and two double objects");
            // quiver data: dimensions r = (2,3,3,1,1), t = (4,2,2)
            const std::vector<std::vector<ExactScalar>> a1{{one, param}, {one, one}, {one, zero}, {zero, one}};
            const std::vector<std::vector<ExactScalar>> a2{{one, zero, zero}, {zero, one, zero}, {zero, zero, one}, {zero, zero, zero}};
            const std::vector<std::vector<ExactScalar>> a3{{zero, zero, zero}, {zero, zero, one}, {zero, one, zero}, {one, zero, zero}};
            const std::vector<std::vector<ExactScalar>> bc1{{zero, one, zero}, {zero, zero, one}};
            const std::vector<std::vector<ExactScalar>> bc2{{one}, {zero}};

            SpaceOnM s;
            if (merged) s.target = {0, 0, 0, 0, 1, 1, 1, 1};
            else s.target = {0, 0, 0, 0, 1, 1, 2, 2};
            TargetLayout l = TargetLayout::of(s.target, ctx);
            s.h = Matrix(l.total, 10, f);
            // column blocks: r1 = 0..1, r2 = 2..4, r3 = 5..7, r4 = 8, r5 = 9
            auto place = [&](std::size_t cls, int layer, int copy0, int col0,
                             const std::vector<std::vector<ExactScalar>>& block) {
                for (std::size_t cp = 0; cp < block.size(); ++cp)
                    for (std::size_t c = 0; c < block[cp].size(); ++c)
                        s.h.at(l.row(cls, layer, copy0 + static_cast<int>(cp)), col0 + static_cast<int>(c)) =
                            block[cp][c];
            };
            place(0, 1, 0, 0, a1);
            place(0, 2, 0, 2, a2);
            place(0, 3, 0, 5, a3);
            if (merged) {
                place(1, 1, 0, 2, bc1);  // copies 0,1 of b carry the first double role
                place(1, 1, 2, 5, bc1);  // copies 2,3 carry the second
                place(1, 2, 0, 8, bc2);
                place(1, 2, 2, 9, bc2);
            } else {
                place(1, 1, 0, 2, bc1);
                place(2, 1, 0, 5, bc1);
                place(1, 2, 0, 8, bc2);
                place(2, 2, 0, 9, bc2);
            }
            return s;
        }
    }
    throw std::logic_error("unreachable");
}

// --- isomorphism decision ---------------------------------------------------

namespace {

struct SparseRow {
    std::vector<std::pair<int, ExactScalar>> terms;  // sorted by column
};

class SparseEchelon {
  public:
    SparseEchelon(int cols, const FieldDesc& f) : cols_(cols), field_(f) {}

    void add_row(SparseRow row) {
        // clear every stored pivot column from the row, not only the leading one
        for (;;) {
            prune(row);
            int hit = -1;
            for (const auto& [c, v] : row.terms)
                if (pivots_.count(c)) { hit = c; break; }
            if (hit < 0) break;
            eliminate(row, hit, pivots_.at(hit));
        }
        if (row.terms.empty()) return;
        const int lead = row.terms.front().first;
        ExactScalar inv = row.terms.front().second.inverse();
        for (auto& [c, v] : row.terms) v = v * inv;
        for (auto& [pc, prow] : pivots_) eliminate(prow, lead, row);
        pivots_.emplace(lead, std::move(row));
    }

    std::vector<std::vector<ExactScalar>> kernel_basis() const {
        std::vector<std::vector<ExactScalar>> out;
        std::vector<bool> is_pivot(static_cast<std::size_t>(cols_), false);
        for (const auto& [c, row] : pivots_) is_pivot[static_cast<std::size_t>(c)] = true;
        for (int fcol = 0; fcol < cols_; ++fcol) {
            if (is_pivot[static_cast<std::size_t>(fcol)]) continue;
            std::vector<ExactScalar> x(static_cast<std::size_t>(cols_), ExactScalar::zero(field_));
            x[static_cast<std::size_t>(fcol)] = ExactScalar::one(field_);
            for (const auto& [pc, row] : pivots_)
                for (const auto& [c, v] : row.terms)
                    if (c == fcol) x[static_cast<std::size_t>(pc)] = -v;
            out.push_back(std::move(x));
        }
        return out;
    }

  private:
    int cols_;
    FieldDesc field_;
    std::map<int, SparseRow> pivots_;

    static void prune(SparseRow& r) {
        r.terms.erase(std::remove_if(r.terms.begin(), r.terms.end(),
                                     [](const auto& t) { return t.second.is_zero(); }),
                      r.terms.end());
    }
    // target -= target[col] * source (source has leading one at col)
    static void eliminate(SparseRow& target, int col, const SparseRow& source) {
        ExactScalar factor = ExactScalar();
        bool found = false;
        for (const auto& [c, v] : target.terms)
            if (c == col) { factor = v; found = true; break; }
        if (!found || factor.is_zero()) return;
        SparseRow result;
        auto ta = target.terms.begin();
        auto sa = source.terms.begin();
        while (ta != target.terms.end() || sa != source.terms.end()) {
            if (sa == source.terms.end() || (ta != target.terms.end() && ta->first < sa->first)) {
                result.terms.push_back(*ta++);
            } else if (ta == target.terms.end() || sa->first < ta->first) {
                result.terms.push_back({sa->first, -(factor * sa->second)});
                ++sa;
            } else {
                ExactScalar v = ta->second - factor * sa->second;
                if (!v.is_zero()) result.terms.push_back({ta->first, v});
                ++ta;
                ++sa;
            }
        }
        target = std::move(result);
    }
};

struct XiParam {
    Matrix action;  // dim M(X) x dim M(X)
};

}  // namespace

IsoResult spaces_isomorphic(const SpaceOnM& h1, const SpaceOnM& h2, const SpacedModulePresentation& pres,
                            std::uint64_t seed) {
    IsoResult out;
    const FieldDesc& f = pres.field;
    const int v_dim = h1.h.cols();
    const int m_dim = h1.h.rows();
    if (v_dim > 12 || m_dim > 24) {
        out.scale_exceeded = true;
        return out;
    }
    if (h2.h.cols() != v_dim || h2.h.rows() != m_dim) return out;
    {
        std::vector<int> t1 = h1.target, t2 = h2.target;
        std::sort(t1.begin(), t1.end());
        std::sort(t2.begin(), t2.end());
        if (t1 != t2) return out;
    }

    TargetLayout layout = TargetLayout::of(h1.target, pres);
    std::vector<XiParam> params;
    // scalar blocks on copies of one class
    for (std::size_t cls = 0; cls < layout.classes.size(); ++cls) {
        const int obj = layout.classes[cls];
        for (int u = 0; u < layout.mult[cls]; ++u)
            for (int v = 0; v < layout.mult[cls]; ++v) {
                Matrix e(m_dim, m_dim, f);
                for (int layer = 1; layer <= pres.dim(obj); ++layer)
                    e.at(layout.row(cls, layer, v), layout.row(cls, layer, u)) = ExactScalar::one(f);
                params.push_back({std::move(e)});
            }
    }
    // radical blocks between copies
    for (std::size_t c_from = 0; c_from < layout.classes.size(); ++c_from)
        for (std::size_t c_to = 0; c_to < layout.classes.size(); ++c_to) {
            const int fo = layout.classes[c_from], to = layout.classes[c_to];
            for (const Matrix& r : pres.rad_list(fo, to))
                for (int u = 0; u < layout.mult[c_from]; ++u)
                    for (int v = 0; v < layout.mult[c_to]; ++v) {
                        Matrix e(m_dim, m_dim, f);
                        for (int i = 0; i < r.rows(); ++i)
                            for (int j = 0; j < r.cols(); ++j)
                                if (!r.at(i, j).is_zero())
                                    e.at(layout.row(c_to, i + 1, v), layout.row(c_from, j + 1, u)) = r.at(i, j);
                        params.push_back({std::move(e)});
                    }
        }

    const int n_phi = v_dim * v_dim;
    const int n_unknowns = n_phi + static_cast<int>(params.size());
    // precompute E_p * h1 per parameter
    std::vector<Matrix> param_h;
    param_h.reserve(params.size());
    for (const auto& pr : params) param_h.push_back(pr.action * h1.h);

    SparseEchelon ech(n_unknowns, f);
    for (int r = 0; r < m_dim; ++r)
        for (int c = 0; c < v_dim; ++c) {
            SparseRow row;
            for (int k = 0; k < v_dim; ++k) {
                const ExactScalar& coef = h2.h.at(r, k);
                if (!coef.is_zero()) row.terms.push_back({k * v_dim + c, coef});
            }
            for (std::size_t pidx = 0; pidx < params.size(); ++pidx) {
                const ExactScalar& coef = param_h[pidx].at(r, c);
                if (!coef.is_zero()) row.terms.push_back({n_phi + static_cast<int>(pidx), -coef});
            }
            std::sort(row.terms.begin(), row.terms.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            ech.add_row(std::move(row));
        }

    auto kernel = ech.kernel_basis();
    if (kernel.empty()) return out;

    auto assemble = [&](const std::vector<ExactScalar>& coords) {
        Matrix phi(v_dim, v_dim, f);
        for (int k = 0; k < v_dim; ++k)
            for (int c = 0; c < v_dim; ++c) phi.at(k, c) = coords[static_cast<std::size_t>(k * v_dim + c)];
        Matrix xi(m_dim, m_dim, f);
        for (std::size_t pidx = 0; pidx < params.size(); ++pidx) {
            const ExactScalar& w = coords[static_cast<std::size_t>(n_phi) + pidx];
            if (!w.is_zero()) xi = xi + params[pidx].action.scaled(w);
        }
        return std::make_pair(std::move(phi), std::move(xi));
    };
    auto try_coords = [&](const std::vector<ExactScalar>& coords) -> bool {
        auto [phi, xi] = assemble(coords);
        if (phi.rank() != v_dim || xi.rank() != m_dim) return false;
        if (!(h2.h * phi == xi * h1.h)) return false;
        out.witness = IsoWitness{std::move(phi), std::move(xi)};
        return true;
    };
    auto combine = [&](const std::vector<ExactScalar>& weights) {
        std::vector<ExactScalar> coords(static_cast<std::size_t>(n_unknowns), ExactScalar::zero(f));
        for (std::size_t b = 0; b < kernel.size(); ++b) {
            if (weights[b].is_zero()) continue;
            for (std::size_t j = 0; j < coords.size(); ++j)
                coords[j] = coords[j] + weights[b] * kernel[b][j];
        }
        return coords;
    };

    // deterministic candidates: each basis vector, then the all-ones combination
    for (const auto& vec : kernel)
        if (try_coords(vec)) return out;
    {
        std::vector<ExactScalar> ones(kernel.size(), ExactScalar::one(f));
        if (try_coords(combine(ones))) return out;
    }
    // seeded random combinations
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-19, 19);
    for (int trial = 0; trial < 24; ++trial) {
        std::vector<ExactScalar> w;
        w.reserve(kernel.size());
        for (std::size_t b = 0; b < kernel.size(); ++b) w.push_back(ExactScalar::from_int(dist(rng), f));
        if (try_coords(combine(w))) return out;
    }
    // exhaustive small-field sweep when the solution space is tiny
    if (kernel.size() <= 5) {
        const int radix = 5;
        std::vector<int> digits(kernel.size(), 0);
        for (;;) {
            std::size_t pos = 0;
            while (pos < digits.size() && ++digits[pos] == radix) digits[pos++] = 0;
            if (pos == digits.size()) break;
            std::vector<ExactScalar> w;
            w.reserve(kernel.size());
            for (int d : digits) w.push_back(ExactScalar::from_int(d, f));
            if (try_coords(combine(w))) return out;
        }
    }
    return out;
}

}  // namespace spacedmod
