#include "spacedmod/rescale.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace spacedmod {

using nlohmann::json;

Coeff Coeff::scalar(ExactScalar s) {
    if (s.is_q()) return Coeff(RadMonomial::from_rational(s.rat()));
    return Coeff(std::move(s));
}

Coeff Coeff::mul(const Coeff& o) const {
    if (is_mono() != o.is_mono()) throw MixedFieldError();
    if (is_mono()) return Coeff(mono().mul(o.mono()));
    return Coeff(sc() * o.sc());
}

Coeff Coeff::inverse() const {
    if (is_mono()) return Coeff(mono().inverse());
    return Coeff(sc().inverse());
}

Coeff Coeff::pow_int(const Int& e) const {
    if (is_mono()) return Coeff(mono().pow(Rat(e)));
    ExactScalar base = e < 0 ? sc().inverse() : sc();
    Int k = e < 0 ? Int(-e) : e;
    ExactScalar acc = ExactScalar::one(base.field());
    for (Int i = 0; i < k; ++i) acc = acc * base;
    return Coeff(acc);
}

bool Coeff::is_one() const {
    if (is_mono()) return mono().is_one();
    return sc().is_one();
}

std::string Coeff::str() const {
    return is_mono() ? mono().str() : sc().str();
}

ExponentSystem exponent_system(const ClassifiedBasis& b, const ArrowGraph& g, const Poset& p) {
    ExponentSystem sys;
    sys.num_vertices = p.size();
    sys.vertex_names = p.names;
    sys.field = b.pres.field;
    for (const ArrowPair& pr : g.pairs) {
        const auto& m = b.morphisms[static_cast<std::size_t>(pr.morphism)];
        // first product f m_{p1} = m_{q1}, second f m_{p2} = lambda m_{q2}
        int p1 = p.index_of(m.from, m.positions[0].col);
        int q1 = p.index_of(m.to, m.positions[0].row);
        int p2 = p.index_of(m.from, m.positions[1].col);
        int q2 = p.index_of(m.to, m.positions[1].row);
        IntVec row(static_cast<std::size_t>(sys.num_vertices), 0);
        row[static_cast<std::size_t>(q1)] += 1;
        row[static_cast<std::size_t>(p2)] += 1;
        row[static_cast<std::size_t>(p1)] -= 1;
        row[static_cast<std::size_t>(q2)] -= 1;
        sys.a.push_back(std::move(row));
        sys.lambdas.push_back(*m.param);
        sys.indices.push_back({p1, p2, q1, q2});
        sys.pair_ids.push_back(pr.id);
    }
    return sys;
}

namespace {

Coeff lambda_coeff(const ExponentSystem& sys, std::size_t j, RescaleMode mode) {
    if (mode == RescaleMode::Symbolic)
        return Coeff::monomial(RadMonomial::symbol("lambda_" + std::to_string(j + 1)));
    return Coeff::scalar(sys.lambdas[j]);
}

WeightFunction weight_from_rows(const IntVec& z, const ExponentSystem& sys, const ArrowGraph& g, const Poset& p) {
    WeightFunction w;
    w.row_weights = z;
    for (std::size_t j = 0; j < sys.pair_ids.size(); ++j) {
        const ArrowPair& pr = g.pairs[static_cast<std::size_t>(sys.pair_ids[j])];
        w.arrow_weight[pr.first] = z[j];
        w.arrow_weight[pr.second] = -z[j];
    }
    // antisymmetry holds by construction; re-check mechanically anyway
    for (const ArrowPair& pr : g.pairs) {
        Int zf = w.arrow_weight.count(pr.first) ? w.arrow_weight[pr.first] : Int(0);
        Int zs = w.arrow_weight.count(pr.second) ? w.arrow_weight[pr.second] : Int(0);
        if (zf != -zs) w.antisymmetry_ok = false;
    }
    for (int v = 0; v < p.size(); ++v) {
        Int in(0), out(0);
        for (std::size_t ai = 0; ai < g.arrows.size(); ++ai) {
            auto it = w.arrow_weight.find(static_cast<int>(ai));
            Int zv = it == w.arrow_weight.end() ? Int(0) : it->second;
            if (g.arrows[ai].target == v) in += zv;
            if (g.arrows[ai].source == v) out += zv;
        }
        if (in != out) w.flow_ok = false;
    }
    return w;
}

}  // namespace

json ObstructionCertificate::to_json(const ArrowGraph& g, const Poset& p) const {
    json zmap = json::object();
    for (const auto& [arrow, wt] : z.arrow_weight) {
        const Arrow& a = g.arrows[static_cast<std::size_t>(arrow)];
        std::string key = p.names[static_cast<std::size_t>(a.source)] + "->" +
                          p.names[static_cast<std::size_t>(a.target)];
        if (wt >= std::numeric_limits<std::int64_t>::min() && wt <= std::numeric_limits<std::int64_t>::max())
            zmap[key] = static_cast<std::int64_t>(wt);
        else
            zmap[key] = wt.str();
    }
    return json{{"z", zmap},
                {"residual", residual.str()},
                {"axioms", {{"antisymmetry", z.antisymmetry_ok}, {"flow", z.flow_ok}}}};
}

KernelAnalysis weight_kernel(const ExponentSystem& sys, const ArrowGraph& g, const Poset& p, RescaleMode mode) {
    KernelAnalysis out;
    if (sys.a.empty()) return out;
    IntMat kernel = integer_left_kernel(sys.a);
    for (IntVec& z : kernel) {
        // normalize the leading sign
        for (const Int& v : z) {
            if (v == 0) continue;
            if (v < 0)
                for (Int& w : z) w = -w;
            break;
        }
        WeightFunction w = weight_from_rows(z, sys, g, p);
        const bool fp_mode = !sys.field.is_q();
        const RescaleMode eff = fp_mode ? RescaleMode::Numeric : mode;
        Coeff residual =
            fp_mode ? Coeff::scalar(ExactScalar::one(sys.field)) : Coeff::monomial(RadMonomial::one());
        for (std::size_t j = 0; j < sys.lambdas.size(); ++j)
            residual = residual.mul(lambda_coeff(sys, j, eff).pow_int(z[j]));
        if (!residual.is_one()) out.obstructions.push_back({w, residual});
        out.kernel.push_back(std::move(w));
    }
    return out;
}

namespace {

SolveOutcome solve_fp(const ExponentSystem& sys) {
    SolveOutcome out;
    const std::int64_t p = sys.field.p;
    const std::int64_t m = p - 1;
    const std::int64_t g = primitive_root(p);
    std::vector<Int> dlogs;
    for (const ExactScalar& lam : sys.lambdas) {
        if (lam.fp().r == 0) throw std::domain_error("zero double parameter");
        dlogs.push_back(Int(discrete_log(lam.fp().r, p)));
    }
    HnfResult hf = hermite_normal_form(sys.a);
    const int s = static_cast<int>(sys.a.size());
    const int rank = static_cast<int>(hf.pivot_cols.size());
    auto rhs_of = [&](int k) {
        Int acc(0);
        for (int j = 0; j < s; ++j) acc += hf.u[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * dlogs[static_cast<std::size_t>(j)];
        Int red = acc % m;
        if (red < 0) red += m;
        return red;
    };
    // zero rows of H: kernel relations must hold in the exponent group
    for (int k = rank; k < s; ++k) {
        if (rhs_of(k) != 0) {
            // residual obstruction; the caller re-derives the weight function
            Int exp = rhs_of(k);
            std::int64_t res = pow_mod(g, static_cast<std::int64_t>(exp % m), p);
            WeightFunction w;
            w.row_weights = hf.u[static_cast<std::size_t>(k)];
            out.obstructions.push_back({w, Coeff::scalar(ExactScalar(res, p))});
        }
    }
    if (!out.obstructions.empty()) return out;

    std::vector<Int> y(static_cast<std::size_t>(sys.num_vertices), Int(0));
    for (int k = rank - 1; k >= 0; --k) {
        int c = hf.pivot_cols[static_cast<std::size_t>(k)];
        Int rhs = rhs_of(k);
        for (int i = c + 1; i < sys.num_vertices; ++i)
            rhs -= hf.h[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
        Int d = hf.h[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
        Int rhs_m = rhs % m;
        if (rhs_m < 0) rhs_m += m;
        Int t = boost::multiprecision::gcd(d, Int(m));
        if (rhs_m % t != 0) {
            Certificate cert;
            cert.code = "unsolvable_root";
            cert.detail = "no solution of " + d.str() + " * e = " + rhs_m.str() + " (mod " +
                          std::to_string(m) + ") for vertex " + sys.vertex_names[static_cast<std::size_t>(c)];
            cert.elements = {sys.vertex_names[static_cast<std::size_t>(c)]};
            cert.data = {{"modulus", m}, {"coefficient", d.str()}, {"rhs", rhs_m.str()}};
            out.root_failure = cert;
            return out;
        }
        Int mt = Int(m) / t;
        Int dinv = Int(inverse_mod(static_cast<std::int64_t>((d / t) % mt), static_cast<std::int64_t>(mt)));
        y[static_cast<std::size_t>(c)] = (rhs_m / t) * dinv % mt;
    }
    RescalingSolution sol;
    sol.mode = RescaleMode::Numeric;
    for (int i = 0; i < sys.num_vertices; ++i) {
        std::int64_t e = static_cast<std::int64_t>(y[static_cast<std::size_t>(i)] % m);
        if (e < 0) e += m;
        sol.x.push_back(Coeff::scalar(ExactScalar(pow_mod(g, e, p), p)));
    }
    out.solution = std::move(sol);
    return out;
}

}  // namespace

SolveOutcome solve_rescaling(const ExponentSystem& sys, RescaleMode mode) {
    if (!sys.field.is_q()) return solve_fp(sys);

    bool promoted = false;
    if (mode == RescaleMode::Numeric) {
        for (const ExactScalar& lam : sys.lambdas)
            if (lam.rat() <= 0) { promoted = true; break; }
    }
    RescaleMode effective = promoted || mode == RescaleMode::Symbolic ? RescaleMode::Symbolic : RescaleMode::Numeric;

    SolveOutcome out;
    out.promoted_to_symbolic = promoted;
    HnfResult hf = hermite_normal_form(sys.a);
    const int s = static_cast<int>(sys.a.size());
    const int rank = static_cast<int>(hf.pivot_cols.size());
    auto rhs_of = [&](int k) {
        RadMonomial acc;
        for (int j = 0; j < s; ++j) {
            RadMonomial lam = lambda_coeff(sys, static_cast<std::size_t>(j), effective).mono();
            acc = acc.mul(lam.pow(Rat(hf.u[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])));
        }
        return acc;
    };
    for (int k = rank; k < s; ++k) {
        RadMonomial residual = rhs_of(k);
        if (!residual.is_one()) {
            WeightFunction w;
            w.row_weights = hf.u[static_cast<std::size_t>(k)];
            out.obstructions.push_back({w, Coeff::monomial(residual)});
        }
    }
    if (!out.obstructions.empty()) return out;

    std::vector<RadMonomial> x(static_cast<std::size_t>(sys.num_vertices));
    try {
        for (int k = rank - 1; k >= 0; --k) {
            int c = hf.pivot_cols[static_cast<std::size_t>(k)];
            RadMonomial rhs = rhs_of(k);
            for (int i = c + 1; i < sys.num_vertices; ++i) {
                const Int& coef = hf.h[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
                if (coef == 0) continue;
                rhs = rhs.mul(x[static_cast<std::size_t>(i)].pow(Rat(-coef)));
            }
            x[static_cast<std::size_t>(c)] = rhs.pow(Rat(1, hf.h[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)]));
        }
    } catch (const NegativeBaseFractionalPower&) {
        if (effective == RescaleMode::Symbolic) throw;  // symbols are sign-positive, unreachable
        ExponentSystem sym = sys;
        SolveOutcome retry = solve_rescaling(sym, RescaleMode::Symbolic);
        retry.promoted_to_symbolic = true;
        return retry;
    }
    RescalingSolution sol;
    sol.mode = effective;
    sol.promoted_to_symbolic = promoted;
    for (auto& xi : x) sol.x.push_back(Coeff::monomial(std::move(xi)));
    out.solution = std::move(sol);
    return out;
}

bool verify_solution(const ExponentSystem& sys, const RescalingSolution& sol, RescaleMode mode) {
    RescaleMode effective = sol.mode;
    (void)mode;
    for (std::size_t j = 0; j < sys.a.size(); ++j) {
        auto [p1, p2, q1, q2] = sys.indices[j];
        Coeff lhs = lambda_coeff(sys, j, effective)
                        .mul(sol.x[static_cast<std::size_t>(p1)])
                        .mul(sol.x[static_cast<std::size_t>(p2)].inverse())
                        .mul(sol.x[static_cast<std::size_t>(q1)].inverse())
                        .mul(sol.x[static_cast<std::size_t>(q2)]);
        if (!lhs.is_one()) return false;
    }
    return true;
}

namespace {

/// Formal trailing parameter per basis morphism in symbolic mode: a fresh
/// symbol for each short double (in deterministic pair order) and, for each
/// long double, the induced product of its factors' formal parameters.
std::vector<RadMonomial> formal_parameters(const ClassifiedBasis& b) {
    std::vector<RadMonomial> out(b.morphisms.size(), RadMonomial::one());
    std::vector<std::pair<std::array<int, 4>, std::size_t>> shorts;
    for (std::size_t k = 0; k < b.morphisms.size(); ++k) {
        const auto& m = b.morphisms[k];
        if (m.kind == MorKind::Double && m.is_short)
            shorts.push_back({{m.from, m.positions[0].col, m.to, m.positions[0].row}, k});
    }
    std::sort(shorts.begin(), shorts.end());
    std::vector<int> state(b.morphisms.size(), 0);  // 0 unknown, 1 in progress, 2 done
    for (std::size_t j = 0; j < shorts.size(); ++j) {
        out[shorts[j].second] = RadMonomial::symbol("lambda_" + std::to_string(j + 1));
        state[shorts[j].second] = 2;
    }
    // resolve long doubles through factorizations into basis doubles
    std::function<bool(std::size_t)> resolve = [&](std::size_t k) -> bool {
        if (state[k] == 2) return true;
        if (state[k] == 1) return false;
        state[k] = 1;
        const auto& m = b.morphisms[k];
        for (std::size_t gi = 0; gi < b.morphisms.size(); ++gi) {
            const auto& g = b.morphisms[gi];
            if (g.kind != MorKind::Double || g.from != m.from) continue;
            for (std::size_t hi = 0; hi < b.morphisms.size(); ++hi) {
                const auto& h = b.morphisms[hi];
                if (h.kind != MorKind::Double || h.from != g.to || h.to != m.to) continue;
                Matrix prod = h.mat * g.mat;
                ExactScalar lead_c = prod.at(m.positions[0].row - 1, m.positions[0].col - 1);
                if (lead_c.is_zero()) continue;
                if (!(prod == m.mat.scaled(lead_c))) continue;
                if (!resolve(gi) || !resolve(hi)) continue;
                // trace the two unit paths through the middle object
                auto coeff_at_col = [&](const BasisMorphism& f, const RadMonomial& param, int col,
                                        int& out_row) -> std::optional<RadMonomial> {
                    for (std::size_t t = 0; t < f.positions.size(); ++t)
                        if (f.positions[t].col == col) {
                            out_row = f.positions[t].row;
                            return t == 0 ? RadMonomial::one() : param;
                        }
                    return std::nullopt;
                };
                int mid_lead = 0, mid_trail = 0, end_lead = 0, end_trail = 0;
                auto g_lead = coeff_at_col(g, out[gi], m.positions[0].col, mid_lead);
                auto g_trail = coeff_at_col(g, out[gi], m.positions[1].col, mid_trail);
                if (!g_lead || !g_trail) continue;
                auto h_lead = coeff_at_col(h, out[hi], mid_lead, end_lead);
                auto h_trail = coeff_at_col(h, out[hi], mid_trail, end_trail);
                if (!h_lead || !h_trail || end_lead != m.positions[0].row || end_trail != m.positions[1].row)
                    continue;
                RadMonomial lead = g_lead->mul(*h_lead);
                RadMonomial trail = g_trail->mul(*h_trail);
                out[k] = trail.mul(lead.inverse());
                state[k] = 2;
                return true;
            }
        }
        state[k] = 0;
        return false;
    };
    for (std::size_t k = 0; k < b.morphisms.size(); ++k) {
        const auto& m = b.morphisms[k];
        if (m.kind == MorKind::Double && state[k] != 2 && !resolve(k))
            out[k] = RadMonomial::from_rational(m.param->rat());  // no factorization; keep the value
    }
    return out;
}

}  // namespace

RescaledBasis apply_rescaling(const ClassifiedBasis& b, const Poset& p, const RescalingSolution& sol) {
    RescaledBasis out;
    out.mode = sol.mode;
    out.vertex_scale = sol.x;
    out.vertex_names = p.names;
    const bool symbolic = sol.mode == RescaleMode::Symbolic;
    std::vector<RadMonomial> formal;
    if (symbolic) formal = formal_parameters(b);
    for (std::size_t k = 0; k < b.morphisms.size(); ++k) {
        const auto& m = b.morphisms[k];
        RescaledMorphism rm;
        rm.from = m.from;
        rm.to = m.to;
        rm.kind = m.kind;
        rm.is_short = m.is_short;
        rm.positions = m.positions;
        const Step lead = m.positions[0];
        Coeff unit_scale = sol.x[static_cast<std::size_t>(p.index_of(m.from, lead.col))]
                               .mul(sol.x[static_cast<std::size_t>(p.index_of(m.to, lead.row))].inverse());
        for (const Step& s : m.positions) {
            Coeff c;
            if (!symbolic) c = Coeff::scalar(m.mat.at(s.row - 1, s.col - 1));
            else if (s == lead) c = Coeff::monomial(RadMonomial::one());
            else c = Coeff::monomial(formal[k]);
            c = c.mul(unit_scale)
                 .mul(sol.x[static_cast<std::size_t>(p.index_of(m.from, s.col))].inverse())
                 .mul(sol.x[static_cast<std::size_t>(p.index_of(m.to, s.row))]);
            rm.coeffs.push_back(c);
        }
        out.morphisms.push_back(std::move(rm));
    }
    return out;
}

MultVerdict verify_multiplicative(const RescaledBasis& b) {
    MultVerdict v;
    v.multiplicative = true;
    json offenders = json::array();
    for (const auto& m : b.morphisms) {
        v.rank = std::max(v.rank, static_cast<int>(m.positions.size()));
        for (std::size_t i = 0; i < m.coeffs.size(); ++i)
            if (!m.coeffs[i].is_one()) {
                v.multiplicative = false;
                offenders.push_back({{"position", {m.positions[i].row, m.positions[i].col}},
                                     {"coefficient", m.coeffs[i].str()}});
            }
    }
    if (!offenders.empty()) v.detail = {{"non_unit_products", offenders}};
    v.detail["rank_bound_ok"] = v.rank <= 2;
    return v;
}

MultVerdict verify_multiplicative(const ClassifiedBasis& b) {
    MultVerdict v;
    v.multiplicative = true;
    json offenders = json::array();
    for (const auto& m : b.morphisms) {
        v.rank = std::max(v.rank, m.mat.rank());
        for (int i = 0; i < m.mat.rows(); ++i)
            for (int j = 0; j < m.mat.cols(); ++j) {
                const ExactScalar& c = m.mat.at(i, j);
                if (!c.is_zero() && !c.is_one()) {
                    v.multiplicative = false;
                    offenders.push_back({{"position", {i + 1, j + 1}}, {"coefficient", c.str()}});
                }
            }
    }
    if (!offenders.empty()) v.detail = {{"non_unit_products", offenders}};
    v.detail["rank_bound_ok"] = v.rank <= 2;
    return v;
}

}  // namespace spacedmod
