#pragma once

#include "spacedmod/graph.hpp"
#include "spacedmod/monomial.hpp"

namespace spacedmod {

/// Multiplicative coefficient: a formal monomial over Q (numeric or
/// symbolic mode) or a prime-field scalar (F_p mode).
class Coeff {
  public:
    Coeff() : v_(RadMonomial::one()) {}
    static Coeff monomial(RadMonomial m) { return Coeff(std::move(m)); }
    static Coeff scalar(ExactScalar s);

    bool is_mono() const { return std::holds_alternative<RadMonomial>(v_); }
    const RadMonomial& mono() const { return std::get<RadMonomial>(v_); }
    const ExactScalar& sc() const { return std::get<ExactScalar>(v_); }

    Coeff mul(const Coeff& o) const;
    Coeff inverse() const;
    Coeff pow_int(const Int& e) const;
    bool is_one() const;
    bool operator==(const Coeff& o) const { return v_ == o.v_; }
    std::string str() const;

  private:
    explicit Coeff(RadMonomial m) : v_(std::move(m)) {}
    explicit Coeff(ExactScalar s) : v_(std::move(s)) {}
    std::variant<RadMonomial, ExactScalar> v_;
};

enum class RescaleMode { Numeric, Symbolic };

/// Additive form of the rescaling equations: row j encodes
/// lambda_j x_{p(j1)} x_{p(j2)}^{-1} = x_{q(j1)} x_{q(j2)}^{-1}
/// as  +x_{q(j1)} +x_{p(j2)} -x_{p(j1)} -x_{q(j2)} = log lambda_j,
/// entries summed when vertex indices coincide.
struct ExponentSystem {
    IntMat a;                                 // s rows, one per connected pair
    std::vector<ExactScalar> lambdas;         // parameters of the pair morphisms
    std::vector<std::array<int, 4>> indices;  // p1, p2, q1, q2 per row (poset element ids)
    std::vector<int> pair_ids;
    int num_vertices = 0;
    std::vector<std::string> vertex_names;
    FieldDesc field;
};

ExponentSystem exponent_system(const ClassifiedBasis& b, const ArrowGraph& g, const Poset& p);

struct WeightFunction {
    IntVec row_weights;             // z_j per system row
    std::map<int, Int> arrow_weight;  // arrow index -> weight
    bool antisymmetry_ok = true;
    bool flow_ok = true;
};

struct ObstructionCertificate {
    WeightFunction z;
    Coeff residual;  // product of lambda_j^{z_j}, not the identity
    nlohmann::json to_json(const ArrowGraph& g, const Poset& p) const;
};

struct KernelAnalysis {
    std::vector<WeightFunction> kernel;  // integer basis of the left kernel
    std::vector<ObstructionCertificate> obstructions;
};

KernelAnalysis weight_kernel(const ExponentSystem& sys, const ArrowGraph& g, const Poset& p, RescaleMode mode);

struct RescalingSolution {
    std::vector<Coeff> x;  // per poset element
    RescaleMode mode = RescaleMode::Numeric;
    bool promoted_to_symbolic = false;
};

struct SolveOutcome {
    std::optional<RescalingSolution> solution;
    std::vector<ObstructionCertificate> obstructions;
    std::optional<Certificate> root_failure;  // F_p root congruence that failed
    bool promoted_to_symbolic = false;
};

SolveOutcome solve_rescaling(const ExponentSystem& sys, RescaleMode mode);

/// Substitutes the solution into every equation; independent of the
/// elimination path that produced it.
bool verify_solution(const ExponentSystem& sys, const RescalingSolution& sol, RescaleMode mode);

struct RescaledMorphism {
    int from, to;
    MorKind kind;
    bool is_short;
    std::vector<Step> positions;
    std::vector<Coeff> coeffs;  // per position, after the change of basis vectors
};

/// Basis after the change m_i = x_i m_i'; morphism products are tracked as
/// formal coefficients on the new vectors.
struct RescaledBasis {
    std::vector<Coeff> vertex_scale;  // x per poset element
    std::vector<std::string> vertex_names;
    std::vector<RescaledMorphism> morphisms;
    RescaleMode mode;
};

RescaledBasis apply_rescaling(const ClassifiedBasis& b, const Poset& p, const RescalingSolution& sol);

struct MultVerdict {
    bool multiplicative = false;
    int rank = 0;
    nlohmann::json detail;
};

MultVerdict verify_multiplicative(const RescaledBasis& b);
/// Scalar-level check on an unrescaled basis: every product coefficient in {0, 1}.
MultVerdict verify_multiplicative(const ClassifiedBasis& b);

}  // namespace spacedmod
