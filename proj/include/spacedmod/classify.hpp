#pragma once

#include "spacedmod/triangular.hpp"

#include <map>
#include <optional>

namespace spacedmod {

/// Position (row l, col r), 1-based, in the coordinates of a triangular
/// basis. Positions are ordered by (i,j) >= (l,r) iff i <= l and j >= r;
/// a step is a maximal nonzero position under this order.
struct Step {
    int row, col;
    bool operator==(const Step& o) const { return row == o.row && col == o.col; }
    bool operator<(const Step& o) const { return row < o.row || (row == o.row && col < o.col); }
};

/// Strict order test: x > y.
inline bool step_above(const Step& x, const Step& y) {
    return x.row <= y.row && x.col >= y.col && !(x == y);
}

std::vector<Step> steps_of_map(const Matrix& phi);
std::vector<Step> steps_of_space(const std::vector<Matrix>& span_basis, int rows, int cols);

/// Positions strictly below some step (S) and below-or-equal (S bar).
struct LowerSets {
    std::vector<Step> s_positions;
    std::vector<Step> sbar_positions;
};
LowerSets lower_sets(const std::vector<Step>& steps, int rows, int cols);

enum class EndoKind { D1, D2, D3Chain, D3Double };
struct EndoType {
    EndoKind kind;
    std::optional<ExactScalar> lambda;  // D3Double only
};

enum class HomCase { Saturated, TwoStep, DiagOneDouble, DiagTwoDouble };

struct HomClassification {
    int from = -1, to = -1;
    std::vector<Step> steps;
    HomCase homcase = HomCase::Saturated;
    int diag_variant = 0;               // 12, 13 or 23 for DiagOneDouble
    std::optional<ExactScalar> lambda;  // TwoStep, DiagOneDouble, DiagTwoDouble
    std::optional<ExactScalar> mu;      // DiagTwoDouble only
    std::vector<Step> s_positions, sbar_positions;
    int double_directions() const;
};

enum class MorKind { Prime, Double };

struct BasisMorphism {
    int from = -1, to = -1;
    Matrix mat;
    MorKind kind = MorKind::Prime;
    std::optional<ExactScalar> param;   // doubles only, the trailing coefficient
    bool is_short = false;
    std::vector<Step> positions;        // leading first; 1 entry for primes, 2 for doubles
};

struct ConditionEntry {
    bool pass = true;
    nlohmann::json witness;
};

/// Per-letter results for the scalarly-multiplicative basis conditions,
/// plus structural validity of the tagged morphisms themselves.
struct ConditionReport {
    ConditionEntry structural, a, b, c, d, e;
    bool form_divergence_flag = false;  // some hom space matched no normal form
    bool scalarly_multiplicative() const { return structural.pass && a.pass && b.pass && c.pass; }
    bool normed() const { return scalarly_multiplicative() && d.pass; }
    bool reduced() const { return normed() && e.pass; }
    nlohmann::json to_json() const;
};

struct ClassifiedBasis {
    SpacedModulePresentation pres;           // rebased, canonical spans
    std::vector<TriangularBasis> bases;      // original-coordinate change matrices
    std::vector<BasisMorphism> morphisms;
    std::map<std::pair<int, int>, int> double_counts;  // double directions per ordered pair
    bool normed = false, reduced = false;
};

struct EndoResult {
    std::optional<EndoType> type;
    std::optional<Certificate> certificate;
};
EndoResult classify_endo(const SpacedModulePresentation& rebased, int object);

struct HomResult {
    std::optional<HomClassification> classification;
    std::vector<Certificate> certificates;  // lemma2 / lemma3 / lemma4 / unclassifiable
};
HomResult classify_hom(const SpacedModulePresentation& rebased, int from, int to);

/// Span of all two-factor radical composites through any middle object.
SpanBasis composite_span(const SpacedModulePresentation& rebased, int from, int to);

bool is_short(const SpacedModulePresentation& rebased, const BasisMorphism& f);

struct MorphismEnumeration {
    std::vector<BasisMorphism> all;     // every prime and double direction
    std::vector<Certificate> certificates;
};
MorphismEnumeration enumerate_basis_morphisms(const SpacedModulePresentation& rebased, int from, int to,
                                              const EndoType* endo, const HomClassification* hom);

struct BasisBuild {
    std::optional<ClassifiedBasis> basis;
    std::vector<Certificate> certificates;
    std::map<int, EndoType> endos;
    std::map<std::pair<int, int>, HomClassification> homs;
    std::optional<ConditionReport> conditions;
};
BasisBuild build_reduced_basis(const SpacedModulePresentation& rebased, const std::vector<TriangularBasis>& bases);

ConditionReport check_basis_conditions(const ClassifiedBasis& b);

}  // namespace spacedmod
