#pragma once

#include "spacedmod/rescale.hpp"
#include "spacedmod/witness.hpp"

namespace spacedmod {

struct StageReport {
    std::string name;
    std::string status;  // "ok" | "certified-violation" | "error"
    nlohmann::json payload;
};

struct RunReport {
    std::vector<StageReport> stages;
    nlohmann::json final_payload;

    bool has_error() const;
    bool has_violation() const;
    /// 0 all pass, 2 certified violations or obstructions, 1 I/O or format errors.
    int exit_code() const;
    nlohmann::json to_json() const;
};

RunReport run_analyze(const std::string& input_text);
RunReport run_normalize(const std::string& input_text, RescaleMode mode);
RunReport run_certify(const std::string& input_text);

/// Builds family members at the given parameters and reports the matrices
/// together with all pairwise isomorphism decisions.
nlohmann::json run_witness(FamilyKind kind, const std::vector<ExactScalar>& params, const FieldDesc& field,
                           std::uint64_t seed, int lemma6_i = 3, int lemma6_j = 1);

/// Verification-only path: re-ingests a basis document produced by the
/// normalize command and re-checks conditions and multiplicativity.
nlohmann::json verify_basis_document(const nlohmann::json& doc);

/// Shared pipeline state, exposed for targeted testing of late stages.
struct PipelineState {
    std::optional<SpacedModulePresentation> input;     // parsed, canonical
    std::optional<SpacedModulePresentation> rebased;
    std::vector<TriangularBasis> tri_bases;
    std::optional<ClassifiedBasis> basis;
    std::map<int, EndoType> endos;
    std::map<std::pair<int, int>, HomClassification> homs;
    std::optional<Poset> poset;
    std::optional<ArrowGraph> graph;
    std::optional<ExponentSystem> system;
};

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json basis_document(const ClassifiedBasis& b, const Poset& p, const RescaledBasis& r,
                              const MultVerdict& v);

}  // namespace spacedmod
