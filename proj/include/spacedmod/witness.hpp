#pragma once

#include "spacedmod/presentation.hpp"

#include <cstdint>

namespace spacedmod {

/// A space on the module: a vector space V mapped into M(X) for a finite
/// sum X of presentation objects. Rows of h are grouped by object class in
/// order of first appearance, then by layer, then by copy.
struct SpaceOnM {
    std::vector<int> target;  // object indices with multiplicity
    Matrix h;                 // dim M(X) x dim V
};

enum class FamilyKind { Lemma2, Lemma3, Lemma6, Lemma7Two, Lemma7Three, Lemma8Case1, Lemma8Case2 };

std::optional<FamilyKind> family_from_string(const std::string& s);
std::string family_to_string(FamilyKind k);

/// Minimal presentation realizing the configuration each family lives on.
SpacedModulePresentation family_context(FamilyKind k, const FieldDesc& f);

struct ContextMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Assembles the family member at the given parameter. For Lemma6 the
/// identity-pair block sits in the rows of layers (i, j); the other layers
/// receive the one-column blocks in layer order.
SpaceOnM build_family(FamilyKind k, const SpacedModulePresentation& ctx, const ExactScalar& param,
                      int lemma6_i = 3, int lemma6_j = 1);

struct IsoWitness {
    Matrix phi;  // V-side change, invertible
    Matrix xi;   // M(X)-side matrix inside the endomorphism span, invertible
};

struct IsoResult {
    std::optional<IsoWitness> witness;  // empty means not isomorphic
    bool scale_exceeded = false;
};

/// Decides isomorphism of two spaces over the presentation by solving the
/// intertwining system exactly and testing generic invertibility with
/// deterministic seeds (exhaustive small-field fallback at low dimensions).
/// Desk scale: dim V <= 12, dim M(X) <= 24.
IsoResult spaces_isomorphic(const SpaceOnM& h1, const SpaceOnM& h2, const SpacedModulePresentation& pres,
                            std::uint64_t seed = 1);

}  // namespace spacedmod
