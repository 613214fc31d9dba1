#pragma once

#include "spacedmod/certificates.hpp"
#include "spacedmod/presentation.hpp"

namespace spacedmod {

/// Descending chain of subspaces of M(a): chain[i] spans the image of the
/// i-fold radical action, chain[0] the whole space, last entry zero.
struct Filtration {
    int object;
    std::vector<std::vector<Matrix>> chain;  // chain[i]: column vectors (d x 1)
    std::vector<int> dims() const;
};

/// Ordered basis m_1, ..., m_d adapted to the filtration; in the new
/// coordinates every radical endomorphism is strictly lower triangular.
struct TriangularBasis {
    int object;
    Matrix change;  // columns are m_1..m_d in original coordinates
};

Filtration radical_filtration(const SpacedModulePresentation& p, int object);

/// Fails with a not-finitely-spaced certificate when dim M(a) > 3 or a
/// filtration step drops by more than one dimension.
struct TriangularResult {
    std::optional<TriangularBasis> basis;
    std::optional<Certificate> certificate;
};
TriangularResult triangular_basis(const SpacedModulePresentation& p, const Filtration& f);

/// Conjugates every radical matrix into the m-coordinates of the given
/// bases. Spans are unchanged as abstract subspaces.
SpacedModulePresentation rebase(const SpacedModulePresentation& p, const std::vector<TriangularBasis>& bases);

}  // namespace spacedmod
