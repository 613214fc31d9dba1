#pragma once

#include "spacedmod/scalar.hpp"

#include <functional>
#include <vector>

namespace spacedmod {

/// Dense matrix over ExactScalar. Row/column indices are 0-based here;
/// the 1-based (i,j) of step positions is applied at the call sites.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, const FieldDesc& f);

    static Matrix identity(int n, const FieldDesc& f);
    /// Matrix unit with a single 1 at (i, j), 0-based.
    static Matrix unit(int rows, int cols, int i, int j, const FieldDesc& f);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const FieldDesc& field() const { return field_; }

    ExactScalar& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const ExactScalar& at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix scaled(const ExactScalar& c) const;
    Matrix transposed() const;
    bool operator==(const Matrix& o) const;
    bool is_zero() const;

    int rank() const;
    /// Row-reduce in place to reduced row echelon form; returns pivot columns.
    std::vector<int> rref();
    /// Inverse of a square matrix; throws std::domain_error if singular.
    Matrix inverted() const;

    /// Row-major vectorization.
    std::vector<ExactScalar> vectorized() const;
    static Matrix from_vector(const std::vector<ExactScalar>& v, int rows, int cols, const FieldDesc& f);

  private:
    int rows_ = 0, cols_ = 0;
    FieldDesc field_;
    std::vector<ExactScalar> data_;
};

/// RREF basis of a subspace of vectorized matrices. Insertion order does
/// not affect the stored canonical basis.
class SpanBasis {
  public:
    SpanBasis(int rows, int cols, const FieldDesc& f) : rows_(rows), cols_(cols), field_(f) {}

    /// Returns true if the matrix enlarged the span.
    bool insert(const Matrix& m);
    bool contains(const Matrix& m) const;
    int dimension() const { return static_cast<int>(basis_.size()); }
    /// Canonical spanning matrices (RREF rows, pivot-sorted).
    std::vector<Matrix> canonical_basis() const;
    bool equals(const SpanBasis& o) const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }

  private:
    int rows_, cols_;
    FieldDesc field_;
    std::vector<std::vector<ExactScalar>> basis_;  // reduced rows
    std::vector<int> pivots_;
    std::vector<ExactScalar> reduce(const Matrix& m) const;
};

/// Solves A x = b exactly; empty optional when inconsistent.
std::optional<std::vector<ExactScalar>> solve_linear(const Matrix& a, const std::vector<ExactScalar>& b);

// --- integer lattice routines --------------------------------------------

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

/// Row-style Hermite normal form: returns (H, U) with U unimodular,
/// U * A = H, H in row echelon form with positive pivots and entries above
/// each pivot reduced into [0, pivot).
struct HnfResult {
    IntMat h;
    IntMat u;
    std::vector<int> pivot_cols;  // one per nonzero row of h
};
HnfResult hermite_normal_form(const IntMat& a);

/// Basis of the integer left kernel {z : z A = 0}.
IntMat integer_left_kernel(const IntMat& a);

}  // namespace spacedmod
