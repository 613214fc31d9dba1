#include "spacedmod/matrix.hpp"

#include <algorithm>

namespace spacedmod {

Matrix::Matrix(int rows, int cols, const FieldDesc& f)
    : rows_(rows), cols_(cols), field_(f),
      data_(static_cast<std::size_t>(rows) * cols, ExactScalar::zero(f)) {}

Matrix Matrix::identity(int n, const FieldDesc& f) {
    Matrix m(n, n, f);
    for (int i = 0; i < n; ++i) m.at(i, i) = ExactScalar::one(f);
    return m;
}

Matrix Matrix::unit(int rows, int cols, int i, int j, const FieldDesc& f) {
    Matrix m(rows, cols, f);
    m.at(i, j) = ExactScalar::one(f);
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
    Matrix r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = r.data_[k] + o.data_[k];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    Matrix r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = r.data_[k] - o.data_[k];
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
    Matrix r(rows_, o.cols_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const ExactScalar& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const ExactScalar& b = o.at(k, j);
                if (b.is_zero()) continue;
                r.at(i, j) = r.at(i, j) + a * b;
            }
        }
    return r;
}

Matrix Matrix::scaled(const ExactScalar& c) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = x * c;
    return r;
}

Matrix Matrix::transposed() const {
    Matrix r(cols_, rows_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool Matrix::operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const ExactScalar& x) { return x.is_zero(); });
}

std::vector<int> Matrix::rref() {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
        int pr = -1;
        for (int i = row; i < rows_; ++i)
            if (!at(i, col).is_zero()) { pr = i; break; }
        if (pr < 0) continue;
        if (pr != row)
            for (int j = 0; j < cols_; ++j) std::swap(at(pr, j), at(row, j));
        ExactScalar inv = at(row, col).inverse();
        for (int j = col; j < cols_; ++j) at(row, j) = at(row, j) * inv;
        for (int i = 0; i < rows_; ++i) {
            if (i == row || at(i, col).is_zero()) continue;
            ExactScalar f = at(i, col);
            for (int j = col; j < cols_; ++j) at(i, j) = at(i, j) - f * at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int Matrix::rank() const {
    Matrix tmp = *this;
    return static_cast<int>(tmp.rref().size());
}

Matrix Matrix::inverted() const {
    if (rows_ != cols_) throw std::domain_error("inverse of non-square matrix");
    Matrix aug(rows_, 2 * cols_, field_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_ + i) = ExactScalar::one(field_);
    }
    auto pivots = aug.rref();
    if (static_cast<int>(pivots.size()) != rows_ || pivots.back() >= cols_)
        throw std::domain_error("singular matrix");
    Matrix inv(rows_, cols_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
    return inv;
}

std::vector<ExactScalar> Matrix::vectorized() const { return data_; }

Matrix Matrix::from_vector(const std::vector<ExactScalar>& v, int rows, int cols, const FieldDesc& f) {
    Matrix m(rows, cols, f);
    m.data_ = v;
    return m;
}

// --- SpanBasis -------------------------------------------------------------

std::vector<ExactScalar> SpanBasis::reduce(const Matrix& m) const {
    std::vector<ExactScalar> v = m.vectorized();
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        ExactScalar c = v[pivots_[k]];  // copy: v[pivot] is overwritten below
        if (c.is_zero()) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - c * basis_[k][j];
    }
    return v;
}

bool SpanBasis::insert(const Matrix& m) {
    auto v = reduce(m);
    int piv = -1;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (!v[j].is_zero()) { piv = static_cast<int>(j); break; }
    if (piv < 0) return false;
    ExactScalar inv = v[piv].inverse();
    for (auto& x : v) x = x * inv;
    // back-substitute into existing rows, keep rows sorted by pivot
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        ExactScalar c = basis_[k][piv];  // copy: the pivot entry is overwritten below
        if (c.is_zero()) continue;
        for (std::size_t j = 0; j < v.size(); ++j) basis_[k][j] = basis_[k][j] - c * v[j];
    }
    auto pos = std::upper_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
    basis_.insert(basis_.begin() + pos, std::move(v));
    pivots_.insert(pivots_.begin() + pos, piv);
    return true;
}

bool SpanBasis::contains(const Matrix& m) const {
    auto v = reduce(m);
    return std::all_of(v.begin(), v.end(), [](const ExactScalar& x) { return x.is_zero(); });
}

std::vector<Matrix> SpanBasis::canonical_basis() const {
    std::vector<Matrix> out;
    out.reserve(basis_.size());
    for (const auto& row : basis_) out.push_back(Matrix::from_vector(row, rows_, cols_, field_));
    return out;
}

bool SpanBasis::equals(const SpanBasis& o) const {
    return pivots_ == o.pivots_ && basis_ == o.basis_;
}

std::optional<std::vector<ExactScalar>> solve_linear(const Matrix& a, const std::vector<ExactScalar>& b) {
    const FieldDesc& f = a.field();
    Matrix aug(a.rows(), a.cols() + 1, f);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[static_cast<std::size_t>(i)];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<ExactScalar> x(static_cast<std::size_t>(a.cols()), ExactScalar::zero(f));
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.at(static_cast<int>(k), a.cols());
    return x;
}

// --- integer lattice routines ----------------------------------------------

HnfResult hermite_normal_form(const IntMat& a) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows ? static_cast<int>(a[0].size()) : 0;
    IntMat h = a;
    IntMat u(rows, IntVec(rows, 0));
    for (int i = 0; i < rows; ++i) u[i][i] = 1;

    auto add_row = [&](int dst, int src, const Int& c) {
        for (int j = 0; j < cols; ++j) h[dst][j] += c * h[src][j];
        for (int j = 0; j < rows; ++j) u[dst][j] += c * u[src][j];
    };
    auto swap_rows = [&](int x, int y) {
        std::swap(h[x], h[y]);
        std::swap(u[x], u[y]);
    };
    auto negate_row = [&](int x) {
        for (auto& v : h[x]) v = -v;
        for (auto& v : u[x]) v = -v;
    };

    std::vector<int> pivot_cols;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        // gcd elimination below the working row
        while (true) {
            int best = -1;
            for (int i = row; i < rows; ++i)
                if (h[i][col] != 0 && (best < 0 || abs(h[i][col]) < abs(h[best][col]))) best = i;
            if (best < 0) break;
            swap_rows(row, best);
            if (h[row][col] < 0) negate_row(row);
            bool clean = true;
            for (int i = row + 1; i < rows; ++i) {
                if (h[i][col] == 0) continue;
                Int q = h[i][col] / h[row][col];
                if (q != 0) add_row(i, row, -q);
                if (h[i][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (h[row][col] == 0) continue;
        // reduce entries above the pivot into [0, pivot)
        for (int i = 0; i < row; ++i) {
            Int q = h[i][col] / h[row][col];
            if (h[i][col] - q * h[row][col] < 0) q -= 1;
            if (q != 0) add_row(i, row, -q);
        }
        pivot_cols.push_back(col);
        ++row;
    }
    return {std::move(h), std::move(u), std::move(pivot_cols)};
}

IntMat integer_left_kernel(const IntMat& a) {
    if (a.empty()) return {};
    HnfResult r = hermite_normal_form(a);
    IntMat kernel;
    const int rank = static_cast<int>(r.pivot_cols.size());
    for (std::size_t i = rank; i < r.h.size(); ++i) kernel.push_back(r.u[i]);
    return kernel;
}

}  // namespace spacedmod
