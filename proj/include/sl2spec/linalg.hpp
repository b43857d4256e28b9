#ifndef SL2SPEC_LINALG_HPP
#define SL2SPEC_LINALG_HPP

#include <optional>
#include <vector>

#include "sl2spec/errors.hpp"
#include "sl2spec/rational.hpp"

namespace sl2spec {

// Dense rational matrix, row-major. Sizes here are tiny (<= 34).
class MatQ {
  public:
    MatQ() : rows_(0), cols_(0) {}
    MatQ(size_t r, size_t c) : rows_(r), cols_(c), a_(r * c) {}
    static MatQ identity(size_t n) {
        MatQ m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Rat& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    MatQ operator*(const MatQ& o) const {
        if (cols_ != o.rows_) throw Error("matrix shape mismatch");
        MatQ r(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const Rat& v = (*this)(i, k);
                if (v == 0) continue;
                for (size_t j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
            }
        return r;
    }

    std::vector<Rat> apply(const std::vector<Rat>& v) const {
        if (v.size() != cols_) throw Error("matrix/vector shape mismatch");
        std::vector<Rat> r(rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                if (v[j] != 0) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    // In-place Gauss-Jordan; returns rank and records pivot columns.
    size_t rref(std::vector<size_t>* pivots = nullptr) {
        size_t rank = 0;
        for (size_t col = 0; col < cols_ && rank < rows_; ++col) {
            size_t piv = rank;
            while (piv < rows_ && (*this)(piv, col) == 0) ++piv;
            if (piv == rows_) continue;
            if (piv != rank)
                for (size_t j = 0; j < cols_; ++j)
                    std::swap((*this)(piv, j), (*this)(rank, j));
            Rat inv = Rat(1) / (*this)(rank, col);
            for (size_t j = 0; j < cols_; ++j) (*this)(rank, j) *= inv;
            for (size_t i = 0; i < rows_; ++i) {
                if (i == rank) continue;
                Rat f = (*this)(i, col);
                if (f == 0) continue;
                for (size_t j = 0; j < cols_; ++j)
                    (*this)(i, j) -= f * (*this)(rank, j);
            }
            if (pivots) pivots->push_back(col);
            ++rank;
        }
        return rank;
    }

    size_t rank() const {
        MatQ c = *this;
        return c.rref();
    }

    // Kernel basis (column vectors of length cols()).
    std::vector<std::vector<Rat>> kernel() const {
        MatQ c = *this;
        std::vector<size_t> pivots;
        c.rref(&pivots);
        std::vector<bool> is_pivot(cols_, false);
        for (size_t p : pivots) is_pivot[p] = true;
        std::vector<std::vector<Rat>> basis;
        for (size_t free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<Rat> v(cols_);
            v[free] = 1;
            for (size_t r = 0; r < pivots.size(); ++r)
                v[pivots[r]] = -c(r, free);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Solve A x = b; nullopt if inconsistent. A may be rectangular; returns
    // one particular solution.
    std::optional<std::vector<Rat>> solve(const std::vector<Rat>& b) const {
        if (b.size() != rows_) throw Error("solve: shape mismatch");
        MatQ aug(rows_, cols_ + 1);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_) = b[i];
        }
        std::vector<size_t> pivots;
        aug.rref(&pivots);
        for (size_t r = 0; r < pivots.size(); ++r)
            if (pivots[r] == cols_) return std::nullopt; // pivot in RHS column
        std::vector<Rat> x(cols_);
        for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, cols_);
        return x;
    }

    std::optional<MatQ> inverse() const {
        if (rows_ != cols_) throw Error("inverse of non-square matrix");
        MatQ aug(rows_, 2 * cols_);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_ + i) = 1;
        }
        if (aug.rref() != rows_) return std::nullopt;
        MatQ inv(rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
        return inv;
    }

  private:
    size_t rows_, cols_;
    std::vector<Rat> a_;
};

// Gauss-Jordan elimination on a matrix over Z: exact determinant via Bareiss.
Int bareiss_det(std::vector<std::vector<Int>> m);

} // namespace sl2spec

#endif
