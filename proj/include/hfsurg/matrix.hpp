/**
 * Dense integer matrices and the Smith normal form.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hfsurg/numeric.hpp"

namespace hfsurg {

template <typename T>
class DenseMatrix
{
    public:
        DenseMatrix() = default;

        DenseMatrix(std::size_t rows, std::size_t cols)
            : rows_(rows), cols_(cols), data_(rows * cols, T(0))
        {
        }

        static DenseMatrix identity(std::size_t n)
        {
            DenseMatrix m(n, n);
            for (std::size_t k = 0; k < n; ++k)
                m(k, k) = T(1);
            return m;
        }

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }
        bool empty() const { return rows_ == 0 || cols_ == 0; }

        T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
        const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

        bool is_zero() const
        {
            return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
        }

        DenseMatrix operator*(const DenseMatrix& other) const
        {
            if (cols_ != other.rows_)
                throw std::invalid_argument("DenseMatrix: dimension mismatch in product");
            DenseMatrix out(rows_, other.cols_);
            for (std::size_t i = 0; i < rows_; ++i) {
                for (std::size_t k = 0; k < cols_; ++k) {
                    const T& a = (*this)(i, k);
                    if (a == 0)
                        continue;
                    for (std::size_t j = 0; j < other.cols_; ++j)
                        out(i, j) += a * other(k, j);
                }
            }
            return out;
        }

        std::vector<T> operator*(const std::vector<T>& x) const
        {
            if (cols_ != x.size())
                throw std::invalid_argument("DenseMatrix: dimension mismatch in matrix-vector product");
            std::vector<T> out(rows_, T(0));
            for (std::size_t i = 0; i < rows_; ++i)
                for (std::size_t k = 0; k < cols_; ++k)
                    if (x[k] != 0)
                        out[i] += (*this)(i, k) * x[k];
            return out;
        }

        bool operator==(const DenseMatrix& other) const
        {
            return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
        }

        // Elementary operations used by the Smith reduction.
        void swap_rows(std::size_t a, std::size_t b)
        {
            if (a == b)
                return;
            for (std::size_t j = 0; j < cols_; ++j)
                std::swap((*this)(a, j), (*this)(b, j));
        }

        void swap_cols(std::size_t a, std::size_t b)
        {
            if (a == b)
                return;
            for (std::size_t i = 0; i < rows_; ++i)
                std::swap((*this)(i, a), (*this)(i, b));
        }

        /// row[target] += factor * row[source]
        void add_row(std::size_t target, std::size_t source, const T& factor)
        {
            if (factor == 0)
                return;
            for (std::size_t j = 0; j < cols_; ++j) {
                const T& s = (*this)(source, j);
                if (s != 0)
                    (*this)(target, j) += factor * s;
            }
        }

        /// col[target] += factor * col[source]
        void add_col(std::size_t target, std::size_t source, const T& factor)
        {
            if (factor == 0)
                return;
            for (std::size_t i = 0; i < rows_; ++i) {
                const T& s = (*this)(i, source);
                if (s != 0)
                    (*this)(i, target) += factor * s;
            }
        }

        void negate_row(std::size_t r)
        {
            for (std::size_t j = 0; j < cols_; ++j)
                (*this)(r, j) = -(*this)(r, j);
        }

        void negate_col(std::size_t c)
        {
            for (std::size_t i = 0; i < rows_; ++i)
                (*this)(i, c) = -(*this)(i, c);
        }

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<T> data_;
};

using IntMatrix = DenseMatrix<Integer>;

/**
 * Result of a Smith reduction: left * input * right == diagonal, where left
 * and right are unimodular, and the diagonal entries d_0 | d_1 | ... are
 * positive up to index rank and zero afterwards.
 */
struct SmithForm
{
    IntMatrix left;
    IntMatrix left_inverse;
    IntMatrix diagonal;
    IntMatrix right;
    IntMatrix right_inverse;
    std::size_t rank = 0;
    std::vector<Integer> invariant_factors;   // the first `rank` diagonal entries
};

namespace detail {

// Tracks the transforms alongside the working matrix so that every elementary
// move keeps left * input * right == work and the stored inverses exact.
class SmithReducer
{
    public:
        explicit SmithReducer(const IntMatrix& input)
            : work(input),
              left(IntMatrix::identity(input.rows())),
              left_inverse(IntMatrix::identity(input.rows())),
              right(IntMatrix::identity(input.cols())),
              right_inverse(IntMatrix::identity(input.cols()))
        {
        }

        void swap_rows(std::size_t a, std::size_t b)
        {
            work.swap_rows(a, b);
            left.swap_rows(a, b);
            left_inverse.swap_cols(a, b);
        }

        void swap_cols(std::size_t a, std::size_t b)
        {
            work.swap_cols(a, b);
            right.swap_cols(a, b);
            right_inverse.swap_rows(a, b);
        }

        void add_row(std::size_t target, std::size_t source, const Integer& factor)
        {
            work.add_row(target, source, factor);
            left.add_row(target, source, factor);
            left_inverse.add_col(source, target, -factor);
        }

        void add_col(std::size_t target, std::size_t source, const Integer& factor)
        {
            work.add_col(target, source, factor);
            right.add_col(target, source, factor);
            right_inverse.add_row(source, target, -factor);
        }

        void negate_row(std::size_t r)
        {
            work.negate_row(r);
            left.negate_row(r);
            left_inverse.negate_col(r);
        }

        SmithForm run()
        {
            const std::size_t m = work.rows();
            const std::size_t n = work.cols();
            std::size_t t = 0;
            while (t < m && t < n) {
                if (!move_smallest_to(t))
                    break;
                while (true) {
                    bool clean = true;
                    const Integer pivot = work(t, t);
                    for (std::size_t i = t + 1; i < m; ++i) {
                        if (work(i, t) == 0)
                            continue;
                        Integer quot = work(i, t) / pivot;
                        add_row(i, t, -quot);
                        if (work(i, t) != 0)
                            clean = false;
                    }
                    for (std::size_t j = t + 1; j < n; ++j) {
                        if (work(t, j) == 0)
                            continue;
                        Integer quot = work(t, j) / pivot;
                        add_col(j, t, -quot);
                        if (work(t, j) != 0)
                            clean = false;
                    }
                    if (!clean) {
                        move_smallest_in_cross(t);
                        continue;
                    }
                    // Row and column are clear; enforce divisibility of the rest.
                    if (abs(pivot) != 1) {
                        std::size_t bad_row = m;
                        for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
                            for (std::size_t j = t + 1; j < n; ++j)
                                if (work(i, j) % pivot != 0) {
                                    bad_row = i;
                                    break;
                                }
                        if (bad_row != m) {
                            add_row(t, bad_row, Integer(1));
                            continue;
                        }
                    }
                    break;
                }
                if (work(t, t) < 0)
                    negate_row(t);
                ++t;
            }

            SmithForm out;
            out.rank = t;
            for (std::size_t k = 0; k < t; ++k)
                out.invariant_factors.push_back(work(k, k));
            out.diagonal = std::move(work);
            out.left = std::move(left);
            out.left_inverse = std::move(left_inverse);
            out.right = std::move(right);
            out.right_inverse = std::move(right_inverse);
            return out;
        }

    private:
        IntMatrix work;
        IntMatrix left;
        IntMatrix left_inverse;
        IntMatrix right;
        IntMatrix right_inverse;

        // Smallest nonzero magnitude in the trailing block, swapped to (t, t).
        // A unit ends the scan immediately.
        bool move_smallest_to(std::size_t t)
        {
            std::size_t best_i = 0, best_j = 0;
            Integer best = 0;
            for (std::size_t i = t; i < work.rows(); ++i) {
                for (std::size_t j = t; j < work.cols(); ++j) {
                    const Integer& x = work(i, j);
                    if (x == 0)
                        continue;
                    Integer mag = abs(x);
                    if (best == 0 || mag < best) {
                        best = mag;
                        best_i = i;
                        best_j = j;
                        if (best == 1)
                            goto found;
                    }
                }
            }
        found:
            if (best == 0)
                return false;
            swap_rows(t, best_i);
            swap_cols(t, best_j);
            return true;
        }

        void move_smallest_in_cross(std::size_t t)
        {
            std::size_t best_i = t, best_j = t;
            Integer best = abs(work(t, t));
            for (std::size_t i = t + 1; i < work.rows(); ++i) {
                const Integer& x = work(i, t);
                if (x != 0 && (best == 0 || abs(x) < best)) {
                    best = abs(x);
                    best_i = i;
                    best_j = t;
                }
            }
            for (std::size_t j = t + 1; j < work.cols(); ++j) {
                const Integer& x = work(t, j);
                if (x != 0 && (best == 0 || abs(x) < best)) {
                    best = abs(x);
                    best_i = t;
                    best_j = j;
                }
            }
            swap_rows(t, best_i);
            swap_cols(t, best_j);
        }
};

}   // namespace detail

/**
 * Smith normal form by gcd-pivot elimination, pivoting on the entry of
 * smallest nonzero magnitude.  All arithmetic is exact.  Defining
 * HFSURG_VERIFY_SMITH re-checks every result.
 */
inline SmithForm smith_normal_form(const IntMatrix& matrix)
{
    SmithForm form = detail::SmithReducer(matrix).run();
#ifdef HFSURG_VERIFY_SMITH
    if (form.left * matrix * form.right != form.diagonal ||
        form.left * form.left_inverse != IntMatrix::identity(matrix.rows()) ||
        form.right * form.right_inverse != IntMatrix::identity(matrix.cols()))
        throw std::logic_error("smith_normal_form: transforms fail verification");
#endif
    return form;
}

/// Rank over the integers (equivalently over the rationals).
inline std::size_t integer_rank(const IntMatrix& matrix)
{
    if (matrix.empty() || matrix.is_zero())
        return 0;
    return smith_normal_form(matrix).rank;
}

/// Determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return Integer(1);
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap_with = k + 1;
            while (swap_with < n && m(swap_with, k) == 0)
                ++swap_with;
            if (swap_with == n)
                return Integer(0);
            m.swap_rows(k, swap_with);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

/// True iff the map is onto Z^rows: full row rank with all invariant factors 1.
inline bool is_surjective(const IntMatrix& matrix)
{
    if (matrix.rows() == 0)
        return true;
    if (matrix.cols() == 0)
        return false;
    SmithForm snf = smith_normal_form(matrix);
    if (snf.rank != matrix.rows())
        return false;
    return std::all_of(snf.invariant_factors.begin(), snf.invariant_factors.end(),
                       [](const Integer& d) { return d == 1; });
}

inline bool is_isomorphism(const IntMatrix& matrix)
{
    return matrix.rows() == matrix.cols() && is_surjective(matrix);
}

}   // namespace hfsurg
