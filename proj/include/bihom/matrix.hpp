#ifndef BIHOM_MATRIX_HPP
#define BIHOM_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "bihom/error.hpp"
#include "bihom/rational.hpp"

namespace bihom {

/// Dense matrix over the rationals. Dimensions here stay small (<= 32), so
/// no sparsity or pivoting heuristics; everything is exact.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rat(0))
    {
    }

    Matrix(std::initializer_list<std::initializer_list<Rat>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_)
                throw Error(ErrorKind::shape, "ragged matrix initializer");
            for (const auto& x : row)
                data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    /// phi(b_j) = sum_i m(i,j) b_i: columns are images of basis vectors.
    static Matrix from_columns(const std::vector<Vec>& cols)
    {
        if (cols.empty())
            return Matrix();
        Matrix m(cols.front().size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != m.rows_)
                throw Error(ErrorKind::shape, "ragged column list");
            for (std::size_t i = 0; i < m.rows_; ++i)
                m(i, j) = cols[j][i];
        }
        return m;
    }

    static Matrix diagonal(const Vec& d)
    {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec column(std::size_t j) const
    {
        Vec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            v[i] = (*this)(i, j);
        return v;
    }

    Vec row(std::size_t i) const
    {
        Vec v(cols_);
        for (std::size_t j = 0; j < cols_; ++j)
            v[j] = (*this)(i, j);
        return v;
    }

    Vec apply(const Vec& x) const
    {
        if (x.size() != cols_)
            throw Error(ErrorKind::shape, "matrix/vector size mismatch");
        Vec y(rows_, Rat(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            Rat acc(0);
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0)
                    acc += (*this)(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }

    /// Functional pullback: values of (f . this) given values of f, i.e.
    /// transpose-apply.
    Vec apply_transposed(const Vec& f) const
    {
        if (f.size() != rows_)
            throw Error(ErrorKind::shape, "matrix/functional size mismatch");
        Vec g(cols_, Rat(0));
        for (std::size_t j = 0; j < cols_; ++j) {
            Rat acc(0);
            for (std::size_t i = 0; i < rows_; ++i)
                if ((*this)(i, j) != 0)
                    acc += (*this)(i, j) * f[i];
            g[j] = acc;
        }
        return g;
    }

    Matrix transposed() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw Error(ErrorKind::shape, "matrix product size mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Rat& aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (b(k, j) != 0)
                        c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw Error(ErrorKind::shape, "matrix sum size mismatch");
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i)
            c.data_[i] += b.data_[i];
        return c;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw Error(ErrorKind::shape, "matrix difference size mismatch");
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i)
            c.data_[i] -= b.data_[i];
        return c;
    }

    friend Matrix operator*(const Rat& c, Matrix m)
    {
        for (auto& x : m.data_)
            x *= c;
        return m;
    }

    bool operator==(const Matrix& o) const
    {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    bool is_identity() const
    {
        if (!square())
            return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != (i == j ? 1 : 0))
                    return false;
        return true;
    }

    bool is_zero() const
    {
        for (const auto& x : data_)
            if (x != 0)
                return false;
        return true;
    }

    Rat trace() const
    {
        Rat t(0);
        for (std::size_t i = 0; i < rows_; ++i)
            t += (*this)(i, i);
        return t;
    }

    /// Gauss-Jordan inverse; nullopt when singular.
    std::optional<Matrix> inverse() const
    {
        if (!square())
            return std::nullopt;
        const std::size_t n = rows_;
        Matrix work = *this;
        Matrix inv = identity(n);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = col;
            while (pivot < n && work(pivot, col) == 0)
                ++pivot;
            if (pivot == n)
                return std::nullopt;
            if (pivot != col)
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(work(pivot, j), work(col, j));
                    std::swap(inv(pivot, j), inv(col, j));
                }
            const Rat d = work(col, col);
            for (std::size_t j = 0; j < n; ++j) {
                work(col, j) /= d;
                inv(col, j) /= d;
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (i == col || work(i, col) == 0)
                    continue;
                const Rat f = work(i, col);
                for (std::size_t j = 0; j < n; ++j) {
                    work(i, j) -= f * work(col, j);
                    inv(i, j) -= f * inv(col, j);
                }
            }
        }
        return inv;
    }

    /// Integer power; negative exponents go through the inverse.
    Matrix power(long e) const
    {
        if (!square())
            throw Error(ErrorKind::precondition, "power of a non-square matrix");
        Matrix base = *this;
        if (e < 0) {
            auto inv = inverse();
            if (!inv)
                throw Error(ErrorKind::precondition, "negative power of a singular matrix");
            base = *inv;
            e = -e;
        }
        Matrix acc = identity(rows_);
        while (e > 0) {
            if (e & 1)
                acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rat> data_;
};

}  // namespace bihom

#endif
