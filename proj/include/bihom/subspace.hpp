#ifndef BIHOM_SUBSPACE_HPP
#define BIHOM_SUBSPACE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "bihom/error.hpp"
#include "bihom/matrix.hpp"
#include "bihom/rational.hpp"

namespace bihom {

/// A subspace held in reduced row-echelon form. RREF is the canonical
/// representative of a span, so equality of subspaces is plain comparison
/// of bases and every operation returning a Subspace is deterministic.
class Subspace {
public:
    Subspace() = default;

    explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}

    /// Span of arbitrary generators, reduced to RREF. Zero vectors drop out.
    static Subspace span(std::size_t ambient_dim, std::vector<Vec> generators)
    {
        Subspace s(ambient_dim);
        for (const auto& g : generators)
            if (g.size() != ambient_dim)
                throw Error(ErrorKind::shape, "generator dimension mismatch");
        s.basis_ = rref(std::move(generators), ambient_dim);
        return s;
    }

    static Subspace zero(std::size_t ambient_dim) { return Subspace(ambient_dim); }

    static Subspace full(std::size_t ambient_dim)
    {
        Subspace s(ambient_dim);
        for (std::size_t i = 0; i < ambient_dim; ++i)
            s.basis_.push_back(unit_vec(ambient_dim, i));
        return s;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    bool is_zero() const { return basis_.empty(); }
    bool is_full() const { return basis_.size() == ambient_; }
    const std::vector<Vec>& basis() const { return basis_; }

    bool operator==(const Subspace& o) const
    {
        return ambient_ == o.ambient_ && basis_ == o.basis_;
    }

    /// Residue of v after eliminating against the RREF basis; zero iff v
    /// lies in the subspace.
    Vec reduce(Vec v) const
    {
        if (v.size() != ambient_)
            throw Error(ErrorKind::shape, "vector dimension mismatch");
        for (const auto& row : basis_) {
            const std::size_t p = pivot_of(row);
            if (v[p] != 0)
                add_scaled(v, -v[p], row);
        }
        return v;
    }

    bool contains(const Vec& v) const { return bihom::is_zero(reduce(v)); }

    bool contains(const Subspace& other) const
    {
        if (other.ambient_ != ambient_)
            throw Error(ErrorKind::shape, "ambient dimension mismatch");
        for (const auto& v : other.basis_)
            if (!contains(v))
                return false;
        return true;
    }

    /// Coordinates of v in the RREF basis; nullopt when v is outside.
    /// Coordinate i is just v[pivot_i] thanks to the reduced form.
    std::optional<Vec> coordinates(const Vec& v) const
    {
        Vec coords(basis_.size(), Rat(0));
        Vec rest = v;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const std::size_t p = pivot_of(basis_[i]);
            coords[i] = rest[p];
            if (rest[p] != 0)
                add_scaled(rest, -rest[p], basis_[i]);
        }
        if (!bihom::is_zero(rest))
            return std::nullopt;
        return coords;
    }

    Vec from_coordinates(const Vec& coords) const
    {
        Vec v = zero_vec(ambient_);
        for (std::size_t i = 0; i < basis_.size(); ++i)
            add_scaled(v, coords[i], basis_[i]);
        return v;
    }

    friend Subspace sum(const Subspace& a, const Subspace& b)
    {
        check_same_ambient(a, b);
        std::vector<Vec> gens = a.basis_;
        gens.insert(gens.end(), b.basis_.begin(), b.basis_.end());
        return span(a.ambient_, std::move(gens));
    }

    /// Zassenhaus: rows [a|a] and [b|0]; after elimination the right halves
    /// of rows with vanishing left half span the intersection.
    friend Subspace intersect(const Subspace& a, const Subspace& b)
    {
        check_same_ambient(a, b);
        const std::size_t n = a.ambient_;
        std::vector<Vec> rows;
        rows.reserve(a.dim() + b.dim());
        for (const auto& v : a.basis_) {
            Vec r(2 * n, Rat(0));
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = v[i];
                r[n + i] = v[i];
            }
            rows.push_back(std::move(r));
        }
        for (const auto& v : b.basis_) {
            Vec r(2 * n, Rat(0));
            for (std::size_t i = 0; i < n; ++i)
                r[i] = v[i];
            rows.push_back(std::move(r));
        }
        rows = rref(std::move(rows), 2 * n);
        std::vector<Vec> inter;
        for (const auto& r : rows) {
            bool left_zero = true;
            for (std::size_t i = 0; i < n && left_zero; ++i)
                left_zero = r[i] == 0;
            if (left_zero)
                inter.push_back(Vec(r.begin() + static_cast<std::ptrdiff_t>(n), r.end()));
        }
        return span(n, std::move(inter));
    }

    /// Image under a linear map.
    Subspace map_through(const Matrix& m) const
    {
        std::vector<Vec> imgs;
        imgs.reserve(basis_.size());
        for (const auto& v : basis_)
            imgs.push_back(m.apply(v));
        return span(m.rows(), std::move(imgs));
    }

    /// Pivot-canonical complement of this inside enclosing: greedily extends
    /// this subspace by enclosing's RREF basis vectors.
    Subspace complement_in(const Subspace& enclosing) const
    {
        check_same_ambient(*this, enclosing);
        if (!enclosing.contains(*this))
            throw Error(ErrorKind::precondition, "complement_in: subspace not contained");
        Subspace grown = *this;
        std::vector<Vec> picked;
        for (const auto& v : enclosing.basis_) {
            if (grown.contains(v))
                continue;
            picked.push_back(v);
            grown = sum(grown, span(ambient_, {v}));
        }
        return span(ambient_, std::move(picked));
    }

    static std::size_t pivot_of(const Vec& row)
    {
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0)
                return j;
        throw Error(ErrorKind::shape, "zero row has no pivot");
    }

    /// Reduced row echelon form: pivots 1, strictly increasing, pivot
    /// columns cleared above and below. Returns nonzero rows only.
    static std::vector<Vec> rref(std::vector<Vec> rows, std::size_t width)
    {
        std::size_t rank = 0;
        for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
            std::size_t pivot = rank;
            while (pivot < rows.size() && rows[pivot][col] == 0)
                ++pivot;
            if (pivot == rows.size())
                continue;
            std::swap(rows[rank], rows[pivot]);
            const Rat d = rows[rank][col];
            for (auto& x : rows[rank])
                x /= d;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == rank || rows[i][col] == 0)
                    continue;
                add_scaled(rows[i], -rows[i][col], rows[rank]);
            }
            ++rank;
        }
        rows.resize(rank);
        return rows;
    }

private:
    static void check_same_ambient(const Subspace& a, const Subspace& b)
    {
        if (a.ambient_ != b.ambient_)
            throw Error(ErrorKind::shape, "ambient dimension mismatch");
    }

    std::size_t ambient_ = 0;
    std::vector<Vec> basis_;
};

/// Convenience wrapper matching the span-of-list entry point.
inline Subspace echelonize(std::size_t ambient_dim, std::vector<Vec> vectors)
{
    return Subspace::span(ambient_dim, std::move(vectors));
}

/// Exact nullspace of m, from the RREF of its rows. Free columns yield the
/// standard kernel basis, re-echelonized for canonicity.
inline Subspace kernel(const Matrix& m)
{
    const std::size_t n = m.cols();
    std::vector<Vec> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        rows.push_back(m.row(i));
    rows = Subspace::rref(std::move(rows), n);

    std::vector<std::size_t> pivot_cols;
    pivot_cols.reserve(rows.size());
    for (const auto& r : rows)
        pivot_cols.push_back(Subspace::pivot_of(r));

    std::vector<Vec> basis;
    std::size_t next_pivot = 0;
    for (std::size_t col = 0; col < n; ++col) {
        if (next_pivot < pivot_cols.size() && pivot_cols[next_pivot] == col) {
            ++next_pivot;
            continue;
        }
        Vec v = zero_vec(n);
        v[col] = 1;
        for (std::size_t i = 0; i < rows.size(); ++i)
            v[pivot_cols[i]] = -rows[i][col];
        basis.push_back(std::move(v));
    }
    return Subspace::span(n, std::move(basis));
}

/// Solution set of the stacked homogeneous system {m v = 0 for each m}.
inline Subspace joint_kernel(const std::vector<Matrix>& mats, std::size_t ambient_dim)
{
    Subspace result = Subspace::full(ambient_dim);
    for (const auto& m : mats)
        result = intersect(result, kernel(m));
    return result;
}

}  // namespace bihom

#endif
