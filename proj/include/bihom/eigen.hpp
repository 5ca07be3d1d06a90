#ifndef BIHOM_EIGEN_HPP
#define BIHOM_EIGEN_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "bihom/error.hpp"
#include "bihom/matrix.hpp"
#include "bihom/rational.hpp"
#include "bihom/subspace.hpp"

namespace bihom {

/// Characteristic polynomial det(x I - A) by Faddeev-LeVerrier.
/// Returned coefficients are ordered c[0] = constant ... c[n] = 1.
inline std::vector<Rat> characteristic_polynomial(const Matrix& a)
{
    if (!a.square())
        throw Error(ErrorKind::precondition, "characteristic polynomial of non-square matrix");
    const std::size_t n = a.rows();
    std::vector<Rat> coeff(n + 1, Rat(0));
    coeff[n] = 1;
    Matrix m = Matrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m;
        Rat c = -m.trace() / Rat(static_cast<long>(k));
        coeff[n - k] = c;
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) += c;
    }
    return coeff;
}

namespace detail {

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

/// Pollard-Brent rho; input odd composite > 1 with no small factors.
inline Int pollard_rho(const Int& n)
{
    if (n % 2 == 0)
        return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xb1f0);
    while (true) {
        Int y = rng.get_z_range(n - 3) + 2;
        Int c = rng.get_z_range(n - 2) + 1;
        Int x = y, d(1), q(1), ys(0);
        const unsigned long m = 128;
        unsigned long r = 1;
        while (d == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i)
                y = (y * y + c) % n;
            unsigned long k = 0;
            while (k < r && d == 1) {
                ys = y;
                const unsigned long lim = std::min(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * detail::abs_int(x - y) % n;
                }
                mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = (ys * ys + c) % n;
                Int diff = detail::abs_int(x - ys);
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (d != n)
            return d;
    }
}

inline void factor_into(Int n, std::map<Int, unsigned>& factors)
{
    if (n <= 1)
        return;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++factors[Int(p)];
            n /= static_cast<long>(p);
        }
    }
    unsigned long p = 17;
    while (n > 1 && Int(p) * Int(p) <= n && p < 100000) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++factors[Int(p)];
            n /= static_cast<long>(p);
        }
        p += 2;
    }
    if (n == 1)
        return;
    if (Int(p) * Int(p) > n || mpz_probab_prime_p(n.get_mpz_t(), 40)) {
        ++factors[n];
        return;
    }
    Int d = pollard_rho(n);
    factor_into(d, factors);
    factor_into(n / d, factors);
}

inline std::vector<Int> divisors(const Int& n)
{
    std::map<Int, unsigned> factors;
    factor_into(abs_int(n), factors);
    std::vector<Int> divs{Int(1)};
    for (const auto& [p, e] : factors) {
        const std::size_t old = divs.size();
        if (old * (e + 1) > (1u << 20))
            throw Error(ErrorKind::precondition, "rational root search: divisor set too large");
        Int pk(1);
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < old; ++i)
                divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

inline Rat horner(const std::vector<Rat>& coeff, const Rat& x)
{
    Rat acc(0);
    for (std::size_t i = coeff.size(); i-- > 0;)
        acc = acc * x + coeff[i];
    return acc;
}

}  // namespace detail

/// All rational roots of the polynomial (coefficients constant-first),
/// via integer scaling and the rational root theorem: complete over the
/// rationals, no numerics.
inline std::vector<Rat> rational_roots(const std::vector<Rat>& coeff)
{
    std::size_t deg = coeff.size();
    while (deg > 0 && coeff[deg - 1] == 0)
        --deg;
    if (deg == 0)
        throw Error(ErrorKind::precondition, "rational roots of the zero polynomial");

    std::set<Rat> roots;
    std::size_t low = 0;
    while (low < deg - 1 && coeff[low] == 0)
        ++low;
    if (low > 0)
        roots.insert(Rat(0));

    if (deg - 1 > low) {
        // Scale coeff[low .. deg-1] to a primitive integer polynomial.
        Int scale(1);
        for (std::size_t i = low; i < deg; ++i)
            mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), coeff[i].get_den().get_mpz_t());
        std::vector<Int> ic;
        ic.reserve(deg - low);
        for (std::size_t i = low; i < deg; ++i) {
            Rat scaled_value = coeff[i] * Rat(scale);
            scaled_value.canonicalize();
            ic.push_back(scaled_value.get_num());
        }
        Int content(0);
        for (const auto& c : ic)
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
        for (auto& c : ic)
            c /= content;

        const auto ps = detail::divisors(ic.front());
        const auto qs = detail::divisors(ic.back());
        std::vector<Rat> scaled_coeff(ic.size());
        for (std::size_t i = 0; i < ic.size(); ++i)
            scaled_coeff[i] = Rat(ic[i]);
        std::set<Rat> candidates;
        for (const auto& p : ps)
            for (const auto& q : qs) {
                Rat c(p, q);
                c.canonicalize();
                candidates.insert(c);
                candidates.insert(Rat(-c));
            }
        for (const auto& c : candidates)
            if (detail::horner(scaled_coeff, c) == 0)
                roots.insert(c);
    }
    return std::vector<Rat>(roots.begin(), roots.end());
}

struct EigenPair {
    Rat value;
    Subspace space;  // exact eigenspace inside restrict_to
};

struct EigenDecomposition {
    std::vector<EigenPair> pairs;   // sorted by eigenvalue
    std::size_t uncaptured_dim = 0; // dim not covered by rational eigenspaces
};

/// Restriction of m to an invariant subspace, in that subspace's RREF
/// coordinates. Throws when the subspace is not invariant.
inline Matrix restrict_to_subspace(const Matrix& m, const Subspace& space)
{
    const std::size_t k = space.dim();
    Matrix r(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        const auto coords = space.coordinates(m.apply(space.basis()[j]));
        if (!coords)
            throw Error(ErrorKind::precondition, "subspace is not invariant under the operator");
        for (std::size_t i = 0; i < k; ++i)
            r(i, j) = (*coords)[i];
    }
    return r;
}

inline bool is_invariant(const Matrix& m, const Subspace& space)
{
    for (const auto& v : space.basis())
        if (!space.contains(m.apply(v)))
            return false;
    return true;
}

/// Rational eigenpairs of m restricted to an invariant subspace. Every
/// eigenvalue is a rational root of the restricted characteristic
/// polynomial; eigenspaces are exact kernels. uncaptured_dim reports the
/// part of restrict_to that no rational eigenspace reaches (irrational or
/// defective spectrum).
inline EigenDecomposition rational_eigenpairs(const Matrix& m, const Subspace& restrict_to)
{
    if (!m.square())
        throw Error(ErrorKind::precondition, "eigenpairs of a non-square matrix");
    if (m.rows() != restrict_to.ambient_dim())
        throw Error(ErrorKind::shape, "operator/subspace ambient mismatch");

    EigenDecomposition result;
    if (restrict_to.is_zero())
        return result;

    const Matrix r = restrict_to_subspace(m, restrict_to);
    const auto roots = rational_roots(characteristic_polynomial(r));

    std::size_t captured = 0;
    for (const auto& lambda : roots) {
        Matrix shifted = r;
        for (std::size_t i = 0; i < shifted.rows(); ++i)
            shifted(i, i) -= lambda;
        const Subspace coord_kernel = kernel(shifted);
        if (coord_kernel.is_zero())
            continue;
        std::vector<Vec> vectors;
        vectors.reserve(coord_kernel.dim());
        for (const auto& c : coord_kernel.basis())
            vectors.push_back(restrict_to.from_coordinates(c));
        Subspace eigenspace = Subspace::span(restrict_to.ambient_dim(), std::move(vectors));
        captured += eigenspace.dim();
        result.pairs.push_back({lambda, std::move(eigenspace)});
    }
    result.uncaptured_dim = restrict_to.dim() - captured;
    return result;
}

}  // namespace bihom

#endif
