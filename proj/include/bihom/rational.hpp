#ifndef BIHOM_RATIONAL_HPP
#define BIHOM_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bihom/error.hpp"

namespace bihom {

/// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
/// positive denominator) under arithmetic; every value entering the system
/// goes through parse_rational or an integer constructor, so canonicity is
/// an invariant everywhere.
using Rat = mpq_class;
using Int = mpz_class;

using Vec = std::vector<Rat>;

inline const Rat& rat_zero()
{
    static const Rat z(0);
    return z;
}

inline const Rat& rat_one()
{
    static const Rat o(1);
    return o;
}

/// Parses "p" or "p/q" with unbounded integers. Returns nullopt on syntax
/// errors or a zero denominator; never throws, never divides by zero.
inline std::optional<Rat> parse_rational(std::string_view text)
{
    auto is_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+'))
            s.remove_prefix(1);
        if (s.empty())
            return false;
        for (char c : s)
            if (c < '0' || c > '9')
                return false;
        return true;
    };

    const auto slash = text.find('/');
    std::string_view num_text = text.substr(0, slash);
    if (!is_int(num_text))
        return std::nullopt;
    Int num(std::string(num_text), 10);

    Int den(1);
    if (slash != std::string_view::npos) {
        std::string_view den_text = text.substr(slash + 1);
        if (!is_int(den_text))
            return std::nullopt;
        den = Int(std::string(den_text), 10);
        if (den == 0)
            return std::nullopt;
    }

    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Serializes as "p" (denominator 1) or "p/q"; the inverse of parse_rational.
inline std::string to_string(const Rat& r)
{
    return r.get_str();
}

inline Rat parse_rational_or_throw(std::string_view text, std::string_view where)
{
    auto r = parse_rational(text);
    if (!r)
        throw Error(ErrorKind::parse, std::string("malformed scalar \"") + std::string(text) +
                                          "\" at " + std::string(where));
    return *r;
}

inline bool is_zero(const Vec& v)
{
    for (const auto& x : v)
        if (x != 0)
            return false;
    return true;
}

inline Vec zero_vec(std::size_t n)
{
    return Vec(n, Rat(0));
}

inline Vec unit_vec(std::size_t n, std::size_t i)
{
    Vec v(n, Rat(0));
    v[i] = 1;
    return v;
}

inline Vec& add_scaled(Vec& dst, const Rat& c, const Vec& src)
{
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] += c * src[i];
    return dst;
}

inline Vec negated(Vec v)
{
    for (auto& x : v)
        x = -x;
    return v;
}

inline Vec scaled(Vec v, const Rat& c)
{
    for (auto& x : v)
        x *= c;
    return v;
}

inline Vec sum(Vec a, const Vec& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    return a;
}

inline Vec difference(Vec a, const Vec& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] -= b[i];
    return a;
}

/// Strict total order on value vectors; the tie-breaking order used for all
/// deterministic outputs (roots, chains, class representatives).
inline int compare(const Vec& a, const Vec& b)
{
    if (a.size() != b.size())
        return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int c = cmp(a[i], b[i]);
        if (c != 0)
            return c;
    }
    return 0;
}

struct VecLess {
    bool operator()(const Vec& a, const Vec& b) const { return compare(a, b) < 0; }
};

}  // namespace bihom

#endif
