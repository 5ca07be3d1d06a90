#ifndef BIHOM_ALGEBRA_HPP
#define BIHOM_ALGEBRA_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bihom/error.hpp"
#include "bihom/matrix.hpp"
#include "bihom/rational.hpp"
#include "bihom/subspace.hpp"

namespace bihom {

/// Z/2 grading tag. Addition is xor.
enum class Parity : unsigned char { even = 0, odd = 1 };

inline Parity operator+(Parity a, Parity b)
{
    return static_cast<Parity>(static_cast<unsigned>(a) ^ static_cast<unsigned>(b));
}

inline int sign_factor(Parity a, Parity b)
{
    return (a == Parity::odd && b == Parity::odd) ? -1 : 1;
}

inline const char* name_of(Parity p) { return p == Parity::even ? "even" : "odd"; }

/// A finite-dimensional Z2-graded algebra given by structure constants,
/// together with two even linear maps phi, psi. Nothing here assumes the
/// defining identities hold; validate_structure checks them and reports.
struct SuperAlgebra {
    std::string name;
    std::size_t dim = 0;
    std::vector<std::string> basis_names;
    std::vector<Parity> parity;
    // table[i][j] = coordinates of [b_i, b_j]
    std::vector<std::vector<Vec>> table;
    Matrix phi, psi;
    std::optional<std::vector<std::size_t>> h_indices;  // suggested abelian part

    static SuperAlgebra make(std::string name, std::vector<Parity> parities)
    {
        SuperAlgebra a;
        a.name = std::move(name);
        a.dim = parities.size();
        a.parity = std::move(parities);
        a.basis_names.reserve(a.dim);
        for (std::size_t i = 0; i < a.dim; ++i)
            a.basis_names.push_back("b" + std::to_string(i));
        a.table.assign(a.dim, std::vector<Vec>(a.dim, zero_vec(a.dim)));
        a.phi = Matrix::identity(a.dim);
        a.psi = Matrix::identity(a.dim);
        return a;
    }

    void set_bracket(std::size_t i, std::size_t j, Vec value)
    {
        table[i][j] = std::move(value);
    }

    const Vec& basis_bracket(std::size_t i, std::size_t j) const { return table[i][j]; }

    /// Bilinear extension of the structure constants.
    Vec bracket(const Vec& x, const Vec& y) const
    {
        Vec out = zero_vec(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (x[i] == 0)
                continue;
            for (std::size_t j = 0; j < dim; ++j) {
                if (y[j] == 0)
                    continue;
                const Rat c = x[i] * y[j];
                add_scaled(out, c, table[i][j]);
            }
        }
        return out;
    }

    Vec basis_vector(std::size_t i) const { return unit_vec(dim, i); }

    /// Parity of a vector when homogeneous; nullopt for mixed or zero.
    std::optional<Parity> parity_of(const Vec& v) const
    {
        std::optional<Parity> p;
        for (std::size_t i = 0; i < dim; ++i) {
            if (v[i] == 0)
                continue;
            if (!p)
                p = parity[i];
            else if (*p != parity[i])
                return std::nullopt;
        }
        return p;
    }

    Subspace graded_component(Parity p) const
    {
        std::vector<Vec> gens;
        for (std::size_t i = 0; i < dim; ++i)
            if (parity[i] == p)
                gens.push_back(basis_vector(i));
        return Subspace::span(dim, std::move(gens));
    }

    Subspace full_space() const { return Subspace::full(dim); }

    /// Span of [A, B] over basis pairs of two subspaces.
    Subspace bracket_span(const Subspace& a, const Subspace& b) const
    {
        std::vector<Vec> gens;
        gens.reserve(a.dim() * b.dim());
        for (const auto& x : a.basis())
            for (const auto& y : b.basis())
                gens.push_back(bracket(x, y));
        return Subspace::span(dim, std::move(gens));
    }

    /// Matrix of x -> [h, x].
    Matrix left_bracket_operator(const Vec& h) const
    {
        std::vector<Vec> cols;
        cols.reserve(dim);
        for (std::size_t j = 0; j < dim; ++j)
            cols.push_back(bracket(h, basis_vector(j)));
        return Matrix::from_columns(cols);
    }

    /// Matrix of x -> [x, h].
    Matrix right_bracket_operator(const Vec& h) const
    {
        std::vector<Vec> cols;
        cols.reserve(dim);
        for (std::size_t j = 0; j < dim; ++j)
            cols.push_back(bracket(basis_vector(j), h));
        return Matrix::from_columns(cols);
    }
};

struct Witness {
    std::vector<std::size_t> indices;  // offending basis tuple
    Vec defect;                        // nonzero by construction
};

struct Verdict {
    bool ok = true;
    std::optional<Witness> witness;
    std::string note;

    static Verdict pass() { return {}; }

    static Verdict fail(std::vector<std::size_t> indices, Vec defect, std::string note = "")
    {
        Verdict v;
        v.ok = false;
        v.witness = Witness{std::move(indices), std::move(defect)};
        v.note = std::move(note);
        return v;
    }

    static Verdict fail_note(std::string note)
    {
        Verdict v;
        v.ok = false;
        v.note = std::move(note);
        return v;
    }
};

struct ValidationReport {
    Verdict grading;
    Verdict maps_commute;
    Verdict phi_automorphism;
    Verdict psi_automorphism;
    Verdict superidentity;
    Verdict bihom_skew;  // classifier only: marks the algebra BiHom-Lie-like

    bool regular() const { return phi_automorphism.ok && psi_automorphism.ok; }

    bool all_core_ok() const
    {
        return grading.ok && maps_commute.ok && phi_automorphism.ok && psi_automorphism.ok &&
               superidentity.ok;
    }
};

namespace detail {

inline Verdict check_even_map(const SuperAlgebra& a, const Matrix& m, const char* label)
{
    for (std::size_t j = 0; j < a.dim; ++j)
        for (std::size_t i = 0; i < a.dim; ++i)
            if (m(i, j) != 0 && a.parity[i] != a.parity[j]) {
                Vec defect = zero_vec(a.dim);
                defect[i] = m(i, j);
                return Verdict::fail({j}, std::move(defect),
                                     std::string(label) + " does not preserve the grading");
            }
    return Verdict::pass();
}

inline Verdict check_automorphism(const SuperAlgebra& a, const Matrix& m, const char* label)
{
    Verdict even = check_even_map(a, m, label);
    if (!even.ok)
        return even;
    if (!m.inverse()) {
        // witness: a nonzero kernel vector
        Subspace null_space = kernel(m);
        return Verdict::fail({}, null_space.basis().front(),
                             std::string(label) + " is singular");
    }
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j) {
            const Vec lhs = m.apply(a.basis_bracket(i, j));
            const Vec rhs = a.bracket(m.column(i), m.column(j));
            const Vec defect = difference(lhs, rhs);
            if (!is_zero(defect))
                return Verdict::fail({i, j}, defect,
                                     std::string(label) + " is not multiplicative");
        }
    return Verdict::pass();
}

}  // namespace detail

/// Checks, over all graded basis tuples: grading of the bracket, phi psi =
/// psi phi, both maps invertible even multiplicative, the defining
/// superidentity
///   [phi psi(x), [y, z]] = [[psi(x), y], psi(z)] + (-1)^{|x||y|} [psi(y), [phi(x), z]],
/// and (as a classifier) the skew condition
///   [psi(x), phi(y)] = -(-1)^{|x||y|} [psi(y), phi(x)].
/// Failures are verdicts with replayable witnesses, never exceptions.
inline ValidationReport validate_structure(const SuperAlgebra& a)
{
    ValidationReport report;

    for (std::size_t i = 0; i < a.dim && report.grading.ok; ++i)
        for (std::size_t j = 0; j < a.dim && report.grading.ok; ++j) {
            const Parity expected = a.parity[i] + a.parity[j];
            const Vec& v = a.basis_bracket(i, j);
            for (std::size_t k = 0; k < a.dim; ++k)
                if (v[k] != 0 && a.parity[k] != expected) {
                    Vec defect = zero_vec(a.dim);
                    defect[k] = v[k];
                    report.grading = Verdict::fail({i, j}, std::move(defect),
                                                   "bracket leaves the expected graded component");
                    break;
                }
        }

    {
        const Matrix lhs = a.phi * a.psi;
        const Matrix rhs = a.psi * a.phi;
        if (!(lhs == rhs)) {
            for (std::size_t j = 0; j < a.dim && report.maps_commute.ok; ++j) {
                const Vec defect = difference(lhs.column(j), rhs.column(j));
                if (!is_zero(defect))
                    report.maps_commute = Verdict::fail({j}, defect, "phi psi != psi phi");
            }
        }
    }

    report.phi_automorphism = detail::check_automorphism(a, a.phi, "phi");
    report.psi_automorphism = detail::check_automorphism(a, a.psi, "psi");

    const Matrix phipsi = a.phi * a.psi;
    for (std::size_t i = 0; i < a.dim && report.superidentity.ok; ++i) {
        const Vec phipsi_x = phipsi.column(i);
        const Vec psi_x = a.psi.column(i);
        const Vec phi_x = a.phi.column(i);
        for (std::size_t j = 0; j < a.dim && report.superidentity.ok; ++j) {
            const int sign = sign_factor(a.parity[i], a.parity[j]);
            const Vec psi_y = a.psi.column(j);
            for (std::size_t k = 0; k < a.dim; ++k) {
                const Vec lhs = a.bracket(phipsi_x, a.basis_bracket(j, k));
                Vec rhs = a.bracket(a.bracket(psi_x, a.basis_vector(j)), a.psi.column(k));
                Vec second = a.bracket(psi_y, a.bracket(phi_x, a.basis_vector(k)));
                if (sign < 0)
                    second = negated(std::move(second));
                rhs = sum(std::move(rhs), second);
                const Vec defect = difference(lhs, rhs);
                if (!is_zero(defect)) {
                    report.superidentity =
                        Verdict::fail({i, j, k}, defect, "superidentity defect");
                    break;
                }
            }
        }
    }

    for (std::size_t i = 0; i < a.dim && report.bihom_skew.ok; ++i)
        for (std::size_t j = 0; j < a.dim; ++j) {
            const int sign = sign_factor(a.parity[i], a.parity[j]);
            const Vec lhs = a.bracket(a.psi.column(i), a.phi.column(j));
            Vec rhs = a.bracket(a.psi.column(j), a.phi.column(i));
            if (sign > 0)
                rhs = negated(std::move(rhs));
            const Vec defect = difference(lhs, rhs);
            if (!is_zero(defect)) {
                report.bihom_skew = Verdict::fail({i, j}, defect, "skew condition fails");
                break;
            }
        }

    return report;
}

/// Twist an algebra with identity maps by a commuting pair of even
/// automorphisms: the new bracket is [x,y]' = [phi(x), psi(y)] and the pair
/// becomes the structure maps. Preconditions are verified and violations
/// are operational errors.
inline SuperAlgebra yau_twist(const SuperAlgebra& a, const Matrix& phi, const Matrix& psi)
{
    if (!a.phi.is_identity() || !a.psi.is_identity())
        throw Error(ErrorKind::precondition, "yau_twist: input must carry identity maps");
    if (phi.rows() != a.dim || phi.cols() != a.dim || psi.rows() != a.dim || psi.cols() != a.dim)
        throw Error(ErrorKind::shape, "yau_twist: map dimensions do not match the algebra");
    if (!(phi * psi == psi * phi))
        throw Error(ErrorKind::precondition, "yau_twist: maps do not commute");
    if (!detail::check_automorphism(a, phi, "phi").ok)
        throw Error(ErrorKind::precondition, "yau_twist: phi is not an even automorphism");
    if (!detail::check_automorphism(a, psi, "psi").ok)
        throw Error(ErrorKind::precondition, "yau_twist: psi is not an even automorphism");

    SuperAlgebra out = a;
    out.name = a.name.empty() ? "twisted" : a.name + " (twisted)";
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j)
            out.table[i][j] = a.bracket(phi.column(i), psi.column(j));
    out.phi = phi;
    out.psi = psi;
    return out;
}

}  // namespace bihom

#endif
