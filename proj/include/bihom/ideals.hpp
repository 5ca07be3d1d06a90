#ifndef BIHOM_IDEALS_HPP
#define BIHOM_IDEALS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "bihom/algebra.hpp"
#include "bihom/error.hpp"
#include "bihom/subspace.hpp"

namespace bihom {

/// Smallest subspace containing seed that is closed under [., L], [L, .],
/// phi, phi^-1, psi, psi^-1. Fixpoint iteration; the dimension bound makes
/// it terminate in at most dim rounds.
inline Subspace ideal_closure(const SuperAlgebra& a, const Subspace& seed)
{
    if (seed.ambient_dim() != a.dim)
        throw Error(ErrorKind::shape, "ideal_closure: ambient dimension mismatch");
    const auto phi_inv = a.phi.inverse();
    const auto psi_inv = a.psi.inverse();

    Subspace current = seed;
    while (true) {
        std::vector<Vec> gens = current.basis();
        for (const auto& v : current.basis()) {
            for (std::size_t j = 0; j < a.dim; ++j) {
                gens.push_back(a.bracket(v, a.basis_vector(j)));
                gens.push_back(a.bracket(a.basis_vector(j), v));
            }
            gens.push_back(a.phi.apply(v));
            gens.push_back(a.psi.apply(v));
            if (phi_inv)
                gens.push_back(phi_inv->apply(v));
            if (psi_inv)
                gens.push_back(psi_inv->apply(v));
        }
        Subspace next = Subspace::span(a.dim, std::move(gens));
        if (next.dim() == current.dim())
            return next;
        current = std::move(next);
    }
}

struct SubspaceFlags {
    bool graded = false;
    bool subalgebra = false;  // graded, bracket-closed, map-stable
    bool ideal = false;       // graded, [S,L]+[L,S] in S, phi(S)=S, psi(S)=S
    bool abelian = false;
    bool phi_stable = false;
    bool psi_stable = false;
};

inline bool map_fixes(const Matrix& m, const Subspace& s)
{
    const Subspace image = s.map_through(m);
    return image == s;
}

inline SubspaceFlags classify_subspace(const SuperAlgebra& a, const Subspace& s)
{
    if (s.ambient_dim() != a.dim)
        throw Error(ErrorKind::shape, "classify_subspace: ambient dimension mismatch");
    SubspaceFlags flags;

    const Subspace even_part = intersect(s, a.graded_component(Parity::even));
    const Subspace odd_part = intersect(s, a.graded_component(Parity::odd));
    flags.graded = even_part.dim() + odd_part.dim() == s.dim();

    const Subspace self_bracket = a.bracket_span(s, s);
    flags.abelian = self_bracket.is_zero();
    const bool bracket_closed = s.contains(self_bracket);

    flags.phi_stable = map_fixes(a.phi, s);
    flags.psi_stable = map_fixes(a.psi, s);
    flags.subalgebra = flags.graded && bracket_closed && flags.phi_stable && flags.psi_stable;

    const Subspace left = a.bracket_span(s, a.full_space());
    const Subspace right = a.bracket_span(a.full_space(), s);
    flags.ideal = flags.graded && s.contains(left) && s.contains(right) && flags.phi_stable &&
                  flags.psi_stable;
    return flags;
}

/// The graded ideal generated by the skew-condition defects
/// [psi(x), phi(y)] + (-1)^{|x||y|} [psi(y), phi(x)]; it vanishes exactly
/// when the algebra is BiHom-Lie-like, so it measures the non-Lie
/// character. With identity maps the generators reduce to the plain
/// symmetrized brackets [x,y] + (-1)^{|x||y|} [y,x].
/// left_bracket_vanishes records whether [L, J] = 0, with a witness pair
/// (basis index, J basis position) on failure.
struct SymmetrizedIdeal {
    Subspace generators;  // span of the symmetrized brackets
    Subspace J;           // their ideal closure
    Verdict left_bracket_vanishes;
};

inline SymmetrizedIdeal compute_J(const SuperAlgebra& a)
{
    std::vector<Vec> gens;
    gens.reserve(a.dim * a.dim);
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j) {
            Vec g = a.bracket(a.psi.column(i), a.phi.column(j));
            const int sign = sign_factor(a.parity[i], a.parity[j]);
            const Vec flipped = a.bracket(a.psi.column(j), a.phi.column(i));
            for (std::size_t k = 0; k < a.dim; ++k)
                g[k] += sign < 0 ? Rat(-flipped[k]) : flipped[k];
            gens.push_back(std::move(g));
        }

    SymmetrizedIdeal result;
    result.generators = Subspace::span(a.dim, std::move(gens));
    result.J = ideal_closure(a, result.generators);

    for (std::size_t i = 0; i < a.dim && result.left_bracket_vanishes.ok; ++i)
        for (std::size_t jv = 0; jv < result.J.dim(); ++jv) {
            const Vec value = a.bracket(a.basis_vector(i), result.J.basis()[jv]);
            if (!is_zero(value)) {
                result.left_bracket_vanishes =
                    Verdict::fail({i, jv}, value, "[L, J] has a nonzero product");
                break;
            }
        }
    return result;
}

/// Exact two-sided annihilator {v : [v, L] = [L, v] = 0}.
inline Subspace annihilator(const SuperAlgebra& a)
{
    std::vector<Matrix> conditions;
    conditions.reserve(2 * a.dim);
    for (std::size_t j = 0; j < a.dim; ++j) {
        conditions.push_back(a.right_bracket_operator(a.basis_vector(j)));  // v -> [v, b_j]
        conditions.push_back(a.left_bracket_operator(a.basis_vector(j)));   // v -> [b_j, v]
    }
    return joint_kernel(conditions, a.dim);
}

}  // namespace bihom

#endif
