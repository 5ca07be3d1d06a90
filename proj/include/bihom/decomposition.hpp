#ifndef BIHOM_DECOMPOSITION_HPP
#define BIHOM_DECOMPOSITION_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bihom/algebra.hpp"
#include "bihom/connections.hpp"
#include "bihom/ideals.hpp"
#include "bihom/roots.hpp"
#include "bihom/subspace.hpp"

namespace bihom {

/// The ideal attached to a connection class: I_H from the twisted bracket
/// spans of class members, V the sum of their root spaces, I their sum.
struct ClassIdeal {
    ConnectionClass cls;
    Subspace I_H;
    Subspace V;
    Subspace I;
    bool sum_direct = false;  // dim I = dim I_H + dim V
    SubspaceFlags flags;
    std::vector<std::string> notes;

    bool is_ideal() const { return flags.ideal; }
};

inline ClassIdeal class_ideal(const SuperAlgebra& a, const SplitDecomposition& d,
                              const ConnectionClass& cls)
{
    const Matrix phi_inv = d.phi_H0.power(-1);
    const Matrix psi_inv = d.psi_H0.power(-1);

    ClassIdeal out;
    out.cls = cls;
    std::vector<Vec> ih_gens;
    std::vector<Vec> v_gens;
    for (std::size_t idx : cls.members) {
        const RootFunctional& beta = d.roots[idx].root;
        const RootFunctional left = compose_functional(beta, psi_inv);
        const RootFunctional right = compose_functional(beta, phi_inv).negated();
        const Subspace left_space = d.space_of(left);
        const Subspace right_space = d.space_of(right);
        if (left_space.is_zero() || right_space.is_zero())
            out.notes.push_back("twisted functional of a class member is not a root; "
                                "its bracket span contributed zero");
        const Subspace product = a.bracket_span(left_space, right_space);
        for (const auto& v : product.basis())
            ih_gens.push_back(v);
        for (const auto& v : d.roots[idx].full.basis())
            v_gens.push_back(v);
    }
    out.I_H = Subspace::span(a.dim, std::move(ih_gens));
    out.V = Subspace::span(a.dim, std::move(v_gens));
    out.I = sum(out.I_H, out.V);
    out.sum_direct = out.I.dim() == out.I_H.dim() + out.V.dim();
    out.flags = classify_subspace(a, out.I);
    return out;
}

/// L = U + sum of class ideals, with U the pivot-canonical complement in H
/// of the span generated by all twisted root-space brackets. Pairwise
/// products of distinct class ideals are evaluated exactly.
struct PrimaryDecomposition {
    Subspace generated_h;  // span{[L_{a psi^-1}, L_{-a phi^-1}] : a in Lambda}
    Subspace U;
    std::vector<ClassIdeal> ideals;
    Verdict spanning;  // U + sum I = L
    std::vector<std::vector<Verdict>> orthogonality;  // [i][j], i != j
    std::vector<std::string> notes;
};

inline PrimaryDecomposition primary_decomposition(const SuperAlgebra& a,
                                                  const SplitDecomposition& d,
                                                  const ConnectionPartition& partition)
{
    PrimaryDecomposition out;
    out.ideals.reserve(partition.classes.size());
    for (const auto& cls : partition.classes)
        out.ideals.push_back(class_ideal(a, d, cls));

    Subspace generated = Subspace::zero(a.dim);
    for (const auto& ideal : out.ideals)
        generated = sum(generated, ideal.I_H);
    out.generated_h = generated;

    Subspace inside_h = generated;
    if (!d.H.contains(generated)) {
        out.notes.push_back("the generated span escapes H; U complements only its H part");
        inside_h = intersect(generated, d.H);
    }
    out.U = inside_h.complement_in(d.H);

    Subspace covered = out.U;
    for (const auto& ideal : out.ideals)
        covered = sum(covered, ideal.I);
    out.spanning = covered.is_full()
                       ? Verdict::pass()
                       : Verdict::fail_note("U plus the class ideals do not span the algebra");

    out.orthogonality.assign(out.ideals.size(), std::vector<Verdict>(out.ideals.size()));
    for (std::size_t i = 0; i < out.ideals.size(); ++i)
        for (std::size_t j = 0; j < out.ideals.size(); ++j) {
            if (i == j)
                continue;
            const Subspace product = a.bracket_span(out.ideals[i].I, out.ideals[j].I);
            out.orthogonality[i][j] =
                product.is_zero()
                    ? Verdict::pass()
                    : Verdict::fail({i, j}, product.basis().front(),
                                    "distinct class ideals have a nonzero product");
        }
    return out;
}

/// Hypotheses and conclusion of the direct-sum refinement, reported
/// separately so implication violations stay visible.
struct DirectSumReport {
    Verdict annihilator_zero;
    Verdict h_generated;  // H equals the generated span
    Verdict sum_direct;   // the class ideals sum directly
    Verdict sum_covers;   // their sum is all of L
    bool conclusion() const { return sum_direct.ok && sum_covers.ok; }
};

inline DirectSumReport direct_sum_check(const SuperAlgebra& a, const SplitDecomposition& d,
                                        const PrimaryDecomposition& p)
{
    DirectSumReport report;
    const Subspace z = annihilator(a);
    report.annihilator_zero =
        z.is_zero() ? Verdict::pass()
                    : Verdict::fail({}, z.basis().front(), "the annihilator is nonzero");
    report.h_generated =
        p.generated_h == d.H
            ? Verdict::pass()
            : Verdict::fail_note("H differs from the span of twisted root-space brackets");

    Subspace total = Subspace::zero(a.dim);
    std::size_t dim_sum = 0;
    for (const auto& ideal : p.ideals) {
        total = sum(total, ideal.I);
        dim_sum += ideal.I.dim();
    }
    report.sum_direct = total.dim() == dim_sum
                            ? Verdict::pass()
                            : Verdict::fail_note("the class ideals overlap");
    report.sum_covers = total.is_full()
                            ? Verdict::pass()
                            : Verdict::fail_note("the class ideals do not span the algebra");
    return report;
}

/// Maximal length: every root space is one-dimensional (hence concentrated
/// in a single parity). The literal variant additionally requires dimension
/// one in each parity separately.
struct MaximalLengthReport {
    bool ok = false;
    bool literal = false;
    // per root: (even dim, odd dim)
    std::vector<std::pair<std::size_t, std::size_t>> dims;
};

inline MaximalLengthReport maximal_length_check(const SplitDecomposition& d, bool literal = false)
{
    MaximalLengthReport report;
    report.literal = literal;
    report.ok = true;
    for (const auto& r : d.roots) {
        report.dims.emplace_back(r.even.dim(), r.odd.dim());
        if (literal) {
            if (r.even.dim() != 1 || r.odd.dim() != 1)
                report.ok = false;
        } else if (r.full.dim() != 1) {
            report.ok = false;
        }
    }
    return report;
}

/// Classification of roots against J: per parity, roots whose graded
/// component lies inside J, roots whose component misses J, and (off
/// maximal length) partial overlaps.
struct JPartition {
    SymmetrizedIdeal j;
    std::array<std::vector<std::size_t>, 2> lambda_j;      // root indices per parity
    std::array<std::vector<std::size_t>, 2> lambda_not_j;  // root indices per parity
    std::array<std::vector<std::size_t>, 2> mixed;
    bool j_symmetric = true;
    bool not_j_symmetric = true;

    bool in_lambda_j(std::size_t root_index, Parity p) const
    {
        const auto& v = lambda_j[static_cast<std::size_t>(p)];
        return std::find(v.begin(), v.end(), root_index) != v.end();
    }

    bool in_lambda_not_j(std::size_t root_index, Parity p) const
    {
        const auto& v = lambda_not_j[static_cast<std::size_t>(p)];
        return std::find(v.begin(), v.end(), root_index) != v.end();
    }

    /// (root index, parity) entries of one side, deterministic order.
    std::vector<std::pair<std::size_t, Parity>> entries(bool j_side) const
    {
        std::vector<std::pair<std::size_t, Parity>> out;
        const auto& source = j_side ? lambda_j : lambda_not_j;
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t idx : source[p])
                out.emplace_back(idx, static_cast<Parity>(p));
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline JPartition lambda_partition_j(const SuperAlgebra& a, const SplitDecomposition& d,
                                     SymmetrizedIdeal j)
{
    JPartition part;
    part.j = std::move(j);
    const std::array<Subspace, 2> j_graded = {
        intersect(part.j.J, a.graded_component(Parity::even)),
        intersect(part.j.J, a.graded_component(Parity::odd)),
    };
    for (std::size_t idx = 0; idx < d.roots.size(); ++idx) {
        const auto& r = d.roots[idx];
        const std::array<const Subspace*, 2> comps = {&r.even, &r.odd};
        for (std::size_t p = 0; p < 2; ++p) {
            if (comps[p]->is_zero())
                continue;
            const Subspace overlap = intersect(j_graded[p], *comps[p]);
            if (overlap.is_zero())
                part.lambda_not_j[p].push_back(idx);
            else if (overlap == *comps[p])
                part.lambda_j[p].push_back(idx);
            else
                part.mixed[p].push_back(idx);
        }
    }

    auto symmetric = [&](const std::array<std::vector<std::size_t>, 2>& side) {
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t idx : side[p]) {
                const RootFunctional neg = d.roots[idx].root.negated();
                const RootSpace* partner = d.find(neg);
                bool found = false;
                if (partner)
                    for (std::size_t q = 0; q < 2 && !found; ++q)
                        for (std::size_t other : side[q])
                            if (d.roots[other].root == neg) {
                                found = true;
                                break;
                            }
                if (!found)
                    return false;
            }
        return true;
    };
    part.j_symmetric = symmetric(part.lambda_j);
    part.not_j_symmetric = symmetric(part.lambda_not_j);
    return part;
}

inline RefinedChainPolicy refined_chain_policy(const SplitDecomposition& d, const JPartition& p)
{
    RefinedChainPolicy policy;
    for (std::size_t parity = 0; parity < 2; ++parity)
        for (std::size_t idx : p.lambda_not_j[parity])
            policy.allow(d.roots[idx].root, static_cast<Parity>(parity));
    return policy;
}

/// Root multiplicativity: nonvanishing of the bracket whenever the twisted
/// root sum is again a root (of the required kind). Only meaningful at
/// maximal length; counterexamples are listed.
struct RootMultiplicativityReport {
    bool applicable = false;
    bool ok = false;
    struct Counterexample {
        int condition;  // 1 or 2
        std::size_t first_root, second_root;
        Parity first_parity, second_parity;
    };
    std::vector<Counterexample> counterexamples;
};

inline RootMultiplicativityReport root_multiplicativity_check(const SuperAlgebra& a,
                                                              const SplitDecomposition& d,
                                                              const JPartition& part,
                                                              bool maximal_length_ok)
{
    RootMultiplicativityReport report;
    report.applicable = maximal_length_ok;
    if (!report.applicable)
        return report;
    report.ok = true;

    const Matrix phi_inv = d.phi_H0.power(-1);
    const Matrix psi_inv = d.psi_H0.power(-1);
    const auto not_j = part.entries(false);
    const auto j_side = part.entries(true);

    auto in_lambda_j_set = [&](const RootFunctional& f) {
        for (const auto& [idx, p] : j_side)
            if (d.roots[idx].root == f)
                return true;
        return false;
    };

    auto component = [&](std::size_t idx, Parity p) -> const Subspace& {
        return p == Parity::even ? d.roots[idx].even : d.roots[idx].odd;
    };

    for (const auto& [ia, pa] : not_j)
        for (const auto& [ib, pb] : not_j) {
            const RootFunctional target = compose_functional(d.roots[ia].root, phi_inv) +
                                          compose_functional(d.roots[ib].root, psi_inv);
            if (target.is_zero() || !d.in_lambda(target))
                continue;
            const Subspace product = a.bracket_span(component(ia, pa), component(ib, pb));
            if (product.is_zero()) {
                report.ok = false;
                report.counterexamples.push_back({1, ia, ib, pa, pb});
            }
        }

    for (const auto& [ia, pa] : not_j)
        for (const auto& [ig, pg] : j_side) {
            const RootFunctional target = compose_functional(d.roots[ia].root, phi_inv) +
                                          compose_functional(d.roots[ig].root, psi_inv);
            if (target.is_zero() || !in_lambda_j_set(target))
                continue;
            const Subspace product = a.bracket_span(component(ig, pg), component(ia, pa));
            if (product.is_zero()) {
                report.ok = false;
                report.counterexamples.push_back({2, ia, ig, pa, pg});
            }
        }
    return report;
}

/// Solution set of {v : [v, L_a] = [L_a, v] = 0} over the chosen side of
/// the partition (the printed form quantifies over the J side).
inline Subspace lie_annihilator(const SuperAlgebra& a, const SplitDecomposition& d,
                                const JPartition& part, bool use_not_j_side = false)
{
    std::set<std::size_t> roots_on_side;
    for (const auto& entry : part.entries(!use_not_j_side))
        roots_on_side.insert(entry.first);
    std::vector<Matrix> conditions;
    for (std::size_t idx : roots_on_side)
        for (const auto& w : d.roots[idx].full.basis()) {
            conditions.push_back(a.right_bracket_operator(w));
            conditions.push_back(a.left_bracket_operator(w));
        }
    return joint_kernel(conditions, a.dim);
}

/// The simplicity verdict lattice. A definite "simple" is never certified:
/// the falsifier frontier is finite and documented, so the best positive
/// answer is consistency with every checkable necessary condition.
struct SimplicityReport {
    enum class Outcome { not_simple, simple_consistent, inconclusive };
    Outcome outcome = Outcome::inconclusive;
    std::string reason;
    std::optional<Subspace> witness_ideal;
    std::string witness_origin;

    Verdict derived_nonzero;  // [L, L] != 0
    Verdict h_generated;
    Verdict single_class;
    bool maximal_length = false;
    bool root_multiplicative_applicable = false;
    bool root_multiplicative = false;
    bool z_lie_zero = false;
    bool z_lie_zero_not_j_variant = false;
    std::optional<bool> nj_connected_not_j;  // nullopt: not evaluated
    std::optional<bool> nj_connected_j;
    std::string nj_note;

    struct Candidate {
        std::string origin;
        std::size_t dim;
        bool proper;
        bool is_ideal;
        bool equals_j;
    };
    std::vector<Candidate> frontier;

    // The final characterization also assumes a primeness condition that is
    // not defined anywhere; it is excluded from the computation.
    std::string prime_note =
        "the primeness hypothesis is undefined and excluded from this verdict";
};

inline SimplicityReport simplicity_report(const SuperAlgebra& a, const SplitDecomposition& d,
                                          const ConnectionPartition& partition,
                                          const PrimaryDecomposition& primary,
                                          const JPartition& jpart, const ConnectionContext& ctx,
                                          bool maximal_length_ok)
{
    SimplicityReport report;

    const Subspace derived = a.bracket_span(a.full_space(), a.full_space());
    report.derived_nonzero =
        derived.is_zero() ? Verdict::fail_note("[L, L] = 0") : Verdict::pass();
    report.h_generated =
        primary.generated_h == d.H
            ? Verdict::pass()
            : Verdict::fail_note("H differs from the span of twisted root-space brackets");
    report.single_class = partition.classes.size() <= 1
                              ? Verdict::pass()
                              : Verdict::fail_note("more than one connection class");

    report.maximal_length = maximal_length_ok;
    const auto mult = root_multiplicativity_check(a, d, jpart, maximal_length_ok);
    report.root_multiplicative_applicable = mult.applicable;
    report.root_multiplicative = mult.ok;
    report.z_lie_zero = lie_annihilator(a, d, jpart, false).is_zero();
    report.z_lie_zero_not_j_variant = lie_annihilator(a, d, jpart, true).is_zero();

    if (!jpart.j_symmetric || !jpart.not_j_symmetric) {
        report.nj_note = "a root set is asymmetric; refined connectivity not evaluated";
    } else {
        const RefinedChainPolicy policy = refined_chain_policy(d, jpart);
        auto all_connected = [&](bool j_side) {
            const auto entries = jpart.entries(j_side);
            for (std::size_t x = 0; x < entries.size(); ++x)
                for (std::size_t y = x + 1; y < entries.size(); ++y) {
                    const auto& [ix, px] = entries[x];
                    const auto& [iy, py] = entries[y];
                    if (!find_nj_connection(d.roots[ix].root, px, d.roots[iy].root, py, policy,
                                            ctx))
                        return false;
                }
            return true;
        };
        report.nj_connected_not_j = all_connected(false);
        report.nj_connected_j = all_connected(true);
    }

    // Falsifier frontier: the class ideals first (the canonical candidates),
    // then ideal closures of every root-space basis vector, every graded H
    // basis vector, and of J itself.
    std::vector<std::pair<std::string, Subspace>> candidates;
    for (std::size_t c = 0; c < primary.ideals.size(); ++c)
        candidates.emplace_back("class ideal " + std::to_string(c), primary.ideals[c].I);
    for (std::size_t r = 0; r < d.roots.size(); ++r)
        for (std::size_t v = 0; v < d.roots[r].full.dim(); ++v)
            candidates.emplace_back(
                "closure of root-space vector (root " + std::to_string(r) + ", vector " +
                    std::to_string(v) + ")",
                ideal_closure(a, Subspace::span(a.dim, {d.roots[r].full.basis()[v]})));
    std::size_t h_counter = 0;
    for (const Subspace* part : {&d.H0, &d.H1})
        for (const auto& v : part->basis())
            candidates.emplace_back("closure of H basis vector " + std::to_string(h_counter++),
                                    ideal_closure(a, Subspace::span(a.dim, {v})));
    candidates.emplace_back("closure of J", ideal_closure(a, jpart.j.J));

    for (auto& [origin, space] : candidates) {
        const bool proper = !space.is_zero() && !space.is_full();
        const bool equals_j = space == jpart.j.J;
        const bool is_ideal = classify_subspace(a, space).ideal;
        report.frontier.push_back({origin, space.dim(), proper, is_ideal, equals_j});
        if (proper && !equals_j && is_ideal && !report.witness_ideal) {
            report.witness_ideal = space;
            report.witness_origin = origin;
        }
    }

    if (!report.derived_nonzero.ok) {
        report.outcome = SimplicityReport::Outcome::not_simple;
        report.reason = "the derived algebra vanishes";
    } else if (report.witness_ideal) {
        report.outcome = SimplicityReport::Outcome::not_simple;
        report.reason = "a proper nonzero ideal distinct from J exists (" +
                        report.witness_origin + ")";
    } else if (report.h_generated.ok && report.single_class.ok) {
        report.outcome = SimplicityReport::Outcome::simple_consistent;
        report.reason = "every checkable necessary condition holds and the falsifier "
                        "frontier found no proper ideal other than J";
    } else {
        report.outcome = SimplicityReport::Outcome::inconclusive;
        report.reason = "no falsifier ideal found, but a necessary condition fails";
    }
    return report;
}

}  // namespace bihom

#endif
