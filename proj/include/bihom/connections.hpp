#ifndef BIHOM_CONNECTIONS_HPP
#define BIHOM_CONNECTIONS_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bihom/error.hpp"
#include "bihom/matrix.hpp"
#include "bihom/rational.hpp"
#include "bihom/roots.hpp"

namespace bihom {

/// Everything the connection search needs from a decomposition: the root
/// value set, the twist action on functionals, and the search policy.
struct ConnectionContext {
    std::vector<RootFunctional> pm_lambda;  // sorted, deduplicated
    Matrix phi_h, psi_h;                    // restrictions to H_even
    Matrix phi_h_inv, psi_h_inv;
    std::size_t orbit_bound = 64;
    bool strict = true;  // entry/exit twist exponents restricted to naturals

    static ConnectionContext from(const SplitDecomposition& d, std::size_t orbit_bound = 64,
                                  bool strict = true)
    {
        ConnectionContext ctx;
        ctx.pm_lambda = d.plus_minus_lambda();
        ctx.phi_h = d.phi_H0;
        ctx.psi_h = d.psi_H0;
        const auto phi_inv = d.phi_H0.inverse();
        const auto psi_inv = d.psi_H0.inverse();
        if (!phi_inv || !psi_inv)
            throw Error(ErrorKind::precondition, "structure maps are singular on H");
        ctx.phi_h_inv = *phi_inv;
        ctx.psi_h_inv = *psi_inv;
        ctx.orbit_bound = orbit_bound;
        ctx.strict = strict;
        return ctx;
    }

    bool in_pm_lambda(const RootFunctional& f) const
    {
        return std::binary_search(pm_lambda.begin(), pm_lambda.end(), f);
    }
};

/// Orbit of a functional under the twist monoid; exponents of the first
/// (breadth-first, hence minimal) reachable pair are recorded per element.
/// signed_exponents extends the search to the full group.
struct TwistOrbit {
    std::map<Vec, std::pair<long, long>, VecLess> elements;  // value -> (n, r)

    bool contains(const RootFunctional& f) const { return elements.count(f.values) > 0; }

    std::optional<std::pair<long, long>> exponents_of(const RootFunctional& f) const
    {
        auto it = elements.find(f.values);
        if (it == elements.end())
            return std::nullopt;
        return it->second;
    }
};

/// {alpha . phi^{-n} psi^{-r}}: BFS with cycle detection. Terminates when
/// the twists act on a finite value set; otherwise the configured bound is
/// exceeded and the search reports divergence.
inline TwistOrbit root_orbit(const RootFunctional& alpha, const ConnectionContext& ctx,
                             bool signed_exponents = false)
{
    TwistOrbit orbit;
    std::deque<std::pair<Vec, std::pair<long, long>>> queue;
    orbit.elements.emplace(alpha.values, std::make_pair(0L, 0L));
    queue.emplace_back(alpha.values, std::make_pair(0L, 0L));

    while (!queue.empty()) {
        auto [values, exps] = queue.front();
        queue.pop_front();
        const RootFunctional f{values};
        std::vector<std::pair<RootFunctional, std::pair<long, long>>> next;
        next.emplace_back(compose_functional(f, ctx.phi_h_inv),
                          std::make_pair(exps.first + 1, exps.second));
        next.emplace_back(compose_functional(f, ctx.psi_h_inv),
                          std::make_pair(exps.first, exps.second + 1));
        if (signed_exponents) {
            next.emplace_back(compose_functional(f, ctx.phi_h),
                              std::make_pair(exps.first - 1, exps.second));
            next.emplace_back(compose_functional(f, ctx.psi_h),
                              std::make_pair(exps.first, exps.second - 1));
        }
        for (auto& [g, e] : next) {
            if (orbit.elements.count(g.values))
                continue;
            if (orbit.elements.size() >= ctx.orbit_bound) {
                std::string value_text = "(";
                for (std::size_t i = 0; i < alpha.values.size(); ++i)
                    value_text += (i ? ", " : "") + to_string(alpha.values[i]);
                value_text += ")";
                throw Error(ErrorKind::divergence,
                            "twist orbit of the root with values " + value_text +
                                " exceeded the bound of " + std::to_string(ctx.orbit_bound) +
                                " elements");
            }
            orbit.elements.emplace(g.values, e);
            queue.emplace_back(g.values, e);
        }
    }
    return orbit;
}

/// A witness that one root is connected to another. Either the direct form
/// beta = epsilon . alpha . phi^{z1} psi^{z2}, or a chain alpha_1..alpha_k
/// whose twisted partial sums stay inside +-Lambda and whose final sum
/// lands in {+- beta . phi^{-m} psi^{-s}}.
struct ConnectionChain {
    bool direct = false;
    int epsilon = 1;
    long z1 = 0, z2 = 0;

    std::vector<RootFunctional> alphas;
    long entry_n = 0, entry_r = 0;  // alpha_1 = alpha . phi^{-n} psi^{-r}
    int exit_epsilon = 1;
    long exit_m = 0, exit_s = 0;
    std::vector<RootFunctional> partial_sums;  // S_1 .. S_{k-1}
    std::optional<std::vector<Parity>> parity_trace;

    std::size_t length() const { return direct ? 1 : alphas.size(); }
};

namespace detail {

/// Entry orbit of alpha restricted to +-Lambda members, in deterministic
/// (value-sorted) order.
inline std::vector<std::pair<RootFunctional, std::pair<long, long>>> entry_candidates(
    const RootFunctional& alpha, const ConnectionContext& ctx)
{
    const TwistOrbit orbit = root_orbit(alpha, ctx, !ctx.strict);
    std::vector<std::pair<RootFunctional, std::pair<long, long>>> out;
    for (const auto& [values, exps] : orbit.elements)
        if (ctx.in_pm_lambda(RootFunctional{values}))
            out.emplace_back(RootFunctional{values}, exps);
    return out;  // map iteration is already value-sorted
}

struct TargetSet {
    // value -> (epsilon, m, s); epsilon = +1 entries win over -1
    std::map<Vec, std::tuple<int, long, long>, VecLess> elements;

    std::optional<std::tuple<int, long, long>> hit(const RootFunctional& f) const
    {
        auto it = elements.find(f.values);
        if (it == elements.end())
            return std::nullopt;
        return it->second;
    }
};

inline TargetSet target_set(const RootFunctional& beta, const ConnectionContext& ctx)
{
    TargetSet t;
    const TwistOrbit orbit = root_orbit(beta, ctx, !ctx.strict);
    for (const auto& [values, exps] : orbit.elements)
        t.elements.emplace(values, std::make_tuple(1, exps.first, exps.second));
    for (const auto& [values, exps] : orbit.elements)
        t.elements.emplace(negated(values), std::make_tuple(-1, exps.first, exps.second));
    return t;
}

}  // namespace detail

/// Direct clause: beta = epsilon . alpha . phi^{z1} psi^{z2} over the joint
/// signed orbit lattice, searched breadth-first so the reported exponents
/// are minimal. Positive epsilon is preferred on ties.
inline std::optional<ConnectionChain> find_direct_connection(const RootFunctional& alpha,
                                                             const RootFunctional& beta,
                                                             const ConnectionContext& ctx)
{
    std::map<Vec, std::pair<long, long>, VecLess> seen;
    std::deque<std::pair<Vec, std::pair<long, long>>> queue;
    seen.emplace(alpha.values, std::make_pair(0L, 0L));
    queue.emplace_back(alpha.values, std::make_pair(0L, 0L));
    while (!queue.empty()) {
        auto [values, exps] = queue.front();
        queue.pop_front();
        const RootFunctional f{values};
        for (int eps : {1, -1}) {
            const RootFunctional candidate = eps > 0 ? f : f.negated();
            if (candidate == beta) {
                ConnectionChain c;
                c.direct = true;
                c.epsilon = eps;
                c.z1 = exps.first;
                c.z2 = exps.second;
                c.alphas = {alpha};
                return c;
            }
        }
        const std::pair<Matrix const*, std::pair<long, long>> steps[] = {
            {&ctx.phi_h_inv, {exps.first - 1, exps.second}},
            {&ctx.phi_h, {exps.first + 1, exps.second}},
            {&ctx.psi_h_inv, {exps.first, exps.second - 1}},
            {&ctx.psi_h, {exps.first, exps.second + 1}},
        };
        for (const auto& [m, e] : steps) {
            const RootFunctional g = compose_functional(f, *m);
            if (seen.count(g.values))
                continue;
            if (seen.size() >= ctx.orbit_bound) {
                std::string root_values = "(";
                for (std::size_t i = 0; i < alpha.values.size(); ++i)
                    root_values += (i ? ", " : "") + to_string(alpha.values[i]);
                root_values += ")";
                throw Error(ErrorKind::divergence,
                            "direct-connection orbit of the root with values " + root_values +
                                " exceeded the bound of " + std::to_string(ctx.orbit_bound) +
                                " elements");
            }
            seen.emplace(g.values, e);
            queue.emplace_back(g.values, e);
        }
    }
    return std::nullopt;
}

/// Shortest connection from alpha to beta, with deterministic lexicographic
/// tie-breaking on (chain length, chain values). The direct clause is tried
/// first; otherwise a breadth-first search over +-Lambda partial-sum states.
inline std::optional<ConnectionChain> find_connection(const RootFunctional& alpha,
                                                      const RootFunctional& beta,
                                                      const ConnectionContext& ctx)
{
    if (auto direct = find_direct_connection(alpha, beta, ctx))
        return direct;

    const auto entries = detail::entry_candidates(alpha, ctx);
    const auto targets = detail::target_set(beta, ctx);

    struct Node {
        std::vector<RootFunctional> alphas;
        std::vector<RootFunctional> sums;
        std::pair<long, long> entry;
    };
    std::map<Vec, Node, VecLess> visited;  // keyed by the last partial sum
    std::deque<Vec> queue;

    auto finish = [&](Node node, const RootFunctional& final_sum,
                      std::tuple<int, long, long> exit) {
        ConnectionChain c;
        c.alphas = std::move(node.alphas);
        c.partial_sums = std::move(node.sums);
        c.partial_sums.push_back(final_sum);
        c.entry_n = node.entry.first;
        c.entry_r = node.entry.second;
        c.exit_epsilon = std::get<0>(exit);
        c.exit_m = std::get<1>(exit);
        c.exit_s = std::get<2>(exit);
        return c;
    };

    // Length-2 chains seed the search.
    for (const auto& [alpha1, entry_exps] : entries) {
        const RootFunctional head = compose_functional(alpha1, ctx.phi_h_inv);
        for (const auto& alpha2 : ctx.pm_lambda) {
            const RootFunctional s1 = head + compose_functional(alpha2, ctx.psi_h_inv);
            Node node{{alpha1, alpha2}, {}, entry_exps};
            if (auto exit = targets.hit(s1))
                return finish(std::move(node), s1, *exit);
            if (ctx.in_pm_lambda(s1) && !visited.count(s1.values)) {
                node.sums.push_back(s1);
                visited.emplace(s1.values, std::move(node));
                queue.push_back(s1.values);
            }
        }
    }

    while (!queue.empty()) {
        const Vec state = queue.front();
        queue.pop_front();
        const Node& node = visited.at(state);
        const RootFunctional head = compose_functional(RootFunctional{state}, ctx.phi_h_inv);
        for (const auto& gamma : ctx.pm_lambda) {
            const RootFunctional next = head + compose_functional(gamma, ctx.psi_h_inv);
            Node extended = node;
            extended.alphas.push_back(gamma);
            if (auto exit = targets.hit(next))
                return finish(std::move(extended), next, *exit);
            if (ctx.in_pm_lambda(next) && !visited.count(next.values)) {
                extended.sums.push_back(next);
                visited.emplace(next.values, std::move(extended));
                queue.push_back(next.values);
            }
        }
    }
    return std::nullopt;
}

/// Independent replay of a connection witness: recomputes every twist,
/// every partial sum and every membership from scratch. Returns an error
/// message, or nullopt when the chain validates.
inline std::optional<std::string> replay_failure(const RootFunctional& alpha,
                                                 const RootFunctional& beta,
                                                 const ConnectionChain& chain,
                                                 const ConnectionContext& ctx)
{
    if (chain.direct) {
        RootFunctional expected = root_twist(alpha, ctx.phi_h, ctx.psi_h, chain.z1, chain.z2);
        if (chain.epsilon < 0)
            expected = expected.negated();
        if (!(expected == beta))
            return "direct clause does not reproduce the target root";
        return std::nullopt;
    }
    if (chain.alphas.size() < 2)
        return "chain shorter than two elements";
    if (ctx.strict && (chain.entry_n < 0 || chain.entry_r < 0 || chain.exit_m < 0 ||
                       chain.exit_s < 0))
        return "twist exponents must be natural numbers under the strict policy";

    const RootFunctional alpha1 =
        root_twist(alpha, ctx.phi_h, ctx.psi_h, -chain.entry_n, -chain.entry_r);
    if (!(alpha1 == chain.alphas.front()))
        return "entry twist does not reproduce the first chain element";
    for (const auto& element : chain.alphas)
        if (!ctx.in_pm_lambda(element))
            return "a chain element is outside +-Lambda";

    RootFunctional sum_value = compose_functional(chain.alphas[0], ctx.phi_h_inv) +
                               compose_functional(chain.alphas[1], ctx.psi_h_inv);
    std::vector<RootFunctional> sums{sum_value};
    for (std::size_t i = 2; i < chain.alphas.size(); ++i) {
        sum_value = compose_functional(sum_value, ctx.phi_h_inv) +
                    compose_functional(chain.alphas[i], ctx.psi_h_inv);
        sums.push_back(sum_value);
    }
    if (sums.size() != chain.partial_sums.size())
        return "cached partial sums have the wrong length";
    for (std::size_t i = 0; i < sums.size(); ++i)
        if (!(sums[i] == chain.partial_sums[i]))
            return "a cached partial sum does not replay";
    for (std::size_t i = 0; i + 1 < sums.size(); ++i)
        if (!ctx.in_pm_lambda(sums[i]))
            return "an intermediate partial sum is outside +-Lambda";

    RootFunctional target = root_twist(beta, ctx.phi_h, ctx.psi_h, -chain.exit_m, -chain.exit_s);
    if (chain.exit_epsilon < 0)
        target = target.negated();
    if (!(sums.back() == target))
        return "final sum does not land in the target twist set";
    return std::nullopt;
}

/// Which roots a refined chain may pass through (positions >= 2), and in
/// which parities. Built from the J-partition by the decomposition module.
struct RefinedChainPolicy {
    std::map<Vec, std::vector<Parity>, VecLess> usable;

    void allow(const RootFunctional& f, Parity p)
    {
        auto& ps = usable[f.values];
        if (std::find(ps.begin(), ps.end(), p) == ps.end())
            ps.push_back(p);
    }
};

/// Refined connection search: chain elements after the first must come from
/// the policy's allowed roots, states carry the accumulated parity, and the
/// final sum must land in the target twist set with the target's parity.
/// A length-one chain (orbit element hitting the target, matching parity)
/// covers the reflexive case.
inline std::optional<ConnectionChain> find_nj_connection(
    const RootFunctional& alpha, Parity alpha_parity, const RootFunctional& beta,
    Parity beta_parity, const RefinedChainPolicy& policy, const ConnectionContext& ctx)
{
    const auto entries = detail::entry_candidates(alpha, ctx);
    const auto targets = detail::target_set(beta, ctx);

    if (alpha_parity == beta_parity)
        for (const auto& [alpha1, entry_exps] : entries)
            if (auto exit = targets.hit(alpha1)) {
                ConnectionChain c;
                c.alphas = {alpha1};
                c.entry_n = entry_exps.first;
                c.entry_r = entry_exps.second;
                c.exit_epsilon = std::get<0>(*exit);
                c.exit_m = std::get<1>(*exit);
                c.exit_s = std::get<2>(*exit);
                c.parity_trace = std::vector<Parity>{alpha_parity};
                return c;
            }

    std::vector<std::pair<RootFunctional, Parity>> steps;
    for (const auto& [values, parities] : policy.usable)
        for (Parity p : parities)
            steps.emplace_back(RootFunctional{values}, p);

    struct Node {
        std::vector<RootFunctional> alphas;
        std::vector<Parity> trace;
        std::vector<RootFunctional> sums;
        std::pair<long, long> entry;
    };
    using Key = std::pair<Vec, Parity>;
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const
        {
            const int c = compare(a.first, b.first);
            if (c != 0)
                return c < 0;
            return a.second < b.second;
        }
    };
    std::map<Key, Node, KeyLess> visited;
    std::deque<Key> queue;

    auto finish = [&](Node node, const RootFunctional& final_sum,
                      std::tuple<int, long, long> exit) {
        ConnectionChain c;
        c.alphas = std::move(node.alphas);
        c.partial_sums = std::move(node.sums);
        c.partial_sums.push_back(final_sum);
        c.entry_n = node.entry.first;
        c.entry_r = node.entry.second;
        c.exit_epsilon = std::get<0>(exit);
        c.exit_m = std::get<1>(exit);
        c.exit_s = std::get<2>(exit);
        c.parity_trace = std::move(node.trace);
        return c;
    };

    for (const auto& [alpha1, entry_exps] : entries) {
        const RootFunctional head = compose_functional(alpha1, ctx.phi_h_inv);
        for (const auto& [gamma, p] : steps) {
            const RootFunctional s1 = head + compose_functional(gamma, ctx.psi_h_inv);
            const Parity acc = alpha_parity + p;
            Node node{{alpha1, gamma}, {alpha_parity, p}, {}, entry_exps};
            if (acc == beta_parity)
                if (auto exit = targets.hit(s1))
                    return finish(std::move(node), s1, *exit);
            const Key key{s1.values, acc};
            if (ctx.in_pm_lambda(s1) && !visited.count(key)) {
                node.sums.push_back(s1);
                visited.emplace(key, std::move(node));
                queue.push_back(key);
            }
        }
    }

    while (!queue.empty()) {
        const Key state = queue.front();
        queue.pop_front();
        const Node& node = visited.at(state);
        const RootFunctional head =
            compose_functional(RootFunctional{state.first}, ctx.phi_h_inv);
        for (const auto& [gamma, p] : steps) {
            const RootFunctional next = head + compose_functional(gamma, ctx.psi_h_inv);
            const Parity acc = state.second + p;
            Node extended = node;
            extended.alphas.push_back(gamma);
            extended.trace.push_back(p);
            if (acc == beta_parity)
                if (auto exit = targets.hit(next))
                    return finish(std::move(extended), next, *exit);
            const Key key{next.values, acc};
            if (ctx.in_pm_lambda(next) && !visited.count(key)) {
                extended.sums.push_back(next);
                visited.emplace(key, std::move(extended));
                queue.push_back(key);
            }
        }
    }
    return std::nullopt;
}

/// Replay for refined chains: parity bookkeeping plus the shared sum and
/// membership recomputation.
inline std::optional<std::string> replay_nj_failure(
    const RootFunctional& alpha, Parity alpha_parity, const RootFunctional& beta,
    Parity beta_parity, const ConnectionChain& chain, const RefinedChainPolicy& policy,
    const ConnectionContext& ctx)
{
    if (!chain.parity_trace)
        return "refined chain is missing its parity trace";
    const auto& trace = *chain.parity_trace;
    if (trace.size() != chain.alphas.size())
        return "parity trace has the wrong length";
    if (trace.empty() || trace.front() != alpha_parity)
        return "parity trace does not start at the source parity";
    Parity acc = alpha_parity;
    for (std::size_t k = 1; k < trace.size(); ++k) {
        acc = acc + trace[k];
        auto it = policy.usable.find(chain.alphas[k].values);
        if (it == policy.usable.end() ||
            std::find(it->second.begin(), it->second.end(), trace[k]) == it->second.end())
            return "a chain element is not an allowed refined step";
    }
    if (acc != beta_parity)
        return "accumulated parity does not match the target parity";

    if (ctx.strict && (chain.entry_n < 0 || chain.entry_r < 0 || chain.exit_m < 0 ||
                       chain.exit_s < 0))
        return "twist exponents must be natural numbers under the strict policy";
    const RootFunctional alpha1 =
        root_twist(alpha, ctx.phi_h, ctx.psi_h, -chain.entry_n, -chain.entry_r);
    if (!(alpha1 == chain.alphas.front()))
        return "entry twist does not reproduce the first chain element";

    RootFunctional target = root_twist(beta, ctx.phi_h, ctx.psi_h, -chain.exit_m, -chain.exit_s);
    if (chain.exit_epsilon < 0)
        target = target.negated();

    if (chain.alphas.size() == 1) {
        if (!chain.partial_sums.empty())
            return "length-one chain must carry no partial sums";
        if (!(chain.alphas.front() == target))
            return "length-one chain does not land in the target twist set";
        return std::nullopt;
    }

    RootFunctional sum_value = compose_functional(chain.alphas[0], ctx.phi_h_inv) +
                               compose_functional(chain.alphas[1], ctx.psi_h_inv);
    std::vector<RootFunctional> sums{sum_value};
    for (std::size_t i = 2; i < chain.alphas.size(); ++i) {
        sum_value = compose_functional(sum_value, ctx.phi_h_inv) +
                    compose_functional(chain.alphas[i], ctx.psi_h_inv);
        sums.push_back(sum_value);
    }
    if (sums.size() != chain.partial_sums.size())
        return "cached partial sums have the wrong length";
    for (std::size_t i = 0; i < sums.size(); ++i)
        if (!(sums[i] == chain.partial_sums[i]))
            return "a cached partial sum does not replay";
    for (std::size_t i = 0; i + 1 < sums.size(); ++i)
        if (!ctx.in_pm_lambda(sums[i]))
            return "an intermediate partial sum is outside +-Lambda";
    if (!(sums.back() == target))
        return "final sum does not land in the target twist set";
    return std::nullopt;
}

/// An equivalence class of the connection relation.
struct ConnectionClass {
    std::vector<std::size_t> members;  // indices into the sorted root list
    RootFunctional representative;     // lexicographically least member
};

struct ConnectionPartition {
    std::vector<ConnectionClass> classes;
    // Witnesses found while building the partition, keyed by root indices.
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, ConnectionChain>> chains;
};

/// Partition of Lambda by the symmetric-transitive closure of pairwise
/// connection searches, via union-find.
inline ConnectionPartition connection_classes(const SplitDecomposition& d,
                                              const ConnectionContext& ctx)
{
    const auto lambda = d.lambda();
    std::vector<std::size_t> parent(lambda.size());
    for (std::size_t i = 0; i < parent.size(); ++i)
        parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };

    ConnectionPartition result;
    for (std::size_t i = 0; i < lambda.size(); ++i)
        for (std::size_t j = i + 1; j < lambda.size(); ++j) {
            if (find(i) == find(j))
                continue;
            if (auto chain = find_connection(lambda[i], lambda[j], ctx)) {
                result.chains.push_back({{i, j}, std::move(*chain)});
                parent[find(j)] = find(i);
            }
        }

    std::map<std::size_t, ConnectionClass> by_rep;
    for (std::size_t i = 0; i < lambda.size(); ++i)
        by_rep[find(i)].members.push_back(i);
    for (auto& [rep, cls] : by_rep) {
        std::sort(cls.members.begin(), cls.members.end());
        cls.representative = lambda[cls.members.front()];
        result.classes.push_back(std::move(cls));
    }
    std::sort(result.classes.begin(), result.classes.end(),
              [](const ConnectionClass& a, const ConnectionClass& b) {
                  return a.representative < b.representative;
              });
    return result;
}

}  // namespace bihom

#endif
