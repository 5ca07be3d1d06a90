#include <doctest.h>

#include <random>

#include "bihom/connections.hpp"
#include "bihom/io.hpp"
#include "bihom/roots.hpp"
#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace bihom;
using testutil::load_fixture;
using testutil::qv;

namespace {

struct Setup {
    SuperAlgebra algebra;
    SplitDecomposition d;
    ConnectionContext ctx;
};

Setup setup(const char* name, bool strict = true)
{
    SuperAlgebra a = load_fixture(name);
    std::vector<Vec> gens;
    for (std::size_t i : *a.h_indices)
        gens.push_back(a.basis_vector(i));
    SplitDecomposition d = find_root_system(a, Subspace::span(a.dim, gens));
    ConnectionContext ctx = ConnectionContext::from(d, 64, strict);
    return {std::move(a), std::move(d), std::move(ctx)};
}

}  // namespace

TEST_CASE("root orbits")
{
    SUBCASE("identity maps give a singleton orbit")
    {
        const Setup s = setup("gl11.json");
        const auto orbit = root_orbit(RootFunctional{qv({"1", "-1"})}, s.ctx);
        CHECK(orbit.elements.size() == 1);
    }
    SUBCASE("the 5-dim fixture's sign flip gives a two-element orbit")
    {
        const Setup s = setup("e5.json");
        const auto orbit = root_orbit(RootFunctional{qv({"2"})}, s.ctx);
        CHECK(orbit.elements.size() == 2);
        CHECK(orbit.contains(RootFunctional{qv({"2"})}));
        CHECK(orbit.contains(RootFunctional{qv({"-2"})}));
        CHECK(*orbit.exponents_of(RootFunctional{qv({"-2"})}) == std::make_pair(0L, 1L));
    }
    SUBCASE("a scaling action diverges at the bound")
    {
        ConnectionContext ctx;
        ctx.phi_h = Matrix::diagonal(qv({"2"}));
        ctx.psi_h = Matrix::identity(1);
        ctx.phi_h_inv = Matrix::diagonal(qv({"1/2"}));
        ctx.psi_h_inv = Matrix::identity(1);
        ctx.orbit_bound = 16;
        CHECK_THROWS_AS((void)root_orbit(RootFunctional{qv({"1"})}, ctx), Error);
    }
}

TEST_CASE("find_connection")
{
    SUBCASE("reflexivity is the trivial direct clause")
    {
        const Setup s = setup("gl11.json");
        const RootFunctional gamma{qv({"1", "-1"})};
        const auto chain = find_connection(gamma, gamma, s.ctx);
        REQUIRE(chain.has_value());
        CHECK(chain->direct);
        CHECK(chain->epsilon == 1);
        CHECK(chain->z1 == 0);
        CHECK(chain->z2 == 0);
        CHECK(!replay_failure(gamma, gamma, *chain, s.ctx).has_value());
    }
    SUBCASE("gl(1|1): the opposite root is reached directly with epsilon -1")
    {
        const Setup s = setup("gl11.json");
        const RootFunctional gamma{qv({"1", "-1"})};
        const auto chain = find_connection(gamma, gamma.negated(), s.ctx);
        REQUIRE(chain.has_value());
        CHECK(chain->direct);
        CHECK(chain->epsilon == -1);
        CHECK(!replay_failure(gamma, gamma.negated(), *chain, s.ctx).has_value());
    }
    SUBCASE("5-dim fixture: the even root connects to the odd root through a length-2 chain")
    {
        const Setup s = setup("e5.json");
        const RootFunctional alpha{qv({"2"})};
        const RootFunctional beta{qv({"-1"})};
        const auto chain = find_connection(alpha, beta, s.ctx);
        REQUIRE(chain.has_value());
        CHECK(!chain->direct);
        REQUIRE(chain->alphas.size() == 2);
        CHECK(chain->alphas[0].values == qv({"-2"}));
        CHECK(chain->alphas[1].values == qv({"-1"}));
        REQUIRE(chain->partial_sums.size() == 1);
        CHECK(chain->partial_sums[0].values == qv({"-1"}));
        CHECK(chain->entry_n == 0);
        CHECK(chain->entry_r == 1);
        CHECK(chain->exit_epsilon == 1);
        CHECK(chain->exit_m == 0);
        CHECK(chain->exit_s == 0);
        CHECK(!replay_failure(alpha, beta, *chain, s.ctx).has_value());
    }
    SUBCASE("the replayer rejects corrupted chains")
    {
        const Setup s = setup("e5.json");
        const RootFunctional alpha{qv({"2"})};
        const RootFunctional beta{qv({"-1"})};
        auto chain = find_connection(alpha, beta, s.ctx);
        REQUIRE(chain.has_value());
        ConnectionChain bad = *chain;
        bad.partial_sums[0].values = qv({"3"});
        CHECK(replay_failure(alpha, beta, bad, s.ctx).has_value());
        ConnectionChain bad2 = *chain;
        bad2.alphas[1].values = qv({"7"});
        CHECK(replay_failure(alpha, beta, bad2, s.ctx).has_value());
    }
}

TEST_CASE("connection_classes")
{
    SUBCASE("5-dim fixture: one class of size four")
    {
        const Setup s = setup("e5.json");
        const auto partition = connection_classes(s.d, s.ctx);
        REQUIRE(partition.classes.size() == 1);
        CHECK(partition.classes[0].members.size() == 4);
        for (const auto& [pair, chain] : partition.chains) {
            const auto fail = replay_failure(s.d.roots[pair.first].root,
                                             s.d.roots[pair.second].root, chain, s.ctx);
            CHECK(!fail.has_value());
        }
    }
    SUBCASE("gl(1|1): a single class")
    {
        const Setup s = setup("gl11.json");
        CHECK(connection_classes(s.d, s.ctx).classes.size() == 1);
    }
    SUBCASE("the two-block sum splits into two classes")
    {
        const Setup s = setup("two-block.json");
        const auto partition = connection_classes(s.d, s.ctx);
        REQUIRE(partition.classes.size() == 2);
        CHECK(partition.classes[0].members.size() == 2);
        CHECK(partition.classes[1].members.size() == 2);
    }
    SUBCASE("classes partition the root list")
    {
        for (const char* name : {"e5.json", "gl11.json", "two-block.json",
                                 "gl11-twisted.json", "sl2-leibniz-twisted.json"}) {
            CAPTURE(name);
            const Setup s = setup(name);
            const auto partition = connection_classes(s.d, s.ctx);
            std::vector<bool> seen(s.d.roots.size(), false);
            for (const auto& cls : partition.classes)
                for (std::size_t m : cls.members) {
                    CHECK(!seen[m]);
                    seen[m] = true;
                }
            for (bool b : seen)
                CHECK(b);
        }
    }
}

TEST_CASE("connectivity agrees with the exhaustive enumeration oracle")
{
    for (const char* name : {"e5.json", "gl11.json", "two-block.json"}) {
        CAPTURE(name);
        const Setup s = setup(name);
        for (std::size_t i = 0; i < s.d.roots.size(); ++i)
            for (std::size_t j = 0; j < s.d.roots.size(); ++j) {
                const auto chain =
                    find_connection(s.d.roots[i].root, s.d.roots[j].root, s.ctx);
                const bool expected =
                    oracle::connected(s.d, s.d.roots[i].root, s.d.roots[j].root, true);
                CHECK(chain.has_value() == expected);
            }
    }
}

TEST_CASE("connection search is deterministic")
{
    const Setup s1 = setup("e5.json");
    const Setup s2 = setup("e5.json");
    const auto p1 = connection_classes(s1.d, s1.ctx);
    const auto p2 = connection_classes(s2.d, s2.ctx);
    CHECK(classes_json(s1.d, p1).dump() == classes_json(s2.d, p2).dump());
}

TEST_CASE("refined connections track parity")
{
    const Setup s = setup("e5.json");
    // Lambda^{not-J} on the canonical fixture: the even roots +-2.
    RefinedChainPolicy policy;
    policy.allow(RootFunctional{qv({"2"})}, Parity::even);
    policy.allow(RootFunctional{qv({"-2"})}, Parity::even);

    SUBCASE("matching parity, trivial orbit chain")
    {
        const auto chain =
            find_nj_connection(RootFunctional{qv({"2"})}, Parity::even,
                               RootFunctional{qv({"-2"})}, Parity::even, policy, s.ctx);
        REQUIRE(chain.has_value());
        CHECK(chain->alphas.size() == 1);
        REQUIRE(chain->parity_trace.has_value());
        CHECK(!replay_nj_failure(RootFunctional{qv({"2"})}, Parity::even,
                                 RootFunctional{qv({"-2"})}, Parity::even, *chain, policy,
                                 s.ctx)
                   .has_value());
    }
    SUBCASE("an even source cannot reach an odd target through even steps")
    {
        const auto chain =
            find_nj_connection(RootFunctional{qv({"2"})}, Parity::even,
                               RootFunctional{qv({"-1"})}, Parity::odd, policy, s.ctx);
        CHECK(!chain.has_value());
    }
    SUBCASE("odd targets are reachable when odd steps are allowed")
    {
        RefinedChainPolicy wide = policy;
        wide.allow(RootFunctional{qv({"1"})}, Parity::odd);
        wide.allow(RootFunctional{qv({"-1"})}, Parity::odd);
        const auto chain =
            find_nj_connection(RootFunctional{qv({"2"})}, Parity::even,
                               RootFunctional{qv({"-1"})}, Parity::odd, wide, s.ctx);
        REQUIRE(chain.has_value());
        REQUIRE(chain->parity_trace.has_value());
        Parity acc = Parity::even;
        for (std::size_t k = 1; k < chain->parity_trace->size(); ++k)
            acc = acc + (*chain->parity_trace)[k];
        CHECK(acc == Parity::odd);
        CHECK(!replay_nj_failure(RootFunctional{qv({"2"})}, Parity::even,
                                 RootFunctional{qv({"-1"})}, Parity::odd, *chain, wide,
                                 s.ctx)
                   .has_value());
    }
}

TEST_CASE("connectivity is symmetric on honest inputs")
{
    // the relation is an equivalence on a split regular algebra, so the
    // one-directional search must agree with its reverse
    std::mt19937 rng(0xace);
    for (int trial = 0; trial < 25; ++trial) {
        const auto fixture = testutil::random_twisted_fixture(rng, 8);
        const SplitDecomposition d = find_root_system(fixture.algebra, fixture.h);
        const ConnectionContext ctx = ConnectionContext::from(d);
        for (std::size_t i = 0; i < d.roots.size(); ++i)
            for (std::size_t j = 0; j < d.roots.size(); ++j) {
                const bool forward =
                    find_connection(d.roots[i].root, d.roots[j].root, ctx).has_value();
                const bool backward =
                    find_connection(d.roots[j].root, d.roots[i].root, ctx).has_value();
                CHECK(forward == backward);
            }
    }
}

TEST_CASE("a three-block twelve-dimensional sum decomposes into three classes")
{
    // sl2 + gl(1|1) + gl(1|1) + an abelian line, twisted blockwise
    std::mt19937 rng(777);
    SuperAlgebra sl2 = testutil::make_sl2();
    SuperAlgebra gl = testutil::make_gl11();

    const std::size_t dim = 12;
    std::vector<Parity> parities;
    std::vector<const SuperAlgebra*> blocks = {&sl2, &gl, &gl};
    for (const SuperAlgebra* b : blocks)
        parities.insert(parities.end(), b->parity.begin(), b->parity.end());
    parities.push_back(Parity::even);  // abelian line
    SuperAlgebra base = SuperAlgebra::make("three blocks", parities);
    std::size_t offset = 0;
    std::vector<Vec> h_gens;
    const std::vector<std::vector<std::size_t>> cartans = {{0}, {0, 1}, {0, 1}};
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const SuperAlgebra& b = *blocks[bi];
        for (std::size_t i = 0; i < b.dim; ++i)
            for (std::size_t j = 0; j < b.dim; ++j) {
                Vec lifted = zero_vec(dim);
                for (std::size_t k = 0; k < b.dim; ++k)
                    lifted[offset + k] = b.basis_bracket(i, j)[k];
                base.set_bracket(offset + i, offset + j, std::move(lifted));
            }
        for (std::size_t c : cartans[bi])
            h_gens.push_back(unit_vec(dim, offset + c));
        offset += b.dim;
    }
    h_gens.push_back(unit_vec(dim, 11));

    // torus entries act on the root vectors only: sl2 e,f at 1,2; first
    // gl(1|1) e,f at 5,6; second at 9,10
    Vec phi_diag(dim, Rat(1)), psi_diag(dim, Rat(1));
    phi_diag[1] = testutil::q("3/2");
    phi_diag[2] = testutil::q("2/3");
    psi_diag[5] = testutil::q("5");
    psi_diag[6] = testutil::q("1/5");
    phi_diag[9] = testutil::q("7/4");
    phi_diag[10] = testutil::q("4/7");
    const SuperAlgebra a =
        yau_twist(base, Matrix::diagonal(phi_diag), Matrix::diagonal(psi_diag));

    const SplitDecomposition d = find_root_system(a, Subspace::span(dim, h_gens));
    CHECK(d.split_ok);
    CHECK(d.roots.size() == 6);
    const ConnectionContext ctx = ConnectionContext::from(d);
    const ConnectionPartition partition = connection_classes(d, ctx);
    CHECK(partition.classes.size() == 3);
    const PrimaryDecomposition primary = primary_decomposition(a, d, partition);
    CHECK(primary.spanning.ok);
    for (std::size_t i = 0; i < primary.ideals.size(); ++i) {
        CHECK(primary.ideals[i].is_ideal());
        for (std::size_t j = 0; j < primary.ideals.size(); ++j)
            if (i != j)
                CHECK(primary.orthogonality[i][j].ok);
    }
}

TEST_CASE("relaxed exponent policy only widens the relation")
{
    std::mt19937 rng(1999);
    for (int trial = 0; trial < 20; ++trial) {
        const auto fixture = testutil::random_twisted_fixture(rng, 7);
        const SplitDecomposition d = find_root_system(fixture.algebra, fixture.h);
        const ConnectionContext strict_ctx = ConnectionContext::from(d, 64, true);
        const ConnectionContext relaxed_ctx = ConnectionContext::from(d, 64, false);
        for (std::size_t i = 0; i < d.roots.size(); ++i)
            for (std::size_t j = 0; j < d.roots.size(); ++j) {
                if (find_connection(d.roots[i].root, d.roots[j].root, strict_ctx))
                    CHECK(find_connection(d.roots[i].root, d.roots[j].root, relaxed_ctx)
                              .has_value());
            }
    }
}
