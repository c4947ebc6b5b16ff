#include <catch2/catch_amalgamated.hpp>

#include "gcl/gluing.hpp"
#include "gcl/iso.hpp"
#include "gcl/pbg.hpp"
#include "helpers.hpp"

using namespace gcl;
using namespace gcl::testutil;

TEST_CASE("transverse gauge groupoid of an extension is a PBG-groupoid")
{
    auto built = pbg_from_extension(z2z2_extension());
    REQUIRE(built.pbg.groupoid.n_arrows == 8);  // 16 pairs / |N|
    REQUIRE(built.pbg.groupoid.transitive());
    // re-validate explicitly: all four axioms by full iteration
    REQUIRE_NOTHROW(
        validate_pbg(built.pbg.groupoid, built.pbg.atlas, built.pbg.act));
}

TEST_CASE("with trivial G every groupoid over P is a PBG-groupoid")
{
    auto g1 = trivial_group();
    auto atlas = product_bundle(3, g1, {{0, 1, 2}});
    auto pg = pair_groupoid(3);
    std::vector<Id> act(pg.n_arrows);
    for (Id a = 0; a < pg.n_arrows; ++a) act[a] = a;
    REQUIRE_NOTHROW(validate_pbg(pg, atlas, act));
}

TEST_CASE("an action violating axiom (iii) on one pair is caught")
{
    // product-type groupoid over P = Z2 with fibre Z4, action twisted by a
    // unit-preserving involution of H that is not multiplicative
    auto g2 = cyclic_group(2);
    auto h4 = cyclic_group(4);
    auto atlas = product_bundle(1, g2, {{0}});
    IsometablicCocycle triv;
    triv.rho = constant_rho(1, g2, h4);
    triv.s.assign(1, std::vector<Id>(atlas.total, h4.e));
    auto glued = glue_groupoid(atlas, triv);

    std::vector<Id> f{0, 1, 3, 2};  // fixes e, swaps 2 and 3, f∘f = id
    std::vector<Id> act(glued.pbg.act);
    for (Id a = 0; a < glued.pbg.groupoid.n_arrows; ++a) {
        const auto& t = glued.reps[a];
        act[a * 2 + 1] = glued.arrow_of(t[0], atlas.act(t[1], 1), f[t[2]],
                                        atlas.act(t[3], 1), t[4], atlas.total);
    }
    try {
        validate_pbg(glued.pbg.groupoid, atlas, act);
        FAIL("expected AxiomViolated");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "AxiomViolated");
        REQUIRE(e.fail.witness.at("axiom") == "iii");
    }
}

TEST_CASE("trivial kernel: Omega is the pair groupoid of Q")
{
    auto built = pbg_from_extension(trivial_kernel_extension());
    REQUIRE(built.pbg.groupoid.n_arrows ==
            built.pbg.atlas.total * built.pbg.atlas.total);
    REQUIRE(groupoid_isomorphic(built.pbg.groupoid,
                                pair_groupoid(built.pbg.atlas.total)));
}

TEST_CASE("the G-action on Omega is well defined over all lifts and free")
{
    auto ext = z4_extension();
    auto built = pbg_from_extension(ext);
    const auto& Q = ext.q;
    const FiniteGroup& G = ext.groups.quotient;
    for (Id t = 0; t < Q.total; ++t)
        for (Id s = 0; s < Q.total; ++s) {
            Id a = built.pair_to_arrow[t * Q.total + s];
            for (Id g = 0; g < G.n; ++g)
                for (Id h = 0; h < ext.groups.middle.n; ++h) {
                    if (ext.groups.proj[h] != g) continue;
                    REQUIRE(built.pair_to_arrow[Q.act(t, h) * Q.total +
                                                Q.act(s, h)] ==
                            built.pbg.act_arrow(a, g));
                }
        }
    // freeness of the arrow action
    for (Id a = 0; a < built.pbg.groupoid.n_arrows; ++a)
        for (Id g = 1; g < G.n; ++g) REQUIRE(built.pbg.act_arrow(a, g) != a);
}

TEST_CASE("extension_from_pbg recovers an extension isomorphic to the input")
{
    for (auto ext : {z4_extension(), z2z2_extension(), z4_m2_extension(),
                     trivial_kernel_extension()}) {
        auto built = pbg_from_extension(ext);
        auto recovered = extension_from_pbg(built.pbg);
        auto reference = reference_extension(ext);
        auto iso = find_extension_iso(recovered, reference);
        REQUIRE(iso.has_value());
        REQUIRE_NOTHROW(validate_morphism(recovered.middle, reference.middle,
                                          iso->middle));
    }
}

TEST_CASE("arrow counts through the quotient: 8 -> 4 middle arrows")
{
    auto built = pbg_from_extension(z4_extension());
    auto recovered = extension_from_pbg(built.pbg);
    REQUIRE(built.pbg.groupoid.n_arrows == 8);
    REQUIRE(recovered.middle.n_arrows == 4);
    REQUIRE(recovered.quotient.n_arrows == 2);
}

TEST_CASE("trivial G: quotient is the pair groupoid of P, kernel is I(Omega)")
{
    auto g1 = trivial_group();
    auto atlas = product_bundle(2, g1, {{0, 1}});
    IsometablicCocycle triv;
    triv.rho = constant_rho(1, g1, cyclic_group(2));
    triv.s.assign(1, std::vector<Id>(atlas.total, 0));
    auto glued = glue_groupoid(atlas, triv);
    auto ext = extension_from_pbg(glued.pbg);
    REQUIRE(groupoid_isomorphic(ext.quotient, pair_groupoid(2)));
    REQUIRE(ext.kernel.groupoid.n_arrows ==
            static_cast<int>(inner_subgroupoid(glued.pbg.groupoid).embed.size()));
}

TEST_CASE("I(Omega) with the restricted action is a PBG-group-bundle")
{
    auto built = pbg_from_extension(z2z2_extension());
    REQUIRE_NOTHROW(inner_pbg_bundle(built.pbg));
    auto z4b = pbg_from_extension(z4_extension());
    auto bundle = inner_pbg_bundle(z4b.pbg);
    // fibers are groups of order |N|
    for (Id u = 0; u < z4b.pbg.atlas.total; ++u)
        REQUIRE(bundle.bundle.fiber_arrows(u).size() == 2);
}

TEST_CASE("nontransitive input is rejected by extension_from_pbg")
{
    auto g1 = trivial_group();
    auto atlas = product_bundle(2, g1, {{0, 1}});
    // disjoint union of two one-object Z2 groupoids over P = {0,1}
    FiniteGroupoid g;
    g.n_base = 2;
    g.n_arrows = 4;  // loops e0,a0 at 0 and e1,a1 at 1
    g.src = {0, 0, 1, 1};
    g.tgt = {0, 0, 1, 1};
    g.unit = {0, 2};
    g.inv = {0, 1, 2, 3};
    g.mul.assign(16, -1);
    auto set = [&](Id a, Id b, Id c) { g.mul[a * 4 + b] = c; };
    set(0, 0, 0); set(0, 1, 1); set(1, 0, 1); set(1, 1, 0);
    set(2, 2, 2); set(2, 3, 3); set(3, 2, 3); set(3, 3, 2);
    std::vector<Id> act{0, 1, 2, 3};
    auto pbg = validate_pbg(g, atlas, act);
    try {
        extension_from_pbg(pbg);
        FAIL("expected NotTransitive");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "NotTransitive");
    }
}
