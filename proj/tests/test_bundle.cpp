#include <catch2/catch_amalgamated.hpp>

#include "gcl/bundle.hpp"
#include "helpers.hpp"

using namespace gcl;
using namespace gcl::testutil;

namespace {

// P = Z4 over M = Z2, proj mod 2, Z2 acting by +2, one chart.
PrincipalBundleAtlas trivializable_atlas()
{
    auto z2 = cyclic_group(2);
    return validate_principal_bundle(
        4, 2, {0, 1, 0, 1}, validate_action(z2, 4, {0, 2, 1, 3, 2, 0, 3, 1}),
        {{0, 1}}, {{0, 2, 1, 3}}, {0}, 0);
}

}  // namespace

TEST_CASE("trivializable one-chart bundle validates with trivial cocycle")
{
    auto atlas = trivializable_atlas();
    REQUIRE(atlas.n_charts() == 1);
    for (Id m = 0; m < atlas.base; ++m)
        REQUIRE(atlas.bundle_cocycle(0, 0, m) == atlas.group().e);
    // fibers have |G| points
    for (Id m = 0; m < atlas.base; ++m) {
        int count = 0;
        for (Id p = 0; p < atlas.total; ++p)
            if (atlas.proj[p] == m) ++count;
        REQUIRE(count == atlas.group().n);
    }
    // chart inverse round-trips
    for (Id p = 0; p < atlas.total; ++p) {
        auto [m, g] = atlas.chart_coord[0][p];
        REQUIRE(atlas.chart_point(0, m, g) == p);
    }
}

TEST_CASE("Z4 acting on itself: orbits exceed fibers, freeness holds")
{
    auto z4 = cyclic_group(4);
    std::vector<Id> act(16);
    for (Id p = 0; p < 4; ++p)
        for (Id g = 0; g < 4; ++g) act[p * 4 + g] = (p + g) % 4;
    try {
        validate_principal_bundle(4, 2, {0, 1, 0, 1},
                                  validate_action(z4, 4, act), {{0, 1}},
                                  {{0, 1, 2, 3, 1, 2, 3, 0}}, {0}, 0);
        FAIL("expected OrbitFiberMismatch");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "OrbitFiberMismatch");
    }
}

TEST_CASE("a non-free action is rejected before the orbit check")
{
    auto z2 = cyclic_group(2);
    std::vector<Id> act{0, 0, 1, 1, 2, 2, 3, 3};  // a acts trivially
    try {
        validate_principal_bundle(4, 2, {0, 1, 0, 1},
                                  validate_action(z2, 4, act), {{0, 1}},
                                  {{0, 2, 1, 3}}, {0}, 0);
        FAIL("expected ActionNotFree");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "ActionNotFree");
    }
}

TEST_CASE("two-chart atlas twisted by a nonconstant g_12 returns the twist")
{
    auto z2 = cyclic_group(2);
    auto atlas = product_bundle(4, z2, {{0, 1, 2}, {1, 2, 3}},
                                [](int i, Id m) {
                                    return (i == 1 && m == 2) ? 1 : 0;
                                });
    REQUIRE(atlas.bundle_cocycle(0, 1, 1) == 0);
    REQUIRE(atlas.bundle_cocycle(0, 1, 2) == 1);
    REQUIRE(atlas.bundle_cocycle(1, 0, 2) == 1);
}

TEST_CASE("extracted bundle cocycle satisfies the triple identity")
{
    auto z2 = cyclic_group(2);
    auto atlas = product_bundle(3, z2, {{0, 1}, {1, 2}, {0, 1, 2}},
                                [](int i, Id m) {
                                    return (i == 2 && m == 1) ? 1 : 0;
                                });
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (Id m = 0; m < atlas.base; ++m) {
                    bool in = true;
                    for (int c : {i, j, k})
                        if (!std::binary_search(atlas.cover[c].begin(),
                                                atlas.cover[c].end(), m))
                            in = false;
                    if (!in) continue;
                    REQUIRE(atlas.group().op(atlas.bundle_cocycle(i, j, m),
                                             atlas.bundle_cocycle(j, k, m)) ==
                            atlas.bundle_cocycle(i, k, m));
                }
}

TEST_CASE("chart_lookup lists charts in index order with coordinates")
{
    auto z2 = cyclic_group(2);
    auto atlas = product_bundle(4, z2, {{0, 1, 2}, {1, 2, 3}},
                                [](int i, Id m) {
                                    return (i == 1 && m == 2) ? 1 : 0;
                                });
    // a point over U_1 \ U_2
    auto only = chart_lookup(atlas, 0);
    REQUIRE(only.size() == 1);
    REQUIRE(only[0].first == 0);

    // a point over the overlap: G-coordinates differ by g_12(m)
    Id p = atlas.chart_point(0, 2, 0);
    auto both = chart_lookup(atlas, p);
    REQUIRE(both.size() == 2);
    REQUIRE(both[0].first == 0);
    REQUIRE(both[1].first == 1);
    Id g0 = both[0].second.second, g1 = both[1].second.second;
    REQUIRE(g0 == atlas.group().op(atlas.bundle_cocycle(0, 1, 2), g1));

    auto single = chart_lookup(trivializable_atlas(), 3);
    REQUIRE(single.size() == 1);
}

TEST_CASE("cover completeness and chart equivariance are enforced")
{
    auto z2 = cyclic_group(2);
    try {
        validate_principal_bundle(4, 2, {0, 1, 0, 1},
                                  validate_action(z2, 4, {0, 2, 1, 3, 2, 0, 3, 1}),
                                  {{0}}, {{0, 2}}, {0}, 0);
        FAIL("expected CoverIncomplete");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "CoverIncomplete");
    }

    // a bijective but non-equivariant chart needs |G| > 2
    auto z4 = cyclic_group(4);
    std::vector<Id> act(16);
    for (Id p = 0; p < 4; ++p)
        for (Id g = 0; g < 4; ++g) act[p * 4 + g] = (p + g) % 4;
    try {
        validate_principal_bundle(4, 1, {0, 0, 0, 0},
                                  validate_action(z4, 4, act), {{0}},
                                  {{0, 1, 3, 2}}, {0}, 0);
        FAIL("expected ChartNotEquivariant");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "ChartNotEquivariant");
    }
}
