#include <catch2/catch_amalgamated.hpp>

#include "gcl/group.hpp"
#include "helpers.hpp"

using namespace gcl;
using namespace gcl::testutil;

TEST_CASE("Z2 validates as the smallest nontrivial group")
{
    auto g = validate_group(2, {0, 1, 1, 0}, 0, {"e", "a"});
    REQUIRE(g.n == 2);
    REQUIRE(g.op(1, 1) == 0);
    REQUIRE(g.inverse(1) == 1);
    REQUIRE(g.is_abelian());
}

TEST_CASE("a deliberately broken 3-element table is flagged with a witness")
{
    // e is an identity, a·b = a, b·a = b: associativity cannot hold
    std::vector<Id> mul{0, 1, 2,
                        1, 0, 1,
                        2, 2, 0};
    try {
        validate_group(3, mul, 0);
        FAIL("expected NotAssociative");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "NotAssociative");
        Id a = e.fail.witness.at("a").get<Id>();
        Id b = e.fail.witness.at("b").get<Id>();
        Id c = e.fail.witness.at("c").get<Id>();
        // the named triple really violates associativity
        REQUIRE(mul[mul[a * 3 + b] * 3 + c] != mul[a * 3 + mul[b * 3 + c]]);
    }
}

TEST_CASE("S3 built from permutation composition validates, order 6")
{
    auto s3 = symmetric3();
    REQUIRE(s3.n == 6);
    REQUIRE_FALSE(s3.is_abelian());
    // every element order divides 6
    for (Id a = 0; a < 6; ++a) {
        Id x = a;
        int k = 1;
        while (x != s3.e) {
            x = s3.op(x, a);
            ++k;
        }
        REQUIRE((k == 1 || k == 2 || k == 3));
    }
}

TEST_CASE("missing identity and missing inverses are diagnosed")
{
    try {
        validate_group(2, {0, 0, 0, 0});
        FAIL("expected NoIdentity");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "NoIdentity");
    }
    // {e, a} with a·a = a: a has no inverse
    try {
        validate_group(2, {0, 1, 1, 1}, 0);
        FAIL("expected NoInverse");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "NoInverse");
        REQUIRE(e.fail.witness.at("element").get<Id>() == 1);
    }
    try {
        validate_group(2, {0, 1, 1, 0}, 1);
        FAIL("expected NoIdentity for a wrong declared identity");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "NoIdentity");
    }
}

TEST_CASE("right actions validate and broken ones are rejected")
{
    auto z2 = cyclic_group(2);
    auto act = validate_action(z2, 4, {0, 2, 1, 3, 2, 0, 3, 1});
    REQUIRE(act.apply(0, 1) == 2);
    REQUIRE(action_is_free(act));
    REQUIRE(action_orbits(act).size() == 2);

    REQUIRE_THROWS_AS(validate_action(z2, 2, {1, 1, 0, 0}), ValidationError);
}

TEST_CASE("group extensions validate with exactness checks")
{
    auto z2 = cyclic_group(2);
    auto z4 = cyclic_group(4);
    auto ext = validate_group_extension(z2, z4, z2, {0, 2}, {0, 1, 0, 1});
    REQUIRE(ext.lift[0] == 0);
    REQUIRE(ext.lift[1] == 1);

    // wrong kernel image: inj lands outside ker(proj)
    try {
        validate_group_extension(z2, z4, z2, {0, 1}, {0, 1, 0, 1});
        FAIL("expected NotAnExtension");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "NotAnExtension");
    }
}

TEST_CASE("klein group is Z2 x Z2")
{
    auto k4 = klein_group();
    REQUIRE(k4.n == 4);
    REQUIRE(k4.is_abelian());
    for (Id a = 0; a < 4; ++a) REQUIRE(k4.op(a, a) == 0);
}
