#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "gcl/cohomology.hpp"
#include "helpers.hpp"

using namespace gcl;
using namespace gcl::testutil;

namespace {

struct Z3World {
    FiniteGroup G = cyclic_group(2);
    FiniteGroup H = cyclic_group(3);
    PrincipalBundleAtlas atlas = product_bundle(
        1, cyclic_group(2), {{0}, {0}},
        [](int i, Id) { return i == 1 ? 1 : 0; });
    RhoFamily rho = constant_rho(2, cyclic_group(2), cyclic_group(3),
                                 [](Id g, Id h) {
                                     return g == 0 ? h : (3 - h) % 3;
                                 });
};

// all degree-n cochains over the atlas: a free H value per (tuple, fiber),
// propagated by the parity rho
std::vector<Cochain> all_cochains(int degree, const RhoFamily& rho,
                                  const PrincipalBundleAtlas& atlas)
{
    const FiniteGroup& G = atlas.group();
    auto tuples = overlap_tuples(atlas, degree);
    struct Slot {
        std::vector<int> tuple;
        Id rep;
    };
    std::vector<Slot> slots;
    for (const auto& t : tuples)
        for (Id u : atlas.overlap(t)) {
            bool minimal = true;
            for (Id g = 0; g < G.n; ++g)
                if (atlas.act(u, g) < u) minimal = false;
            if (minimal) slots.push_back({t, u});
        }
    std::vector<Cochain> out;
    std::vector<Id> choice(slots.size(), 0);
    while (true) {
        std::map<std::vector<int>, std::vector<Id>> maps;
        for (const auto& t : tuples) maps[t] = std::vector<Id>(atlas.total, -1);
        for (size_t k = 0; k < slots.size(); ++k) {
            auto [ri, rj] = parity_indices(slots[k].tuple);
            for (Id g = 0; g < G.n; ++g)
                maps[slots[k].tuple][atlas.act(slots[k].rep, g)] =
                    rho.apply(ri, rj, G.inverse(g), choice[k]);
        }
        out.push_back(cochain_check(degree, rho, atlas, std::move(maps)));
        size_t k = 0;
        while (k < slots.size() && ++choice[k] == rho.h.n) choice[k++] = 0;
        if (k == slots.size()) break;
        if (slots.empty()) break;
    }
    return out;
}

}  // namespace

TEST_CASE("constant identity 0-cochain is valid for any rho")
{
    Z3World w;
    std::map<std::vector<int>, std::vector<Id>> maps;
    maps[{0}] = std::vector<Id>(w.atlas.total, w.H.e);
    maps[{1}] = std::vector<Id>(w.atlas.total, w.H.e);
    REQUIRE_NOTHROW(cochain_check(0, w.rho, w.atlas, maps));
}

TEST_CASE("degree-1 cochain from transition functions is valid")
{
    auto built = pbg_from_extension(z2z2_extension());
    auto pkg = derive_schisms(built.pbg);
    auto data = transition_functions(built.pbg, pkg);
    std::map<std::vector<int>, std::vector<Id>> maps;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            maps[{i, j}] = data.cocycle.s[i * 2 + j];
    REQUIRE_NOTHROW(
        cochain_check(1, data.cocycle.rho, built.pbg.atlas, maps));
}

TEST_CASE("degree-2 parity violation is witnessed")
{
    Z3World w;
    auto ones = all_cochains(1, w.rho, w.atlas);
    auto d = cech_differential(ones[1], w.atlas);
    REQUIRE_NOTHROW(cochain_check(2, w.rho, w.atlas, d.maps));
    auto corrupted = d.maps;
    corrupted[{0, 1, 0}][0] = w.H.op(corrupted[{0, 1, 0}][0], 1);
    try {
        cochain_check(2, w.rho, w.atlas, corrupted);
        FAIL("expected IsometablicityViolated");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "IsometablicityViolated");
        REQUIRE(e.fail.witness.contains("tuple"));
        REQUIRE(e.fail.witness.contains("g"));
    }
}

TEST_CASE("the degree-0 differential is e_{i1}^-1·e_{i0}")
{
    Z3World w;
    for (const auto& e : all_cochains(0, w.rho, w.atlas)) {
        auto d = cech_differential(e, w.atlas);
        for (Id u = 0; u < w.atlas.total; ++u)
            REQUIRE(d.maps.at({0, 1})[u] ==
                    w.H.op(w.H.inverse(e.maps.at({1})[u]),
                           e.maps.at({0})[u]));
    }
}

TEST_CASE("identity cochains map to identity cochains")
{
    Z3World w;
    std::map<std::vector<int>, std::vector<Id>> maps;
    maps[{0}] = std::vector<Id>(w.atlas.total, w.H.e);
    maps[{1}] = std::vector<Id>(w.atlas.total, w.H.e);
    auto e = cochain_check(0, w.rho, w.atlas, maps);
    REQUIRE(cochain_is_identity(cech_differential(e, w.atlas), w.atlas));
}

TEST_CASE("delta lands in the parity set and delta∘delta is the identity")
{
    // on every shipped-style two-chart world with |H| <= 4
    Z3World w;
    for (const auto& e : all_cochains(0, w.rho, w.atlas)) {
        auto d = cech_differential(e, w.atlas);
        REQUIRE_NOTHROW(cochain_check(1, w.rho, w.atlas, d.maps));
        REQUIRE(cochain_is_identity(cech_differential(d, w.atlas), w.atlas));
    }
    for (const auto& e : all_cochains(1, w.rho, w.atlas)) {
        auto d = cech_differential(e, w.atlas);
        REQUIRE_NOTHROW(cochain_check(2, w.rho, w.atlas, d.maps));
        REQUIRE(cochain_is_identity(cech_differential(d, w.atlas), w.atlas));
    }
}

TEST_CASE("nonabelian coefficients reject the high-degree differential")
{
    auto g1 = trivial_group();
    auto s3 = symmetric3();
    auto atlas = product_bundle(2, g1, {{0, 1}, {0, 1}});
    auto rho = constant_rho(2, g1, s3);
    // a degree-2 cochain: delta of some degree-1 cochain (allowed target)
    std::map<std::vector<int>, std::vector<Id>> maps;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::vector<Id> v(atlas.total, s3.e);
            if (i != j) v = {2, 3};
            maps[{i, j}] = v;
        }
    auto one = cochain_check(1, rho, atlas, maps);
    auto two = cech_differential(one, atlas);
    try {
        cech_differential(two, atlas);
        FAIL("expected NonabelianHighDegree");
    } catch (const ValidationError& e) {
        REQUIRE(e.fail.code == "NonabelianHighDegree");
    }
}

TEST_CASE("single chart: exactly one class")
{
    auto g2 = cyclic_group(2);
    auto atlas = product_bundle(2, g2, {{0, 1}});
    auto res = enumerate_h1(atlas, constant_rho(1, g2, g2));
    REQUIRE(res.cocycles.size() == 1);
    REQUIRE(res.n_strict == 1);
    REQUIRE(res.n_based == 1);
}

TEST_CASE("trivial G oracle: brute force over all s and all r")
{
    auto g1 = trivial_group();
    auto h2 = cyclic_group(2);
    auto atlas = product_bundle(2, g1, {{0, 1}, {0, 1}});
    auto rho = constant_rho(2, g1, h2);
    auto res = enumerate_h1(atlas, rho);

    // oracle: cocycles are arbitrary s_12 : {0,1} -> Z2 (4 of them);
    // coboundaries act by s'(u) = r_1(u)+s(u)+r_2(u) with all maps allowed
    std::set<std::pair<Id, Id>> classes;
    for (Id a = 0; a < 2; ++a)
        for (Id b = 0; b < 2; ++b) {
            std::pair<Id, Id> best{a, b};
            for (Id r10 = 0; r10 < 2; ++r10)
                for (Id r11 = 0; r11 < 2; ++r11)
                    for (Id r20 = 0; r20 < 2; ++r20)
                        for (Id r21 = 0; r21 < 2; ++r21)
                            best = std::min(
                                best, {static_cast<Id>((r10 + a + r20) % 2),
                                       static_cast<Id>((r11 + b + r21) % 2)});
            classes.insert(best);
        }
    REQUIRE(res.cocycles.size() == 4);
    REQUIRE(res.n_strict == static_cast<int>(classes.size()));
}

TEST_CASE("abelian oracle: class count = |cocycles| / |coboundary image|")
{
    auto g2 = cyclic_group(2);
    auto h2 = cyclic_group(2);
    auto atlas = product_bundle(4, g2, {{0, 1, 2}, {1, 2, 3}},
                                [](int i, Id m) {
                                    return (i == 1 && m == 2) ? 1 : 0;
                                });
    auto rho = constant_rho(2, g2, h2);
    auto res = enumerate_h1(atlas, rho);

    // coboundary image: all r_1^-1·r_2 restricted to the overlap, where r_i
    // is constant on fibers (trivial rho); overlap fibers {2,3} and {4,5}
    std::set<std::vector<Id>> image;
    for (Id r1a = 0; r1a < 2; ++r1a)
        for (Id r1b = 0; r1b < 2; ++r1b)
            for (Id r2a = 0; r2a < 2; ++r2a)
                for (Id r2b = 0; r2b < 2; ++r2b)
                    image.insert({static_cast<Id>((r1a + r2a) % 2),
                                  static_cast<Id>((r1b + r2b) % 2)});
    REQUIRE(res.cocycles.size() % image.size() == 0);
    REQUIRE(res.n_strict ==
            static_cast<int>(res.cocycles.size() / image.size()));
}

TEST_CASE("enumeration is independent of the iteration order")
{
    Z3World w;
    H1Options fwd, rev;
    rev.reversed = true;
    auto a = enumerate_h1(w.atlas, w.rho, fwd);
    auto b = enumerate_h1(w.atlas, w.rho, rev);
    REQUIRE(a.cocycles.size() == b.cocycles.size());
    for (size_t i = 0; i < a.cocycles.size(); ++i)
        REQUIRE(a.cocycles[i].s == b.cocycles[i].s);
    REQUIRE(a.n_strict == b.n_strict);
    REQUIRE(a.n_based == b.n_based);
    REQUIRE(a.strict_reps == b.strict_reps);
}

TEST_CASE("threaded enumeration matches the serial result")
{
    Z3World w;
    H1Options serial, par;
    par.threads = 3;
    auto a = enumerate_h1(w.atlas, w.rho, serial);
    auto b = enumerate_h1(w.atlas, w.rho, par);
    REQUIRE(a.cocycles.size() == b.cocycles.size());
    for (size_t i = 0; i < a.cocycles.size(); ++i)
        REQUIRE(a.cocycles[i].s == b.cocycles[i].s);
}

TEST_CASE("oversized instances hit the enumeration cap")
{
    auto g2 = cyclic_group(2);
    auto atlas = product_bundle(2, g2, {{0, 1}, {0, 1}});
    H1Options opt;
    opt.cap_enum = 4;
    REQUIRE_THROWS_AS(enumerate_h1(atlas, constant_rho(2, g2, g2), opt),
                      CapError);
}

TEST_CASE("classification audit: classes equal PBG-isomorphism types")
{
    SECTION("two-chart Z2 world")
    {
        auto g2 = cyclic_group(2);
        auto atlas = product_bundle(2, g2, {{0, 1}, {0, 1}});
        auto audit = classification_audit(atlas, constant_rho(2, g2, g2));
        CAPTURE(audit.report.to_json().dump());
        REQUIRE(audit.report.all_pass());
        REQUIRE(audit.n_classes == audit.n_iso_types);
    }
    SECTION("Z3 inversion world")
    {
        Z3World w;
        auto audit = classification_audit(w.atlas, w.rho);
        REQUIRE(audit.report.all_pass());
        REQUIRE(audit.n_classes == audit.n_iso_types);
    }
    SECTION("the basepoint-anchored relation can over-refine")
    {
        // with both chart basepoints in the same orbit position the
        // Prop-3.9-law moves cannot change s at the basepoint, splitting
        // the single isomorphism class into |H| anchored classes
        auto g2 = cyclic_group(2);
        auto h3 = cyclic_group(3);
        auto atlas = product_bundle(1, g2, {{0}, {0}});
        auto rho = constant_rho(2, g2, h3, [&](Id g, Id h) {
            return g == 0 ? h : h3.inverse(h);
        });
        auto audit = classification_audit(atlas, rho);
        REQUIRE(audit.report.all_pass());
        REQUIRE(audit.n_classes == 1);
        REQUIRE(audit.n_based_classes == 3);
    }
}
