// Shared builders for the test suites: small groups, product bundles and
// the bundle-extension instances used across the tests.
#pragma once

#include <functional>
#include <numeric>
#include <vector>

#include "gcl/bundle.hpp"
#include "gcl/group.hpp"
#include "gcl/pbg.hpp"
#include "gcl/transition.hpp"

namespace gcl::testutil {

inline FiniteGroup klein_group()
{
    std::vector<Id> mul(16);
    for (Id a = 0; a < 4; ++a)
        for (Id b = 0; b < 4; ++b) mul[a * 4 + b] = a ^ b;
    return validate_group(4, mul, 0, {"e", "n", "a", "an"});
}

// S3 from permutation composition: element i is the i-th permutation of
// {0,1,2} in lexicographic order, (p·q)(x) = p(q(x)).
inline FiniteGroup symmetric3()
{
    std::vector<std::array<Id, 3>> perms;
    std::array<Id, 3> p{0, 1, 2};
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    auto index_of = [&](const std::array<Id, 3>& q) {
        for (size_t i = 0; i < perms.size(); ++i)
            if (perms[i] == q) return static_cast<Id>(i);
        return Id{-1};
    };
    std::vector<Id> mul(36);
    for (size_t a = 0; a < 6; ++a)
        for (size_t b = 0; b < 6; ++b) {
            std::array<Id, 3> comp;
            for (int x = 0; x < 3; ++x) comp[x] = perms[a][perms[b][x]];
            mul[a * 6 + b] = index_of(comp);
        }
    return validate_group(6, mul, 0);
}

// Product bundle P = M x G with point id m*|G| + s and chart twists
// phi_i(m, g) = m*|G| + t_i(m)·g. Each chart's basepoint is its first
// point at g = e; u0 is the basepoint of chart 0.
inline PrincipalBundleAtlas product_bundle(
    int m_size, const FiniteGroup& G, std::vector<std::vector<Id>> cover,
    const std::function<Id(int, Id)>& twist = {})
{
    const int total = m_size * G.n;
    std::vector<Id> proj(total);
    std::vector<Id> act(static_cast<size_t>(total) * G.n);
    for (Id m = 0; m < m_size; ++m)
        for (Id s = 0; s < G.n; ++s) {
            Id p = m * G.n + s;
            proj[p] = m;
            for (Id g = 0; g < G.n; ++g) act[p * G.n + g] = m * G.n + G.op(s, g);
        }
    std::vector<std::vector<Id>> charts(cover.size());
    std::vector<Id> basepoints(cover.size());
    for (size_t i = 0; i < cover.size(); ++i) {
        auto sorted = cover[i];
        std::sort(sorted.begin(), sorted.end());
        charts[i].resize(sorted.size() * G.n);
        for (size_t mi = 0; mi < sorted.size(); ++mi)
            for (Id g = 0; g < G.n; ++g) {
                Id t = twist ? twist(static_cast<int>(i), sorted[mi]) : G.e;
                charts[i][mi * G.n + g] = sorted[mi] * G.n + G.op(t, g);
            }
        basepoints[i] = charts[i][0];
    }
    Id u0 = basepoints[0];
    return validate_principal_bundle(total, m_size, proj,
                                     validate_action(G, total, act), cover,
                                     charts, basepoints, u0);
}

// N = Z2 >-> Z4 ->> Z2 over a point, Q = Z4 with two charts offset by 1.
inline BundleExtension z4_extension()
{
    BundleExtension ext;
    ext.groups = validate_group_extension(cyclic_group(2), cyclic_group(4),
                                          cyclic_group(2), {0, 2},
                                          {0, 1, 0, 1});
    ext.q = product_bundle(1, ext.groups.middle, {{0}, {0}},
                           [](int i, Id) { return i == 0 ? 0 : 1; });
    return ext;
}

// N = Z2 >-> Z2 x Z2 ->> Z2 over a point (split), charts offset by 2.
inline BundleExtension z2z2_extension()
{
    BundleExtension ext;
    ext.groups = validate_group_extension(cyclic_group(2), klein_group(),
                                          cyclic_group(2), {0, 1},
                                          {0, 0, 1, 1});
    ext.q = product_bundle(1, ext.groups.middle, {{0}, {0}},
                           [](int i, Id) { return i == 0 ? 0 : 2; });
    return ext;
}

// N = Z2 >-> Z4 ->> Z2 over a two-point base, |Q| = 8.
inline BundleExtension z4_m2_extension()
{
    BundleExtension ext;
    ext.groups = validate_group_extension(cyclic_group(2), cyclic_group(4),
                                          cyclic_group(2), {0, 2},
                                          {0, 1, 0, 1});
    ext.q = product_bundle(2, ext.groups.middle, {{0, 1}, {1}},
                           [](int i, Id m) { return (i == 1 && m == 1) ? 1 : 0; });
    return ext;
}

// Trivial kernel: N = 1 >-> Z2 ->> Z2, Q = M x Z2 over two points.
inline BundleExtension trivial_kernel_extension()
{
    BundleExtension ext;
    ext.groups = validate_group_extension(trivial_group(), cyclic_group(2),
                                          cyclic_group(2), {0}, {0, 1});
    ext.q = product_bundle(2, ext.groups.middle, {{0, 1}});
    return ext;
}

// Constant rho family: rho_ij(g) = table chosen per g, same for all (i,j).
inline RhoFamily constant_rho(int n_charts, const FiniteGroup& G,
                              const FiniteGroup& H,
                              const std::function<Id(Id, Id)>& action = {})
{
    RhoFamily rho;
    rho.n_charts = n_charts;
    rho.n_g = G.n;
    rho.h = H;
    rho.tables.assign(static_cast<size_t>(n_charts) * n_charts * G.n,
                      std::vector<Id>(H.n));
    for (int i = 0; i < n_charts; ++i)
        for (int j = 0; j < n_charts; ++j)
            for (Id g = 0; g < G.n; ++g)
                for (Id h = 0; h < H.n; ++h)
                    rho.tables[(i * n_charts + j) * G.n + g][h] =
                        action ? action(g, h) : h;
    return rho;
}

}  // namespace gcl::testutil
