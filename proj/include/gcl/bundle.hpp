// Finite principal bundles P(M,G) with chart atlases, the discrete carrier
// for every cover-indexed construction in the library.
#pragma once

#include <algorithm>
#include <vector>

#include "gcl/base.hpp"
#include "gcl/group.hpp"

namespace gcl {

// A free right G-space P over M whose orbits are the fibers of proj,
// covered by equivariant charts phi_i : U_i x G -> proj^-1(U_i).
//
// The same chart subset U_i may appear several times in the cover; repeated
// charts are how a one-point base still carries nontrivial transition data.
struct PrincipalBundleAtlas {
    int total = 0;  // |P|
    int base = 0;   // |M|
    std::vector<Id> proj;
    GroupAction action;                    // G on P
    std::vector<std::vector<Id>> cover;    // U_i as sorted base subsets
    // charts[i][mi*|G|+g] = phi_i(cover[i][mi], g)
    std::vector<std::vector<Id>> charts;
    std::vector<Id> basepoints;  // u_i in P_i
    Id u0 = 0;                   // global basepoint

    // derived tables
    std::vector<std::vector<Id>> chart_points;  // P_i, sorted
    std::vector<std::vector<char>> in_chart;    // [i][p]
    // inverse charts: for p in P_i, (m, g) with phi_i(m, g) = p
    std::vector<std::vector<std::pair<Id, Id>>> chart_coord;  // [i][p]

    int n_charts() const { return static_cast<int>(cover.size()); }
    const FiniteGroup& group() const { return action.group; }

    Id act(Id p, Id g) const { return action.apply(p, g); }

    bool chart_contains(int i, Id p) const { return in_chart[i][p] != 0; }

    // Sorted points of the multi-overlap P_{i0...ik} (full fibers).
    std::vector<Id> overlap(const std::vector<int>& idx) const
    {
        std::vector<Id> pts;
        for (Id p = 0; p < total; ++p) {
            bool in = true;
            for (int i : idx)
                if (!chart_contains(i, p)) {
                    in = false;
                    break;
                }
            if (in) pts.push_back(p);
        }
        return pts;
    }

    std::vector<Id> overlap(int i, int j) const { return overlap({i, j}); }

    // phi_i(m, g); m must lie in U_i.
    Id chart_point(int i, Id m, Id g) const
    {
        const auto& u = cover[i];
        auto it = std::lower_bound(u.begin(), u.end(), m);
        return charts[i][(it - u.begin()) * group().n + g];
    }

    // Bundle cocycle g_ij : U_ij -> G, defined by
    // phi_i(m, g_ij(m)·g) = phi_j(m, g).
    Id bundle_cocycle(int i, int j, Id m) const
    {
        Id p = chart_point(j, m, group().e);
        return chart_coord[i][p].second;
    }
};

// Validates the bundle axioms by full iteration. Check order: action,
// freeness, orbit/fiber agreement, cover completeness, charts, basepoints.
inline PrincipalBundleAtlas validate_principal_bundle(
    int total, int base, const std::vector<Id>& proj, GroupAction action,
    std::vector<std::vector<Id>> cover, std::vector<std::vector<Id>> charts,
    std::vector<Id> basepoints, Id u0)
{
    if (action.carrier != total)
        throw ValidationError({"BadTable", "action carrier differs from |P|",
                               {{"carrier", action.carrier}, {"total", total}}});
    if (static_cast<int>(proj.size()) != total)
        throw ValidationError({"BadTable", "projection table has wrong size", {}});
    for (Id p = 0; p < total; ++p)
        if (proj[p] < 0 || proj[p] >= base)
            throw ValidationError(
                {"BadTable", "projection out of range", {{"p", p}}});

    const FiniteGroup& G = action.group;
    for (Id p = 0; p < total; ++p)
        for (Id g = 0; g < G.n; ++g)
            if (g != G.e && action.apply(p, g) == p)
                throw ValidationError({"ActionNotFree",
                                       "act(p, g) = p for g != e",
                                       {{"p", p}, {"g", g}}});

    // orbits must be exactly the fibers
    for (Id p = 0; p < total; ++p) {
        std::vector<char> orbit(total, 0);
        for (Id g = 0; g < G.n; ++g) orbit[action.apply(p, g)] = 1;
        for (Id q = 0; q < total; ++q)
            if (orbit[q] != (proj[q] == proj[p] ? 1 : 0))
                throw ValidationError({"OrbitFiberMismatch",
                                       "orbit of p differs from its fiber",
                                       {{"m", proj[p]}, {"p", p}, {"q", q}}});
    }

    std::vector<char> covered(base, 0);
    for (auto& u : cover) {
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        for (Id m : u) {
            if (m < 0 || m >= base)
                throw ValidationError(
                    {"BadTable", "cover point out of range", {{"m", m}}});
            covered[m] = 1;
        }
    }
    for (Id m = 0; m < base; ++m)
        if (!covered[m])
            throw ValidationError(
                {"CoverIncomplete", "base point not covered", {{"m", m}}});

    const int nc = static_cast<int>(cover.size());
    if (static_cast<int>(charts.size()) != nc)
        throw ValidationError({"BadTable", "one chart table per cover set", {}});

    PrincipalBundleAtlas atlas;
    atlas.total = total;
    atlas.base = base;
    atlas.proj = proj;
    atlas.action = std::move(action);
    const FiniteGroup& GG = atlas.group();  // `action` is moved from
    atlas.cover = std::move(cover);
    atlas.charts = std::move(charts);
    atlas.basepoints = std::move(basepoints);
    atlas.u0 = u0;
    atlas.chart_points.resize(nc);
    atlas.in_chart.assign(nc, std::vector<char>(total, 0));
    atlas.chart_coord.assign(
        nc, std::vector<std::pair<Id, Id>>(total, {-1, -1}));

    for (int i = 0; i < nc; ++i) {
        const auto& u = atlas.cover[i];
        const auto& tbl = atlas.charts[i];
        if (static_cast<int>(tbl.size()) !=
            static_cast<int>(u.size()) * GG.n)
            throw ValidationError({"BadTable",
                                   "chart table has wrong size",
                                   {{"chart", i}}});
        for (size_t mi = 0; mi < u.size(); ++mi) {
            for (Id g = 0; g < GG.n; ++g) {
                Id p = tbl[mi * GG.n + g];
                if (p < 0 || p >= total || proj[p] != u[mi])
                    throw ValidationError(
                        {"ChartMalformed",
                         "chart image misses its fiber",
                         {{"chart", i}, {"m", u[mi]}, {"g", g}}});
                if (atlas.chart_coord[i][p].first >= 0)
                    throw ValidationError({"ChartMalformed",
                                           "chart is not injective",
                                           {{"chart", i}, {"p", p}}});
                atlas.chart_coord[i][p] = {u[mi], g};
                atlas.in_chart[i][p] = 1;
            }
        }
        for (Id p = 0; p < total; ++p)
            if (std::binary_search(u.begin(), u.end(), proj[p]) &&
                !atlas.in_chart[i][p])
                throw ValidationError({"ChartMalformed",
                                       "chart does not cover its fiber set",
                                       {{"chart", i}, {"p", p}}});
        // G-equivariance phi_i(m, g·h) = phi_i(m, g)·h
        for (size_t mi = 0; mi < u.size(); ++mi)
            for (Id g = 0; g < GG.n; ++g)
                for (Id h = 0; h < GG.n; ++h)
                    if (tbl[mi * GG.n + GG.op(g, h)] !=
                        atlas.act(tbl[mi * GG.n + g], h))
                        throw ValidationError(
                            {"ChartNotEquivariant",
                             "phi_i(m, g·h) != phi_i(m, g)·h",
                             {{"i", i}, {"m", u[mi]}, {"g", g}, {"h", h}}});
        for (Id p = 0; p < total; ++p)
            if (atlas.in_chart[i][p]) atlas.chart_points[i].push_back(p);
    }

    if (static_cast<int>(atlas.basepoints.size()) != nc)
        throw ValidationError({"BadTable", "one basepoint per chart", {}});
    for (int i = 0; i < nc; ++i) {
        Id ui = atlas.basepoints[i];
        if (ui < 0 || ui >= total || !atlas.in_chart[i][ui])
            throw ValidationError({"BadTable",
                                   "basepoint not in its chart",
                                   {{"chart", i}, {"u_i", ui}}});
    }
    if (u0 < 0 || u0 >= total)
        throw ValidationError({"BadTable", "global basepoint out of range", {}});

    return atlas;
}

// All charts whose domain contains proj(u), with chart coordinates,
// in increasing chart order.
inline std::vector<std::pair<int, std::pair<Id, Id>>> chart_lookup(
    const PrincipalBundleAtlas& atlas, Id u)
{
    std::vector<std::pair<int, std::pair<Id, Id>>> out;
    for (int i = 0; i < atlas.n_charts(); ++i)
        if (atlas.chart_contains(i, u)) out.push_back({i, atlas.chart_coord[i][u]});
    return out;
}

}  // namespace gcl
