// Reconstruction of PBG-group-bundles and PBG-groupoids from isometablic
// transition data, the equivalence isomorphism between glued groupoids, and
// the locality checks for the rho actions.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "gcl/base.hpp"
#include "gcl/pbg.hpp"
#include "gcl/transition.hpp"

namespace gcl {

// Diagonal family rho_i of G-actions on H by automorphisms, the input of
// the group-bundle gluing theorem.
struct DiagonalRho {
    int n_charts = 0;
    int n_g = 0;
    FiniteGroup h;
    std::vector<std::vector<Id>> tables;  // [i*n_g+g] -> perm of H

    Id apply(int i, Id g, Id x) const { return tables[i * n_g + g][x]; }
};

inline DiagonalRho diagonal_of(const RhoFamily& rho)
{
    DiagonalRho d;
    d.n_charts = rho.n_charts;
    d.n_g = rho.n_g;
    d.h = rho.h;
    d.tables.resize(static_cast<size_t>(d.n_charts) * d.n_g);
    for (int i = 0; i < d.n_charts; ++i)
        for (Id g = 0; g < d.n_g; ++g)
            d.tables[i * d.n_g + g] = rho.table(i, i, g);
    return d;
}

inline void validate_diagonal_rho(const DiagonalRho& rho, const FiniteGroup& G)
{
    const FiniteGroup& H = rho.h;
    if (rho.n_g != G.n ||
        static_cast<int>(rho.tables.size()) != rho.n_charts * G.n)
        throw ValidationError({"BadTable", "diagonal rho tables sized wrong", {}});
    for (int i = 0; i < rho.n_charts; ++i) {
        for (Id x = 0; x < H.n; ++x)
            if (rho.apply(i, G.e, x) != x)
                throw ValidationError(
                    {"NotAnAction", "rho_i(e) != id", {{"i", i}}});
        for (Id a = 0; a < G.n; ++a) {
            std::vector<char> seen(H.n, 0);
            for (Id x = 0; x < H.n; ++x) {
                Id y = rho.apply(i, a, x);
                if (y < 0 || y >= H.n || seen[y])
                    throw ValidationError({"BadTable",
                                           "rho_i(g) not a bijection",
                                           {{"i", i}, {"g", a}}});
                seen[y] = 1;
            }
            for (Id b = 0; b < G.n; ++b)
                for (Id x = 0; x < H.n; ++x)
                    if (rho.apply(i, a, rho.apply(i, b, x)) !=
                        rho.apply(i, G.op(a, b), x))
                        throw ValidationError({"NotAnAction",
                                               "rho_i(a)∘rho_i(b) != rho_i(ab)",
                                               {{"i", i}, {"a", a}, {"b", b}}});
            for (Id x = 0; x < H.n; ++x)
                for (Id y = 0; y < H.n; ++y)
                    if (rho.apply(i, a, H.op(x, y)) !=
                        H.op(rho.apply(i, a, x), rho.apply(i, a, y)))
                        throw ValidationError(
                            {"RhoNotMultiplicative",
                             "rho_i(g) is not a group automorphism",
                             {{"i", i}, {"g", a}, {"h1", x}, {"h2", y}}});
        }
    }
}

// An automorphism-valued cocycle alpha_ij : P_ij -> Aut(H).
struct AutCocycle {
    int n_charts = 0;
    FiniteGroup h;
    // [i*nc+j][u] -> perm of H; empty vector outside P_ij
    std::vector<std::vector<std::vector<Id>>> alpha;

    const std::vector<Id>& at(int i, int j, Id u) const
    {
        return alpha[i * n_charts + j][u];
    }
};

inline AutCocycle aut_cocycle_from_transition(const IsometablicCocycle& c,
                                              const PrincipalBundleAtlas& atlas)
{
    const int nc = atlas.n_charts();
    const FiniteGroup& H = c.rho.h;
    AutCocycle out;
    out.n_charts = nc;
    out.h = H;
    out.alpha.assign(static_cast<size_t>(nc) * nc,
                     std::vector<std::vector<Id>>(atlas.total));
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id u = 0; u < atlas.total; ++u) {
                Id sv = c.at(i, j, u);
                if (sv < 0) continue;
                auto& perm = out.alpha[i * nc + j][u];
                perm.resize(H.n);
                for (Id x = 0; x < H.n; ++x)
                    perm[x] = H.op(sv, H.op(x, H.inverse(sv)));
            }
    return out;
}

// A glued PBG-group-bundle. Elements are classes <i,(u,h)> with
// <j,(u,h)> = <i,(u, alpha_ij(u)(h))>; canonical representatives are
// lexicographically minimal triples (i, u, h).
struct GluedGroupBundle {
    PBGGroupBundle pbg;
    std::vector<std::array<Id, 3>> reps;  // element -> (i, u, h)
    std::vector<Id> class_of;             // encoded (i, u, h) -> element
    AutCocycle alpha;
    int n_h = 0;

    Id encode(int i, Id u, Id h, int P) const
    {
        return (i * P + u) * n_h + h;
    }
    // psi_i(u, h)
    Id element_of(int i, Id u, Id h, const PrincipalBundleAtlas& atlas) const
    {
        return class_of[encode(i, u, h, atlas.total)];
    }
    // psi_{i,u}^-1
    Id coord_in_chart(int i, Id elem) const
    {
        const auto& rep = reps[elem];
        return alpha.at(i, rep[0], rep[1])[rep[2]];
    }
};

inline GluedGroupBundle glue_group_bundle(const PrincipalBundleAtlas& atlas,
                                          const DiagonalRho& rho,
                                          const AutCocycle& alpha)
{
    const int nc = atlas.n_charts();
    const int P = atlas.total;
    const FiniteGroup& G = atlas.group();
    const FiniteGroup& H = rho.h;
    validate_diagonal_rho(rho, G);

    // alpha must be a cocycle: alpha_ij(u)∘alpha_jk(u) = alpha_ik(u)
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (int k = 0; k < nc; ++k)
                for (Id u = 0; u < P; ++u) {
                    if (alpha.at(i, j, u).empty() ||
                        alpha.at(j, k, u).empty() || alpha.at(i, k, u).empty())
                        continue;
                    for (Id h = 0; h < H.n; ++h)
                        if (alpha.at(i, j, u)[alpha.at(j, k, u)[h]] !=
                            alpha.at(i, k, u)[h])
                            throw ValidationError(
                                {"NotACocycle",
                                 "alpha_ij(u)∘alpha_jk(u) != alpha_ik(u)",
                                 {{"i", i}, {"j", j}, {"k", k}, {"u", u},
                                  {"h", h}}});
                }
    // isometablicity: alpha_ij(u·g)(rho_j(g^-1)(h)) = rho_i(g^-1)(alpha_ij(u)(h))
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id u = 0; u < P; ++u) {
                if (alpha.at(i, j, u).empty()) continue;
                for (Id g = 0; g < G.n; ++g) {
                    Id gi = G.inverse(g);
                    const auto& a_ug = alpha.at(i, j, atlas.act(u, g));
                    for (Id h = 0; h < H.n; ++h)
                        if (a_ug[rho.apply(j, gi, h)] !=
                            rho.apply(i, gi, alpha.at(i, j, u)[h]))
                            throw ValidationError(
                                {"NotIsometablic",
                                 "alpha_ij(u·g)∘rho_j(g^-1) != "
                                 "rho_i(g^-1)∘alpha_ij(u)",
                                 {{"i", i}, {"j", j}, {"u", u}, {"g", g},
                                  {"h", h}}});
                }
            }

    GluedGroupBundle out;
    out.alpha = alpha;
    out.n_h = H.n;
    out.class_of.assign(static_cast<size_t>(nc) * P * H.n, -1);

    // canonical representative of <i,(u,h)>: minimal (i', u, h') with
    // h' = alpha_{i'i}(u)(h)
    auto canon = [&](int i, Id u, Id h) -> std::array<Id, 3> {
        std::array<Id, 3> best{-1, -1, -1};
        for (int ip = 0; ip < nc; ++ip) {
            if (!atlas.chart_contains(ip, u)) continue;
            Id hp = alpha.at(ip, i, u)[h];
            std::array<Id, 3> cand{ip, u, hp};
            if (best[0] < 0 || cand < best) best = cand;
        }
        return best;
    };
    std::map<std::array<Id, 3>, Id> ids;
    for (int i = 0; i < nc; ++i)
        for (Id u : atlas.chart_points[i])
            for (Id h = 0; h < H.n; ++h) ids.emplace(canon(i, u, h), -1);
    Id next = 0;
    for (auto& [rep, id] : ids) {
        id = next++;
        out.reps.push_back(rep);
    }
    for (int i = 0; i < nc; ++i)
        for (Id u : atlas.chart_points[i])
            for (Id h = 0; h < H.n; ++h)
                out.class_of[out.encode(i, u, h, P)] = ids.at(canon(i, u, h));

    // groupoid structure: loops only, fiberwise product in any chart
    FiniteGroupoid bun;
    bun.n_base = P;
    bun.n_arrows = next;
    bun.src.resize(next);
    bun.tgt.resize(next);
    bun.inv.resize(next);
    bun.unit.assign(P, -1);
    bun.mul.assign(static_cast<size_t>(next) * next, -1);
    for (Id e = 0; e < next; ++e) {
        const auto& rep = out.reps[e];
        bun.src[e] = rep[1];
        bun.tgt[e] = rep[1];
        bun.inv[e] =
            out.class_of[out.encode(rep[0], rep[1], H.inverse(rep[2]), P)];
    }
    for (Id u = 0; u < P; ++u) {
        int i0 = 0;
        while (!atlas.chart_contains(i0, u)) ++i0;
        bun.unit[u] = out.class_of[out.encode(i0, u, H.e, P)];
    }
    for (Id e1 = 0; e1 < next; ++e1)
        for (Id e2 = 0; e2 < next; ++e2) {
            const auto& r1 = out.reps[e1];
            const auto& r2 = out.reps[e2];
            if (r1[1] != r2[1]) continue;
            Id u = r1[1];
            // express e2 in e1's chart, multiply there
            Id h2 = out.alpha.at(r1[0], r2[0], u)[r2[2]];
            bun.mul[e1 * next + e2] =
                out.class_of[out.encode(r1[0], u, H.op(r1[2], h2), P)];
        }

    // action <i,(u,h)>·g = <i,(u·g, rho_i(g^-1)(h))>
    std::vector<Id> act(static_cast<size_t>(next) * G.n);
    for (Id e = 0; e < next; ++e) {
        const auto& rep = out.reps[e];
        for (Id g = 0; g < G.n; ++g)
            act[e * G.n + g] = out.class_of[out.encode(
                rep[0], atlas.act(rep[1], g),
                rho.apply(rep[0], G.inverse(g), rep[2]), P)];
    }
    out.pbg = validate_pbg_group_bundle(
        validate_group_bundle(std::move(bun)), atlas, act);
    return out;
}

// A glued PBG-groupoid. Arrows are classes <i,u,h,v,j> with source v and
// target u; canonical representatives are lexicographically minimal tuples.
struct GluedGroupoid {
    PBGGroupoid pbg;
    std::vector<std::array<Id, 5>> reps;  // arrow -> (i, u, h, v, j)
    std::vector<Id> class_of;             // encoded tuple -> arrow
    IsometablicCocycle data;              // the (rho, s) that built it
    std::string provenance_hash;

    Id encode(int i, Id u, Id h, Id v, int j, int P) const
    {
        int nh = data.rho.h.n, nc = data.rho.n_charts;
        return (((i * P + u) * nh + h) * P + v) * nc + j;
    }
    Id arrow_of(int i, Id u, Id h, Id v, int j, int P) const
    {
        return class_of[encode(i, u, h, v, j, P)];
    }
};

inline GluedGroupoid glue_groupoid(const PrincipalBundleAtlas& atlas,
                                   const IsometablicCocycle& cocycle)
{
    validate_cocycle(cocycle, atlas);
    const int nc = atlas.n_charts();
    const int P = atlas.total;
    const FiniteGroup& G = atlas.group();
    const FiniteGroup& H = cocycle.rho.h;

    GluedGroupoid out;
    out.data = cocycle;
    out.provenance_hash = cocycle_fingerprint(cocycle);
    out.class_of.assign(static_cast<size_t>(nc) * P * H.n * P * nc, -1);

    // canonical representative: minimal (i', u, h', v, j') with
    // h' = s_{i'i}(u)·h·s_{jj'}(v)
    auto canon = [&](int i, Id u, Id h, Id v, int j) -> std::array<Id, 5> {
        std::array<Id, 5> best{-1, -1, -1, -1, -1};
        for (int ip = 0; ip < nc; ++ip) {
            if (!atlas.chart_contains(ip, u)) continue;
            for (int jp = 0; jp < nc; ++jp) {
                if (!atlas.chart_contains(jp, v)) continue;
                Id hp = H.op(cocycle.at(ip, i, u),
                             H.op(h, cocycle.at(j, jp, v)));
                std::array<Id, 5> cand{ip, u, hp, v, jp};
                if (best[0] < 0 || cand < best) best = cand;
            }
        }
        return best;
    };

    std::map<std::array<Id, 5>, Id> ids;
    for (int i = 0; i < nc; ++i)
        for (Id u : atlas.chart_points[i])
            for (int j = 0; j < nc; ++j)
                for (Id v : atlas.chart_points[j])
                    for (Id h = 0; h < H.n; ++h)
                        ids.emplace(canon(i, u, h, v, j), -1);
    Id next = 0;
    for (auto& [rep, id] : ids) {
        id = next++;
        out.reps.push_back(rep);
    }
    for (int i = 0; i < nc; ++i)
        for (Id u : atlas.chart_points[i])
            for (int j = 0; j < nc; ++j)
                for (Id v : atlas.chart_points[j])
                    for (Id h = 0; h < H.n; ++h)
                        out.class_of[out.encode(i, u, h, v, j, P)] =
                            ids.at(canon(i, u, h, v, j));

    FiniteGroupoid g;
    g.n_base = P;
    g.n_arrows = next;
    g.src.resize(next);
    g.tgt.resize(next);
    g.inv.resize(next);
    g.unit.assign(P, -1);
    g.mul.assign(static_cast<size_t>(next) * next, -1);
    for (Id a = 0; a < next; ++a) {
        const auto& t = out.reps[a];
        g.tgt[a] = t[1];
        g.src[a] = t[3];
        // <i,u,h,v,j>^-1 = <j,v,h^-1,u,i>
        g.inv[a] = out.arrow_of(t[4], t[3], H.inverse(t[2]), t[1], t[0], P);
    }
    for (Id u = 0; u < P; ++u) {
        int i0 = 0;
        while (!atlas.chart_contains(i0, u)) ++i0;
        g.unit[u] = out.arrow_of(i0, u, H.e, u, i0, P);
    }
    // <i,u,h1,v,j1>·<j2,v,h2,w,k> = <i,u,h1·s_{j1 j2}(v)·h2,w,k>
    for (Id a = 0; a < next; ++a)
        for (Id b = 0; b < next; ++b) {
            const auto& ta = out.reps[a];
            const auto& tb = out.reps[b];
            if (ta[3] != tb[1]) continue;
            Id v = ta[3];
            Id h = H.op(ta[2], H.op(cocycle.at(ta[4], tb[0], v), tb[2]));
            g.mul[a * next + b] =
                out.arrow_of(ta[0], ta[1], h, tb[3], tb[4], P);
        }

    // <i,u,h,v,j>·g = <i,u·g,rho_ij(g^-1)(h),v·g,j>
    std::vector<Id> act(static_cast<size_t>(next) * G.n);
    for (Id a = 0; a < next; ++a) {
        const auto& t = out.reps[a];
        for (Id gg = 0; gg < G.n; ++gg)
            act[a * G.n + gg] = out.arrow_of(
                t[0], atlas.act(t[1], gg),
                cocycle.rho.apply(t[0], t[4], G.inverse(gg), t[2]),
                atlas.act(t[3], gg), t[4], P);
    }
    out.pbg = validate_pbg(std::move(g), atlas, act);
    return out;
}

// The canonical section package of a glued groupoid:
// sigma_bar_i(u) = <i,u,e,u_i,i>, xi_i = <i,u_i,e,u_0,i_0>. Derived
// transition data of this package reproduces the input (rho, s) under the
// canonical vertex identification h -> <i_0,u_0,h,u_0,i_0>.
inline SectionPackage canonical_glue_package(const GluedGroupoid& glued)
{
    const PrincipalBundleAtlas& atlas = glued.pbg.atlas;
    const int nc = atlas.n_charts();
    const int P = atlas.total;
    int i0 = 0;
    while (!atlas.chart_contains(i0, atlas.u0)) ++i0;
    std::vector<std::vector<Id>> sigma_bar(nc, std::vector<Id>(P, -1));
    std::vector<Id> xi(nc);
    for (int i = 0; i < nc; ++i) {
        Id ui = atlas.basepoints[i];
        for (Id u : atlas.chart_points[i])
            sigma_bar[i][u] =
                glued.arrow_of(i, u, glued.data.rho.h.e, ui, i, P);
        xi[i] = glued.arrow_of(i, ui, glued.data.rho.h.e, atlas.u0, i0, P);
    }
    return package_from_sections(glued.pbg, sigma_bar, xi);
}

// Identification of the input coefficient group H with the vertex group of
// the glued groupoid at u0: h -> <i_0, u0, h, u0, i_0>.
inline std::vector<Id> glued_vertex_identification(const GluedGroupoid& glued,
                                                   const VertexGroup& vertex)
{
    const PrincipalBundleAtlas& atlas = glued.pbg.atlas;
    int i0 = 0;
    while (!atlas.chart_contains(i0, atlas.u0)) ++i0;
    std::vector<Id> h_to_vertex(glued.data.rho.h.n);
    for (Id h = 0; h < glued.data.rho.h.n; ++h)
        h_to_vertex[h] = vertex.index_of(
            glued.arrow_of(i0, atlas.u0, h, atlas.u0, i0, atlas.total));
    return h_to_vertex;
}

// Rewrites a cocycle valued in the glued vertex group back into input-H
// indices via the canonical identification.
inline IsometablicCocycle reindex_cocycle(const IsometablicCocycle& c,
                                          const std::vector<Id>& h_to_vertex,
                                          const FiniteGroup& target_h)
{
    const int nh = static_cast<int>(h_to_vertex.size());
    std::vector<Id> vertex_to_h(nh, -1);
    for (Id h = 0; h < nh; ++h) vertex_to_h[h_to_vertex[h]] = h;
    IsometablicCocycle out = c;
    for (auto& row : out.s)
        for (auto& v : row)
            if (v >= 0) v = vertex_to_h[v];
    out.rho.h = target_h;
    for (auto& t : out.rho.tables) {
        std::vector<Id> nt(nh);
        for (Id h = 0; h < nh; ++h) nt[h] = vertex_to_h[t[h_to_vertex[h]]];
        t = std::move(nt);
    }
    return out;
}

// Prop 5.2 equivalence isomorphism phi : glue(rho', s') -> glue(rho, s),
// <i,u,h,v,j> -> <i,u,r_i(u)·h·r_j(v)^-1,v,j>, where (rho', s') is the
// r-conjugate of (rho, s). Validated as a morphism commuting with both
// G-actions.
inline GroupoidMorphism equivalence_isomorphism(const GluedGroupoid& omega1,
                                                const GluedGroupoid& omega2,
                                                const ConjugationFamily& r)
{
    const PrincipalBundleAtlas& atlas = omega2.pbg.atlas;
    const int nc = atlas.n_charts();
    const int P = atlas.total;
    const FiniteGroup& G = atlas.group();
    const FiniteGroup& H = omega2.data.rho.h;
    const RhoFamily& rho = omega2.data.rho;
    const RhoFamily& rho_p = omega1.data.rho;

    if (auto fail = conjugation_law_violation(r, rho, atlas))
        throw ValidationError(
            {"HypothesisViolation",
             "r is not isometablic with respect to rho: " + fail->detail,
             fail->witness});
    // rho'_ij(g^-1)(h) = r_i(u_i·g)^-1 · rho_ij(g^-1)(h) · r_j(u_j·g)
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id g = 0; g < G.n; ++g) {
                Id gi = G.inverse(g);
                Id ri = r.at(i, atlas.act(atlas.basepoints[i], g));
                Id rj = r.at(j, atlas.act(atlas.basepoints[j], g));
                for (Id h = 0; h < H.n; ++h)
                    if (rho_p.apply(i, j, gi, h) !=
                        H.op(H.inverse(ri), H.op(rho.apply(i, j, gi, h), rj)))
                        throw ValidationError(
                            {"HypothesisViolation",
                             "rho' is not the r-conjugate of rho",
                             {{"i", i}, {"j", j}, {"g", g}, {"h", h}}});
            }
    // s'_ij = r_i^-1·s_ij·r_j
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id u = 0; u < P; ++u) {
                Id sv = omega2.data.at(i, j, u);
                Id sp = omega1.data.at(i, j, u);
                if ((sv < 0) != (sp < 0))
                    throw ValidationError({"HypothesisViolation",
                                           "cocycles live on different covers",
                                           {{"i", i}, {"j", j}, {"u", u}}});
                if (sv < 0) continue;
                if (sp != H.op(H.inverse(r.at(i, u)), H.op(sv, r.at(j, u))))
                    throw ValidationError(
                        {"HypothesisViolation",
                         "s' != r_i^-1·s_ij·r_j",
                         {{"i", i}, {"j", j}, {"u", u}}});
            }

    GroupoidMorphism phi;
    phi.base_map.resize(P);
    for (Id u = 0; u < P; ++u) phi.base_map[u] = u;
    phi.arrow_map.resize(omega1.pbg.groupoid.n_arrows);
    for (Id a = 0; a < omega1.pbg.groupoid.n_arrows; ++a) {
        const auto& t = omega1.reps[a];
        Id h = H.op(r.at(t[0], t[1]), H.op(t[2], H.inverse(r.at(t[4], t[3]))));
        phi.arrow_map[a] = omega2.arrow_of(t[0], t[1], h, t[3], t[4], P);
    }
    validate_morphism(omega1.pbg.groupoid, omega2.pbg.groupoid, phi);
    // bijectivity
    {
        std::vector<char> seen(omega2.pbg.groupoid.n_arrows, 0);
        for (Id a : phi.arrow_map) {
            if (seen[a])
                throw ValidationError(
                    {"HypothesisViolation", "phi is not injective", {}});
            seen[a] = 1;
        }
    }
    // equivariance phi(x·g) = phi(x)·g with each side's own action
    for (Id a = 0; a < omega1.pbg.groupoid.n_arrows; ++a)
        for (Id g = 0; g < G.n; ++g)
            if (phi.arrow_map[omega1.pbg.act_arrow(a, g)] !=
                omega2.pbg.act_arrow(phi.arrow_map[a], g))
                throw ValidationError({"HypothesisViolation",
                                       "phi does not commute with the "
                                       "G-actions",
                                       {{"arrow", a}, {"g", g}}});
    return phi;
}

// Locality of the rho actions (report style):
//  (a) the chart-local maps rho~_i agree on overlaps,
//  (b) rho~((u,g), eta) = eta·g globally, and rho~_i((u,e), eta) = eta,
//  (c) rho_ii recovered from the charts psi_i equals the package's rho_ii.
inline CheckReport verify_local_action_globality(const PBGGroupoid& pbg,
                                                 const SectionPackage& pkg,
                                                 const RhoFamily& rho)
{
    CheckReport rep;
    const FiniteGroupoid& Om = pbg.groupoid;
    const PrincipalBundleAtlas& atlas = pbg.atlas;
    const FiniteGroup& G = pbg.group();
    const VertexGroup& H = pkg.vertex;
    const int nc = atlas.n_charts();

    // psi_i(u, h) = sigma_i(u)·h·sigma_i(u)^-1 (an arrow loop at u)
    auto psi = [&](int i, Id u, Id h_idx) {
        Id s = pkg.sigma[i][u];
        return Om.compose(s, Om.compose(H.arrow_of(h_idx), Om.inverse(s)));
    };
    auto psi_inv = [&](int i, Id u, Id eta) {
        Id s = pkg.sigma[i][u];
        return H.index_of(Om.compose(Om.inverse(s), Om.compose(eta, s)));
    };
    auto rho_tilde = [&](int i, Id u, Id g, Id eta) {
        return psi(i, atlas.act(u, g),
                   rho.apply(i, i, G.inverse(g), psi_inv(i, u, eta)));
    };

    bool ok = true;
    json w;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j) {
            if (i == j) continue;
            for (Id u = 0; u < atlas.total && ok; ++u) {
                if (!atlas.chart_contains(i, u) || !atlas.chart_contains(j, u))
                    continue;
                for (Id eta : Om.hom(u, u)) {
                    if (!ok) break;
                    for (Id g = 0; g < G.n; ++g)
                        if (rho_tilde(i, u, g, eta) != rho_tilde(j, u, g, eta)) {
                            ok = false;
                            w = {{"i", i}, {"j", j}, {"u", u}, {"g", g},
                                 {"eta", eta}};
                            break;
                        }
                }
            }
        }
    ok ? rep.pass("local-overlap-agreement",
                  "rho~_i((u,g),eta) = rho~_j((u,g),eta) on overlaps")
       : rep.fail("local-overlap-agreement", "violated", w);

    ok = true;
    bool ok_unit = true;
    for (int i = 0; i < nc && ok; ++i)
        for (Id u : atlas.chart_points[i]) {
            if (!ok) break;
            for (Id eta : Om.hom(u, u)) {
                if (rho_tilde(i, u, G.e, eta) != eta) ok_unit = false;
                for (Id g = 0; g < G.n; ++g)
                    if (rho_tilde(i, u, g, eta) != pbg.act_arrow(eta, g)) {
                        ok = false;
                        w = {{"i", i}, {"u", u}, {"g", g}, {"eta", eta}};
                        break;
                    }
                if (!ok) break;
            }
        }
    ok ? rep.pass("global-action-identity", "rho~((u,g),eta) = eta·g")
       : rep.fail("global-action-identity", "violated", w);
    ok_unit ? rep.pass("unit-identity", "rho~_i((u,e),eta) = eta")
            : rep.fail("unit-identity", "violated", {});

    // chart recovery: rho_ii(g^-1)(h) = psi_{i,u_i·g}^-1(psi_{i,u_i}(h)·g)
    ok = true;
    for (int i = 0; i < nc && ok; ++i) {
        Id ui = atlas.basepoints[i];
        for (Id g = 0; g < G.n && ok; ++g)
            for (Id h = 0; h < H.size(); ++h) {
                Id recovered = psi_inv(i, atlas.act(ui, g),
                                       pbg.act_arrow(psi(i, ui, h), g));
                if (recovered != rho.apply(i, i, G.inverse(g), h)) {
                    ok = false;
                    w = {{"i", i}, {"g", g}, {"h", h}};
                    break;
                }
            }
    }
    ok ? rep.pass("chart-recovery",
                  "rho_ii(g^-1)(h) = psi_{i,u_i g}^-1(psi_{i,u_i}(h)·g)")
       : rep.fail("chart-recovery", "violated", w);

    // the charts are isometablic: psi_i(u·g, rho_ii(g^-1)(h)) = psi_i(u,h)·g
    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (Id u : atlas.chart_points[i]) {
            if (!ok) break;
            for (Id g = 0; g < G.n && ok; ++g)
                for (Id h = 0; h < H.size(); ++h)
                    if (psi(i, atlas.act(u, g),
                            rho.apply(i, i, G.inverse(g), h)) !=
                        pbg.act_arrow(psi(i, u, h), g)) {
                        ok = false;
                        w = {{"i", i}, {"u", u}, {"g", g}, {"h", h}};
                        break;
                    }
        }
    ok ? rep.pass("chart-isometablicity",
                  "psi_i(u·g, rho_ii(g^-1)(h)) = psi_i(u,h)·g")
       : rep.fail("chart-isometablicity", "violated", w);

    return rep;
}

}  // namespace gcl
