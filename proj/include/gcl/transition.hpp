// Transition data for PBG-groupoids: schisms, sections, isometablic
// transition functions, the rho action families, conjugation maps and
// systems of transition data.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gcl/base.hpp"
#include "gcl/pbg.hpp"

namespace gcl {

// The family rho_ij : G -> Bij(H), stored as permutation tables indexed by
// (i, j, g). rho(i,j,g) is the operator at group element g; the identities
// from the source material are written with explicit inverses, so code
// evaluating "rho_ij(g^-1)" calls apply(i, j, G.inverse(g), ·).
struct RhoFamily {
    int n_charts = 0;
    int n_g = 0;
    FiniteGroup h;
    std::vector<std::vector<Id>> tables;  // [(i*nc+j)*n_g + g] -> perm of H

    const std::vector<Id>& table(int i, int j, Id g) const
    {
        return tables[(i * n_charts + j) * n_g + g];
    }
    Id apply(int i, int j, Id g, Id x) const { return table(i, j, g)[x]; }
};

// Validation of a rho family: bijections, identity at e, the action
// property rho(a)∘rho(b) = rho(ab), and the cocycle-morphism property
//   rho_ij(g^-1)(h1·h2) = rho_ik(g^-1)(h1)·rho_kj(g^-1)(h2)
// over all index triples (the gluing theorem uses it without overlap
// restrictions).
inline void validate_rho(const RhoFamily& rho, const FiniteGroup& G)
{
    const int nc = rho.n_charts;
    const FiniteGroup& H = rho.h;
    if (rho.n_g != G.n)
        throw ValidationError({"BadTable", "rho group size mismatch", {}});
    if (static_cast<int>(rho.tables.size()) != nc * nc * G.n)
        throw ValidationError({"BadTable", "rho table count mismatch", {}});
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) {
            for (Id g = 0; g < G.n; ++g) {
                const auto& t = rho.table(i, j, g);
                if (static_cast<int>(t.size()) != H.n)
                    throw ValidationError({"BadTable", "rho permutation sized "
                                                       "wrong",
                                           {{"i", i}, {"j", j}, {"g", g}}});
                std::vector<char> seen(H.n, 0);
                for (Id x = 0; x < H.n; ++x) {
                    if (t[x] < 0 || t[x] >= H.n || seen[t[x]])
                        throw ValidationError({"BadTable",
                                               "rho table not a bijection",
                                               {{"i", i}, {"j", j}, {"g", g}}});
                    seen[t[x]] = 1;
                }
            }
            for (Id x = 0; x < H.n; ++x)
                if (rho.apply(i, j, G.e, x) != x)
                    throw ValidationError({"NotAnAction",
                                           "rho_ij(e) != id",
                                           {{"i", i}, {"j", j}}});
            for (Id a = 0; a < G.n; ++a)
                for (Id b = 0; b < G.n; ++b)
                    for (Id x = 0; x < H.n; ++x)
                        if (rho.apply(i, j, a, rho.apply(i, j, b, x)) !=
                            rho.apply(i, j, G.op(a, b), x))
                            throw ValidationError(
                                {"NotAnAction",
                                 "rho_ij(a)∘rho_ij(b) != rho_ij(a·b)",
                                 {{"i", i}, {"j", j}, {"a", a}, {"b", b}}});
        }
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (int k = 0; k < nc; ++k)
                for (Id g = 0; g < G.n; ++g) {
                    Id gi = G.inverse(g);
                    for (Id h1 = 0; h1 < H.n; ++h1)
                        for (Id h2 = 0; h2 < H.n; ++h2)
                            if (rho.apply(i, j, gi, H.op(h1, h2)) !=
                                H.op(rho.apply(i, k, gi, h1),
                                     rho.apply(k, j, gi, h2)))
                                throw ValidationError(
                                    {"NotACocycleMorphism",
                                     "rho_ij(g^-1)(h1·h2) != "
                                     "rho_ik(g^-1)(h1)·rho_kj(g^-1)(h2)",
                                     {{"i", i}, {"j", j}, {"k", k},
                                      {"g", g}, {"h1", h1}, {"h2", h2}}});
                }
}

// A rho-isometablic transition cocycle s_ij : P_ij -> H. Values are stored
// as H-indices in tables over all of P with -1 outside P_ij.
struct IsometablicCocycle {
    RhoFamily rho;
    std::vector<std::vector<Id>> s;  // [i*nc+j][point]

    Id at(int i, int j, Id u) const { return s[i * rho.n_charts + j][u]; }
};

inline std::string cocycle_fingerprint(const IsometablicCocycle& c)
{
    std::string blob;
    for (const auto& row : c.s)
        for (Id v : row) blob += std::to_string(v) + ",";
    return fnv1a_hex(blob);
}

inline void validate_cocycle(const IsometablicCocycle& c,
                             const PrincipalBundleAtlas& atlas)
{
    const int nc = atlas.n_charts();
    const FiniteGroup& G = atlas.group();
    const FiniteGroup& H = c.rho.h;
    if (c.rho.n_charts != nc)
        throw ValidationError({"BadTable", "cocycle chart count mismatch", {}});
    validate_rho(c.rho, G);
    if (static_cast<int>(c.s.size()) != nc * nc)
        throw ValidationError({"BadTable", "cocycle table count mismatch", {}});
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id u = 0; u < atlas.total; ++u) {
                bool in = atlas.chart_contains(i, u) && atlas.chart_contains(j, u);
                Id v = c.at(i, j, u);
                if (in && (v < 0 || v >= H.n))
                    throw ValidationError({"BadTable",
                                           "cocycle value missing on overlap",
                                           {{"i", i}, {"j", j}, {"u", u}}});
                if (!in && v != -1)
                    throw ValidationError({"BadTable",
                                           "cocycle value outside overlap",
                                           {{"i", i}, {"j", j}, {"u", u}}});
            }
    // cocycle identity on every triple-overlap point (repeats included)
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (int k = 0; k < nc; ++k)
                for (Id u = 0; u < atlas.total; ++u) {
                    if (!atlas.chart_contains(i, u) ||
                        !atlas.chart_contains(j, u) ||
                        !atlas.chart_contains(k, u))
                        continue;
                    if (H.op(c.at(i, j, u), c.at(j, k, u)) != c.at(i, k, u))
                        throw ValidationError(
                            {"NotACocycle",
                             "s_ij(u)·s_jk(u) != s_ik(u)",
                             {{"i", i}, {"j", j}, {"k", k}, {"u", u}}});
                }
    // isometablicity s_ij(u·g) = rho_ij(g^-1)(s_ij(u))
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id u = 0; u < atlas.total; ++u) {
                if (c.at(i, j, u) < 0) continue;
                for (Id g = 0; g < G.n; ++g)
                    if (c.at(i, j, atlas.act(u, g)) !=
                        c.rho.apply(i, j, G.inverse(g), c.at(i, j, u)))
                        throw ValidationError(
                            {"NotIsometablic",
                             "s_ij(u·g) != rho_ij(g^-1)(s_ij(u))",
                             {{"i", i}, {"j", j}, {"u", u}, {"g", g}}});
            }
}

// A family r_i : P_i -> H with the conjugation isometablicity law
// r_i(u·g) = rho_ii(g^-1)(r_i(u))·r_i(u_i·g).
struct ConjugationFamily {
    std::vector<std::vector<Id>> r;  // [chart][point], -1 outside P_i

    Id at(int i, Id u) const { return r[i][u]; }
};

inline std::optional<Fail> conjugation_law_violation(
    const ConjugationFamily& fam, const RhoFamily& rho,
    const PrincipalBundleAtlas& atlas)
{
    const FiniteGroup& G = atlas.group();
    const FiniteGroup& H = rho.h;
    for (int i = 0; i < atlas.n_charts(); ++i) {
        Id ui = atlas.basepoints[i];
        for (Id u : atlas.chart_points[i]) {
            Id ru = fam.at(i, u);
            if (ru < 0 || ru >= H.n)
                return Fail{"BadTable", "conjugation value missing",
                            {{"i", i}, {"u", u}}};
            for (Id g = 0; g < G.n; ++g) {
                Id lhs = fam.at(i, atlas.act(u, g));
                Id rhs = H.op(rho.apply(i, i, G.inverse(g), ru),
                              fam.at(i, atlas.act(ui, g)));
                if (lhs != rhs)
                    return Fail{"ConjugationNotIsometablic",
                                "r_i(u·g) != rho_ii(g^-1)(r_i(u))·r_i(u_i·g)",
                                {{"i", i}, {"u", u}, {"g", g}}};
            }
        }
    }
    return std::nullopt;
}

// Section data extracted from (or supplied for) a PBG-groupoid:
// theta_i(u, v) = sigma_bar_i(u)∘sigma_bar_i(v)^-1 is the equivariant local
// morphism, sigma_i = sigma_bar_i·xi_i the section into Omega_{u0}.
struct SectionPackage {
    std::vector<std::vector<Id>> sigma_bar;  // [chart][point] -> arrow, -1 out
    std::vector<Id> xi;                      // [chart] -> arrow in Om_{u0}^{u_i}
    std::vector<std::vector<Id>> sigma;      // [chart][point] -> arrow
    VertexGroup vertex;                      // H = Omega_{u0}^{u0}

    Id theta(const FiniteGroupoid& g, int i, Id u, Id v) const
    {
        return g.compose(sigma_bar[i][u], g.inverse(sigma_bar[i][v]));
    }
};

// Searches for schisms chart by chart. Values along the basepoint fiber
// solve b(g'·g) = (b(g')·g)∘b(g); each remaining fiber of the chart takes a
// free value at its minimal point which is then propagated. Choices are
// made in increasing arrow-id order. Returns the failing chart if some
// chart admits no equivariant local morphism.
inline std::optional<SectionPackage> derive_schisms_impl(
    const PBGGroupoid& pbg, int* failed_chart)
{
    const FiniteGroupoid& Om = pbg.groupoid;
    const PrincipalBundleAtlas& atlas = pbg.atlas;
    const FiniteGroup& G = pbg.group();

    SectionPackage pkg;
    pkg.sigma_bar.assign(atlas.n_charts(),
                         std::vector<Id>(atlas.total, -1));

    for (int i = 0; i < atlas.n_charts(); ++i) {
        Id ui = atlas.basepoints[i];
        auto& sb = pkg.sigma_bar[i];

        // b : G -> arrows, b(g) in Om_{u_i}^{u_i·g}
        std::vector<Id> b(G.n, -1);
        b[G.e] = Om.unit[ui];
        std::vector<std::vector<Id>> candidates(G.n);
        for (Id g = 0; g < G.n; ++g)
            candidates[g] = Om.hom(ui, atlas.act(ui, g));

        std::function<bool(Id)> solve = [&](Id g) -> bool {
            while (g < G.n && b[g] >= 0) ++g;
            if (g == G.n) {
                for (Id g1 = 0; g1 < G.n; ++g1)
                    for (Id g2 = 0; g2 < G.n; ++g2)
                        if (Om.compose(pbg.act_arrow(b[g1], g2), b[g2]) !=
                            b[G.op(g1, g2)])
                            return false;
                return true;
            }
            for (Id cand : candidates[g]) {
                b[g] = cand;
                bool consistent = true;
                for (Id g1 = 0; g1 < G.n && consistent; ++g1)
                    for (Id g2 = 0; g2 < G.n && consistent; ++g2) {
                        if (b[g1] < 0 || b[g2] < 0 || b[G.op(g1, g2)] < 0)
                            continue;
                        if (Om.compose(pbg.act_arrow(b[g1], g2), b[g2]) !=
                            b[G.op(g1, g2)])
                            consistent = false;
                    }
                if (consistent && solve(g + 1)) return true;
                b[g] = -1;
            }
            return false;
        };
        if (!solve(0)) {
            if (failed_chart) *failed_chart = i;
            return std::nullopt;
        }
        for (Id g = 0; g < G.n; ++g) sb[atlas.act(ui, g)] = b[g];

        // remaining fibers: free value at the minimal point, propagated by
        // sigma_bar(w·g) = (sigma_bar(w)·g)∘b(g). chart_points is ascending,
        // so the first unassigned point of a fiber is its minimum.
        for (Id w : atlas.chart_points[i]) {
            if (sb[w] >= 0) continue;
            Id choice = Om.hom(ui, w)[0];
            for (Id g = 0; g < G.n; ++g)
                sb[atlas.act(w, g)] =
                    Om.compose(pbg.act_arrow(choice, g), b[g]);
        }
    }

    // xi_i: minimal arrow in Om_{u0}^{u_i}; sections sigma_i = sigma_bar_i·xi_i
    pkg.xi.resize(atlas.n_charts());
    pkg.sigma.assign(atlas.n_charts(), std::vector<Id>(atlas.total, -1));
    for (int i = 0; i < atlas.n_charts(); ++i) {
        auto hom = Om.hom(atlas.u0, atlas.basepoints[i]);
        pkg.xi[i] = hom[0];
        for (Id u : atlas.chart_points[i])
            pkg.sigma[i][u] = Om.compose(pkg.sigma_bar[i][u], pkg.xi[i]);
    }
    pkg.vertex = vertex_group(Om, atlas.u0);
    return pkg;
}

inline SectionPackage derive_schisms(const PBGGroupoid& pbg)
{
    if (!pbg.groupoid.transitive())
        throw ValidationError({"NotTransitive",
                               "schism derivation needs a transitive "
                               "PBG-groupoid", {}});
    int failed = -1;
    auto pkg = derive_schisms_impl(pbg, &failed);
    if (!pkg)
        throw ValidationError({"NoEquivariantLocalMorphism",
                               "no G-equivariant local morphism exists for "
                               "this chart",
                               {{"chart", failed}}});
    return *pkg;
}

// Builds a package from supplied schisms and xi arrows, validating shape.
inline SectionPackage package_from_sections(
    const PBGGroupoid& pbg, const std::vector<std::vector<Id>>& sigma_bar,
    const std::vector<Id>& xi)
{
    const FiniteGroupoid& Om = pbg.groupoid;
    const PrincipalBundleAtlas& atlas = pbg.atlas;
    SectionPackage pkg;
    pkg.sigma_bar = sigma_bar;
    pkg.xi = xi;
    pkg.sigma.assign(atlas.n_charts(), std::vector<Id>(atlas.total, -1));
    for (int i = 0; i < atlas.n_charts(); ++i) {
        Id ui = atlas.basepoints[i];
        for (Id u : atlas.chart_points[i]) {
            Id a = pkg.sigma_bar[i][u];
            if (a < 0 || a >= Om.n_arrows || Om.src[a] != ui || Om.tgt[a] != u)
                throw ValidationError({"BadTable",
                                       "supplied schism is not an arrow "
                                       "u_i -> u",
                                       {{"chart", i}, {"u", u}}});
        }
        Id x = pkg.xi[i];
        if (x < 0 || x >= Om.n_arrows || Om.src[x] != atlas.u0 ||
            Om.tgt[x] != ui)
            throw ValidationError({"BadTable",
                                   "supplied xi is not an arrow u_0 -> u_i",
                                   {{"chart", i}}});
        for (Id u : atlas.chart_points[i])
            pkg.sigma[i][u] = Om.compose(pkg.sigma_bar[i][u], pkg.xi[i]);
    }
    pkg.vertex = vertex_group(Om, atlas.u0);
    return pkg;
}

// Full invariant suite of a SectionPackage (report style).
inline CheckReport verify_section_package(const PBGGroupoid& pbg,
                                          const SectionPackage& pkg)
{
    CheckReport rep;
    const FiniteGroupoid& Om = pbg.groupoid;
    const PrincipalBundleAtlas& atlas = pbg.atlas;
    const FiniteGroup& G = pbg.group();

    bool ok = true;
    json w;
    for (int i = 0; i < atlas.n_charts() && ok; ++i)
        for (Id u : atlas.chart_points[i]) {
            if (!ok) break;
            for (Id v : atlas.chart_points[i]) {
                if (!ok) break;
                for (Id g = 0; g < G.n; ++g) {
                    Id lhs = pkg.theta(Om, i, atlas.act(u, g), atlas.act(v, g));
                    Id rhs = pbg.act_arrow(pkg.theta(Om, i, u, v), g);
                    if (lhs != rhs) {
                        ok = false;
                        w = {{"i", i}, {"u", u}, {"v", v}, {"g", g}};
                        break;
                    }
                }
            }
        }
    ok ? rep.pass("theta-equivariance", "theta_i(u·g, v·g) = theta_i(u,v)·g")
       : rep.fail("theta-equivariance", "violated", w);

    ok = true;
    for (int i = 0; i < atlas.n_charts(); ++i) {
        if (pkg.sigma_bar[i][atlas.basepoints[i]] !=
            Om.unit[atlas.basepoints[i]]) {
            ok = false;
            w = {{"i", i}};
        }
        if (pkg.sigma[i][atlas.basepoints[i]] != pkg.xi[i]) {
            ok = false;
            w = {{"i", i}};
        }
    }
    ok ? rep.pass("basepoint-normalisation",
                  "sigma_bar_i(u_i) = 1_{u_i} and sigma_i(u_i) = xi_i")
       : rep.fail("basepoint-normalisation", "violated", w);

    ok = true;
    for (int i = 0; i < atlas.n_charts() && ok; ++i) {
        Id ui = atlas.basepoints[i];
        for (Id u : atlas.chart_points[i]) {
            if (!ok) break;
            for (Id g = 0; g < G.n; ++g) {
                Id lhs = pkg.sigma_bar[i][atlas.act(u, g)];
                Id rhs = Om.compose(pbg.act_arrow(pkg.sigma_bar[i][u], g),
                                    pkg.sigma_bar[i][atlas.act(ui, g)]);
                if (lhs != rhs) {
                    ok = false;
                    w = {{"i", i}, {"u", u}, {"g", g}};
                    break;
                }
            }
        }
    }
    ok ? rep.pass("schism-isometablicity",
                  "sigma_bar_i(u·g) = (sigma_bar_i(u)·g)∘sigma_bar_i(u_i·g)")
       : rep.fail("schism-isometablicity", "violated", w);

    ok = true;
    for (int i = 0; i < atlas.n_charts() && ok; ++i) {
        Id ui = atlas.basepoints[i];
        for (Id u : atlas.chart_points[i]) {
            if (!ok) break;
            for (Id g = 0; g < G.n; ++g) {
                Id lhs = pkg.sigma[i][atlas.act(u, g)];
                Id rhs = Om.compose(
                    pbg.act_arrow(pkg.sigma[i][u], g),
                    Om.compose(pbg.act_arrow(Om.inverse(pkg.xi[i]), g),
                               pkg.sigma[i][atlas.act(ui, g)]));
                if (lhs != rhs) {
                    ok = false;
                    w = {{"i", i}, {"u", u}, {"g", g}};
                    break;
                }
            }
        }
    }
    ok ? rep.pass("section-isometablicity",
                  "sigma_i(u·g) = [sigma_i(u)·g]∘(xi_i^-1·g)∘sigma_i(u_i·g)")
       : rep.fail("section-isometablicity", "violated", w);

    return rep;
}

// rho_ij(g^-1)(h) = sigma_i(u_i·g)^-1·(xi_i·g)·(h·g)·(xi_j·g)^-1·sigma_j(u_j·g)
inline RhoFamily compute_rho(const PBGGroupoid& pbg, const SectionPackage& pkg)
{
    const FiniteGroupoid& Om = pbg.groupoid;
    const PrincipalBundleAtlas& atlas = pbg.atlas;
    const FiniteGroup& G = pbg.group();
    const VertexGroup& H = pkg.vertex;
    const int nc = atlas.n_charts();

    RhoFamily rho;
    rho.n_charts = nc;
    rho.n_g = G.n;
    rho.h = H.group;
    rho.tables.assign(static_cast<size_t>(nc) * nc * G.n,
                      std::vector<Id>(H.size()));
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id g = 0; g < G.n; ++g) {
                // the formula evaluates rho_ij(g^-1); store it at index g^-1
                std::vector<Id>& perm =
                    rho.tables[(i * nc + j) * G.n + G.inverse(g)];
                Id left = Om.compose(
                    Om.inverse(pkg.sigma[i][atlas.act(atlas.basepoints[i], g)]),
                    pbg.act_arrow(pkg.xi[i], g));
                Id right = Om.compose(
                    pbg.act_arrow(Om.inverse(pkg.xi[j]), g),
                    pkg.sigma[j][atlas.act(atlas.basepoints[j], g)]);
                for (int hi = 0; hi < H.size(); ++hi) {
                    Id mid = pbg.act_arrow(H.arrow_of(hi), g);
                    perm[hi] =
                        H.index_of(Om.compose(left, Om.compose(mid, right)));
                }
            }
    return rho;
}

// Transition functions of schisms and sections.
struct TransitionData {
    std::vector<std::vector<Id>> sbar;  // [i*nc+j][point] -> arrow, -1 out
    IsometablicCocycle cocycle;         // s_ij valued in H-indices, with rho
};

inline TransitionData transition_functions(const PBGGroupoid& pbg,
                                           const SectionPackage& pkg)
{
    const FiniteGroupoid& Om = pbg.groupoid;
    const PrincipalBundleAtlas& atlas = pbg.atlas;
    const int nc = atlas.n_charts();
    const VertexGroup& H = pkg.vertex;

    TransitionData out;
    out.sbar.assign(static_cast<size_t>(nc) * nc,
                    std::vector<Id>(atlas.total, -1));
    out.cocycle.rho = compute_rho(pbg, pkg);
    out.cocycle.s.assign(static_cast<size_t>(nc) * nc,
                         std::vector<Id>(atlas.total, -1));
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id u = 0; u < atlas.total; ++u) {
                if (!atlas.chart_contains(i, u) || !atlas.chart_contains(j, u))
                    continue;
                // sbar_ij(u) = sigma_bar_i(u)^-1 ∘ sigma_bar_j(u)
                out.sbar[i * nc + j][u] = Om.compose(
                    Om.inverse(pkg.sigma_bar[i][u]), pkg.sigma_bar[j][u]);
                out.cocycle.s[i * nc + j][u] = H.index_of(Om.compose(
                    Om.inverse(pkg.sigma[i][u]), pkg.sigma[j][u]));
            }
    return out;
}

// The identity suite around the rho family: the cocycle-morphism property,
// the reduction identity, tau-compatibility, both isometablicity forms of
// the transition functions, and conjugation behaviour.
inline CheckReport verify_rho_identities(const PBGGroupoid& pbg,
                                         const SectionPackage& pkg,
                                         const TransitionData& data)
{
    CheckReport rep;
    const FiniteGroupoid& Om = pbg.groupoid;
    const PrincipalBundleAtlas& atlas = pbg.atlas;
    const FiniteGroup& G = pbg.group();
    const VertexGroup& H = pkg.vertex;
    const RhoFamily& rho = data.cocycle.rho;
    const int nc = atlas.n_charts();

    try {
        validate_rho(rho, G);
        rep.pass("rho-cocycle-morphism",
                 "rho_ij(g^-1)(h1·h2) = rho_ik(g^-1)(h1)·rho_kj(g^-1)(h2), "
                 "all triples");
    } catch (const ValidationError& e) {
        rep.fail("rho-cocycle-morphism", e.fail.detail, e.fail.witness);
    }

    bool ok = true;
    json w;
    for (int i = 0; i < nc && ok; ++i)
        for (Id g = 0; g < G.n && ok; ++g)
            if (rho.apply(i, i, G.inverse(g), rho.h.e) != rho.h.e) {
                ok = false;
                w = {{"i", i}, {"g", g}};
            }
    ok ? rep.pass("rho-fixes-identity", "rho_ii(g^-1)(e_H) = e_H")
       : rep.fail("rho-fixes-identity", "violated", w);

    // reduction identity: rho_ij(g^-1)(h) = rho_ii(g^-1)(h)·c_ij(g)
    //                                    = c_ij(g)·rho_jj(g^-1)(h)
    // with c_ij(g) = sigma_i(u_i·g)^-1·(xi_i·g)·(xi_j·g)^-1·sigma_j(u_j·g)
    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (Id g = 0; g < G.n && ok; ++g) {
                Id gi = G.inverse(g);
                Id corr_arrow = Om.compose(
                    Om.inverse(pkg.sigma[i][atlas.act(atlas.basepoints[i], g)]),
                    Om.compose(
                        pbg.act_arrow(pkg.xi[i], g),
                        Om.compose(pbg.act_arrow(Om.inverse(pkg.xi[j]), g),
                                   pkg.sigma[j][atlas.act(
                                       atlas.basepoints[j], g)])));
                Id corr = H.index_of(corr_arrow);
                for (Id h = 0; h < rho.h.n && ok; ++h) {
                    Id lhs = rho.apply(i, j, gi, h);
                    if (lhs != rho.h.op(rho.apply(i, i, gi, h), corr) ||
                        lhs != rho.h.op(corr, rho.apply(j, j, gi, h))) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"g", g}, {"h", h}};
                    }
                }
            }
    ok ? rep.pass("rho-reduction",
                  "rho_ij determined by rho_ii (resp. rho_jj) and the "
                  "sigma/xi correction factor")
       : rep.fail("rho-reduction", "violated", w);

    // tau-compatibility: tau_i(rho_bar_ii(g^-1)(h_i)) = rho_ii(g^-1)(tau_i(h_i))
    ok = true;
    for (int i = 0; i < nc && ok; ++i) {
        Id ui = atlas.basepoints[i];
        auto loops = Om.hom(ui, ui);
        for (Id hi : loops) {
            if (!ok) break;
            for (Id g = 0; g < G.n; ++g) {
                Id uig = atlas.act(ui, g);
                Id rho_bar = Om.compose(
                    Om.inverse(pkg.sigma_bar[i][uig]),
                    Om.compose(pbg.act_arrow(hi, g), pkg.sigma_bar[i][uig]));
                Id tau_of = Om.compose(
                    Om.inverse(pkg.xi[i]),
                    Om.compose(rho_bar, pkg.xi[i]));
                Id tau_hi = Om.compose(Om.inverse(pkg.xi[i]),
                                       Om.compose(hi, pkg.xi[i]));
                Id rhs = H.arrow_of(
                    rho.apply(i, i, G.inverse(g), H.index_of(tau_hi)));
                if (tau_of != rhs) {
                    ok = false;
                    w = {{"i", i}, {"loop", hi}, {"g", g}};
                    break;
                }
            }
        }
    }
    ok ? rep.pass("tau-compatibility",
                  "tau_i∘rho_bar_ii(g^-1) = rho_ii(g^-1)∘tau_i")
       : rep.fail("tau-compatibility", "violated", w);

    // isometablicity of sbar, direct form:
    // sbar_ij(u·g) = sigma_bar_i(u_i·g)^-1·(sbar_ij(u)·g)·sigma_bar_j(u_j·g)
    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (Id u = 0; u < atlas.total && ok; ++u) {
                Id sb = data.sbar[i * nc + j][u];
                if (sb < 0) continue;
                for (Id g = 0; g < G.n; ++g) {
                    Id lhs = data.sbar[i * nc + j][atlas.act(u, g)];
                    Id rhs = Om.compose(
                        Om.inverse(
                            pkg.sigma_bar[i][atlas.act(atlas.basepoints[i], g)]),
                        Om.compose(pbg.act_arrow(sb, g),
                                   pkg.sigma_bar[j][atlas.act(
                                       atlas.basepoints[j], g)]));
                    if (lhs != rhs) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"u", u}, {"g", g}};
                        break;
                    }
                }
            }
    ok ? rep.pass("sbar-isometablicity-direct",
                  "sbar_ij(u·g) = sigma_bar_i(u_i·g)^-1∘(sbar_ij(u)·g)∘"
                  "sigma_bar_j(u_j·g)")
       : rep.fail("sbar-isometablicity-direct", "violated", w);

    // isometablicity of s, direct form vs rho reformulation; the two must
    // agree everywhere
    ok = true;
    bool agree = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (Id u = 0; u < atlas.total && ok; ++u) {
                Id sv = data.cocycle.at(i, j, u);
                if (sv < 0) continue;
                for (Id g = 0; g < G.n; ++g) {
                    Id lhs = data.cocycle.at(i, j, atlas.act(u, g));
                    Id direct = H.index_of(Om.compose(
                        Om.inverse(
                            pkg.sigma[i][atlas.act(atlas.basepoints[i], g)]),
                        Om.compose(
                            pbg.act_arrow(pkg.xi[i], g),
                            Om.compose(
                                pbg.act_arrow(H.arrow_of(sv), g),
                                Om.compose(
                                    pbg.act_arrow(Om.inverse(pkg.xi[j]), g),
                                    pkg.sigma[j][atlas.act(
                                        atlas.basepoints[j], g)])))));
                    Id via_rho = rho.apply(i, j, G.inverse(g), sv);
                    if (lhs != direct) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"u", u}, {"g", g}};
                        break;
                    }
                    if (direct != via_rho) agree = false;
                }
            }
    ok ? rep.pass("s-isometablicity-direct",
                  "s_ij(u·g) equals the direct sigma/xi expression")
       : rep.fail("s-isometablicity-direct", "violated", w);
    agree ? rep.pass("s-isometablicity-forms-agree",
                     "direct form and rho reformulation coincide")
          : rep.fail("s-isometablicity-forms-agree",
                     "direct form and rho reformulation disagree", {});

    try {
        validate_cocycle(data.cocycle, atlas);
        rep.pass("cocycle-valid",
                 "s_ij·s_jk = s_ik and rho-isometablicity hold");
    } catch (const ValidationError& e) {
        rep.fail("cocycle-valid", e.fail.detail, e.fail.witness);
    }
    return rep;
}

// Transition morphisms chi and automorphism cocycle alpha of a cocycle.
struct TransitionSystem {
    RhoFamily rho;
    // chi[(i*nc+j)] : (u, v) -> H-index over P_ij x P_ij, -1 outside
    std::vector<std::vector<Id>> chi;  // indexed u*|P|+v
    // alpha[(i*nc+j)][u] : permutation of H, empty outside P_ij
    std::vector<std::vector<std::vector<Id>>> alpha;
    std::vector<Id> anchors;  // u_ij per (i,j), -1 when P_ij empty
};

inline TransitionSystem transition_system_from_cocycle(
    const IsometablicCocycle& c, const PrincipalBundleAtlas& atlas)
{
    const int nc = atlas.n_charts();
    const int P = atlas.total;
    const FiniteGroup& H = c.rho.h;
    TransitionSystem sys;
    sys.rho = c.rho;
    sys.chi.assign(static_cast<size_t>(nc) * nc,
                   std::vector<Id>(static_cast<size_t>(P) * P, -1));
    sys.alpha.assign(static_cast<size_t>(nc) * nc,
                     std::vector<std::vector<Id>>(P));
    sys.anchors.assign(static_cast<size_t>(nc) * nc, -1);
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) {
            auto pij = atlas.overlap(i, j);
            if (pij.empty()) continue;
            sys.anchors[i * nc + j] = pij[0];
            for (Id u : pij) {
                // alpha_ij(u) = I_{s_ij(u)}
                auto& perm = sys.alpha[i * nc + j][u];
                perm.resize(H.n);
                Id sv = c.at(i, j, u);
                for (Id h = 0; h < H.n; ++h)
                    perm[h] = H.op(sv, H.op(h, H.inverse(sv)));
                // chi_ij(u, v) = s_ij(u)·s_ji(v)
                for (Id v : pij)
                    sys.chi[i * nc + j][u * P + v] =
                        H.op(c.at(i, j, u), c.at(j, i, v));
            }
        }
    return sys;
}

// Report-style verification of a cocycle and (optionally) a transition
// system against it: cocycle identity, isometablicity, cocycle-morphism
// property, the four system conditions and chi_ij(u,v) = s_ij(u)·s_ji(v).
inline CheckReport verify_transition_package(
    const IsometablicCocycle& c, const PrincipalBundleAtlas& atlas,
    const TransitionSystem* sys = nullptr)
{
    CheckReport rep;
    const int nc = atlas.n_charts();
    const int P = atlas.total;
    const FiniteGroup& G = atlas.group();
    const FiniteGroup& H = c.rho.h;

    try {
        validate_rho(c.rho, G);
        rep.pass("rho-cocycle-morphism", "holds over all index triples");
    } catch (const ValidationError& e) {
        rep.fail("rho-cocycle-morphism", e.fail.detail, e.fail.witness);
    }

    bool ok = true;
    json w;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (int k = 0; k < nc && ok; ++k)
                for (Id u = 0; u < atlas.total; ++u) {
                    if (!atlas.chart_contains(i, u) ||
                        !atlas.chart_contains(j, u) ||
                        !atlas.chart_contains(k, u))
                        continue;
                    if (H.op(c.at(i, j, u), c.at(j, k, u)) != c.at(i, k, u)) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"k", k}, {"u", u}};
                        break;
                    }
                }
    ok ? rep.pass("cocycle-identity", "s_ij(u)·s_jk(u) = s_ik(u)")
       : rep.fail("cocycle-identity", "violated", w);

    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (Id u = 0; u < atlas.total && ok; ++u) {
                if (c.at(i, j, u) < 0) continue;
                for (Id g = 0; g < G.n; ++g)
                    if (c.at(i, j, atlas.act(u, g)) !=
                        c.rho.apply(i, j, G.inverse(g), c.at(i, j, u))) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"u", u}, {"g", g}};
                        break;
                    }
            }
    ok ? rep.pass("cocycle-isometablicity",
                  "s_ij(u·g) = rho_ij(g^-1)(s_ij(u))")
       : rep.fail("cocycle-isometablicity", "violated", w);

    if (!sys) return rep;

    // chi agrees with the cocycle
    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (Id u = 0; u < P && ok; ++u)
                for (Id v = 0; v < P; ++v) {
                    Id cv = sys->chi[i * nc + j][u * P + v];
                    bool in = c.at(i, j, u) >= 0 && c.at(i, j, v) >= 0;
                    if (in != (cv >= 0)) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"u", u}, {"v", v}};
                        break;
                    }
                    if (in && cv != H.op(c.at(i, j, u), c.at(j, i, v))) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"u", u}, {"v", v}};
                        break;
                    }
                }
    ok ? rep.pass("chi-definition", "chi_ij(u,v) = s_ij(u)·s_ji(v)")
       : rep.fail("chi-definition", "violated", w);

    // (1) rho_ii(g^-1)(chi_ij(u,v)) = chi_ij(u·g, v·g)
    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (Id u = 0; u < P && ok; ++u)
                for (Id v = 0; v < P && ok; ++v) {
                    Id cv = sys->chi[i * nc + j][u * P + v];
                    if (cv < 0) continue;
                    for (Id g = 0; g < G.n; ++g) {
                        Id lhs = sys->rho.apply(i, i, G.inverse(g), cv);
                        Id rhs = sys->chi[i * nc + j][atlas.act(u, g) * P +
                                                      atlas.act(v, g)];
                        if (lhs != rhs) {
                            ok = false;
                            w = {{"i", i}, {"j", j}, {"u", u}, {"v", v},
                                 {"g", g}};
                            break;
                        }
                    }
                }
    ok ? rep.pass("system-1", "rho_ii(g^-1)(chi_ij(u,v)) = chi_ij(u·g,v·g)")
       : rep.fail("system-1", "violated", w);

    // (2) alpha_ij(u·g)(rho_jj(g^-1)(h)) = rho_ii(g^-1)(alpha_ij(u)(h))
    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (Id u = 0; u < P && ok; ++u) {
                if (sys->alpha[i * nc + j][u].empty()) continue;
                for (Id g = 0; g < G.n && ok; ++g) {
                    Id gi = G.inverse(g);
                    const auto& a_ug =
                        sys->alpha[i * nc + j][atlas.act(u, g)];
                    const auto& a_u = sys->alpha[i * nc + j][u];
                    for (Id h = 0; h < H.n; ++h)
                        if (a_ug[sys->rho.apply(j, j, gi, h)] !=
                            sys->rho.apply(i, i, gi, a_u[h])) {
                            ok = false;
                            w = {{"i", i}, {"j", j}, {"u", u}, {"g", g},
                                 {"h", h}};
                            break;
                        }
                }
            }
    ok ? rep.pass("system-2",
                  "alpha_ij(u·g)∘rho_jj(g^-1) = rho_ii(g^-1)∘alpha_ij(u)")
       : rep.fail("system-2", "violated", w);

    // (3) chi_ik(u,v) = chi_ij(u,v)·alpha_ij(v)(chi_jk(u,v))
    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (int k = 0; k < nc && ok; ++k)
                for (Id u = 0; u < P && ok; ++u)
                    for (Id v = 0; v < P; ++v) {
                        Id cij = sys->chi[i * nc + j][u * P + v];
                        Id cjk = sys->chi[j * nc + k][u * P + v];
                        Id cik = sys->chi[i * nc + k][u * P + v];
                        if (cij < 0 || cjk < 0 || cik < 0) continue;
                        if (cik != H.op(cij, sys->alpha[i * nc + j][v][cjk])) {
                            ok = false;
                            w = {{"i", i}, {"j", j}, {"k", k}, {"u", u},
                                 {"v", v}};
                            break;
                        }
                    }
    ok ? rep.pass("system-3",
                  "chi_ik(u,v) = chi_ij(u,v)·alpha_ij(v)(chi_jk(u,v))")
       : rep.fail("system-3", "violated", w);

    // (4) alpha_ij(u) = I_{chi_ij(u, u_ij)} ∘ I_{s_ij(u_ij)}
    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j) {
            Id anchor = sys->anchors[i * nc + j];
            if (anchor < 0) continue;
            for (Id u = 0; u < P && ok; ++u) {
                if (sys->alpha[i * nc + j][u].empty()) continue;
                Id chi_u = sys->chi[i * nc + j][u * P + anchor];
                Id s_anchor = c.at(i, j, anchor);
                Id conj = H.op(chi_u, s_anchor);
                for (Id h = 0; h < H.n; ++h)
                    if (sys->alpha[i * nc + j][u][h] !=
                        H.op(conj, H.op(h, H.inverse(conj)))) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"u", u}, {"h", h}};
                        break;
                    }
            }
        }
    ok ? rep.pass("system-4",
                  "alpha_ij(u) = I_{chi_ij(u,u_ij)}∘I_{s_ij(u_ij)}")
       : rep.fail("system-4", "violated", w);

    return rep;
}

// Conjugates a cocycle by a family r: s'_ij = r_i^-1·s_ij·r_j with
// rho'_ij(g^-1)(h) = r_i(u_i·g)^-1·rho_ij(g^-1)(h)·r_j(u_j·g). The result is
// rho'-isometablic by construction and re-validated.
inline IsometablicCocycle conjugate_transition_data(
    const IsometablicCocycle& c, const ConjugationFamily& r,
    const PrincipalBundleAtlas& atlas)
{
    if (auto fail = conjugation_law_violation(r, c.rho, atlas))
        throw ValidationError(*fail);
    const int nc = atlas.n_charts();
    const FiniteGroup& G = atlas.group();
    const FiniteGroup& H = c.rho.h;

    IsometablicCocycle out;
    out.rho.n_charts = nc;
    out.rho.n_g = G.n;
    out.rho.h = H;
    out.rho.tables.assign(static_cast<size_t>(nc) * nc * G.n,
                          std::vector<Id>(H.n));
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id g = 0; g < G.n; ++g) {
                Id gi = G.inverse(g);
                auto& perm = out.rho.tables[(i * nc + j) * G.n + gi];
                Id ri = r.at(i, atlas.act(atlas.basepoints[i], g));
                Id rj = r.at(j, atlas.act(atlas.basepoints[j], g));
                for (Id h = 0; h < H.n; ++h)
                    perm[h] = H.op(H.inverse(ri),
                                   H.op(c.rho.apply(i, j, gi, h), rj));
            }
    out.s.assign(static_cast<size_t>(nc) * nc, std::vector<Id>(atlas.total, -1));
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            for (Id u = 0; u < atlas.total; ++u) {
                Id sv = c.at(i, j, u);
                if (sv < 0) continue;
                out.s[i * nc + j][u] =
                    H.op(H.inverse(r.at(i, u)), H.op(sv, r.at(j, u)));
            }
    validate_cocycle(out, atlas);
    return out;
}

// How the transition system transforms under conjugation. The chi relation
// is checked in the form derived from s' = r^-1·s·r,
//   chi'_ij(u,v) = r_i(u)^-1·[chi_ij(u,v)·alpha_ij(v)(r_j(u)·r_j(v)^-1)]·r_i(v),
// and alpha transforms by I_{r_i(u)^-1}∘alpha_ij(u)∘I_{r_j(u)}.
inline CheckReport verify_system_conjugation(const IsometablicCocycle& c,
                                             const IsometablicCocycle& cprime,
                                             const ConjugationFamily& r,
                                             const PrincipalBundleAtlas& atlas)
{
    CheckReport rep;
    const int nc = atlas.n_charts();
    const int P = atlas.total;
    const FiniteGroup& H = c.rho.h;
    TransitionSystem sys = transition_system_from_cocycle(c, atlas);
    TransitionSystem sysp = transition_system_from_cocycle(cprime, atlas);

    bool ok = true;
    json w;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (Id u = 0; u < P && ok; ++u)
                for (Id v = 0; v < P; ++v) {
                    Id chi = sys.chi[i * nc + j][u * P + v];
                    Id chip = sysp.chi[i * nc + j][u * P + v];
                    if (chi < 0) continue;
                    Id inner = H.op(r.at(j, u), H.inverse(r.at(j, v)));
                    Id rhs = H.op(
                        H.inverse(r.at(i, u)),
                        H.op(H.op(chi, sys.alpha[i * nc + j][v][inner]),
                             r.at(i, v)));
                    if (chip != rhs) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"u", u}, {"v", v}};
                        break;
                    }
                }
    ok ? rep.pass("system-conjugation-chi",
                  "chi' matches the conjugated expression")
       : rep.fail("system-conjugation-chi", "violated", w);

    ok = true;
    for (int i = 0; i < nc && ok; ++i)
        for (int j = 0; j < nc && ok; ++j)
            for (Id u = 0; u < P && ok; ++u) {
                if (sys.alpha[i * nc + j][u].empty()) continue;
                for (Id h = 0; h < H.n; ++h) {
                    Id rhs = H.op(
                        H.inverse(r.at(i, u)),
                        H.op(sys.alpha[i * nc + j][u]
                                      [H.op(r.at(j, u),
                                            H.op(h, H.inverse(r.at(j, u))))],
                             r.at(i, u)));
                    // I_{r_i(u)^-1}(alpha(I_{r_j(u)}(h)))
                    if (sysp.alpha[i * nc + j][u][h] != rhs) {
                        ok = false;
                        w = {{"i", i}, {"j", j}, {"u", u}, {"h", h}};
                        break;
                    }
                }
            }
    ok ? rep.pass("system-conjugation-alpha",
                  "alpha'_ij(u) = I_{r_i(u)^-1}∘alpha_ij(u)∘I_{r_j(u)}")
       : rep.fail("system-conjugation-alpha", "violated", w);
    return rep;
}

// Searches for a conjugation family relating two cocycles over the same
// rho: s'_ij = r_i^-1·s_ij·r_j with r satisfying the exact law, or, when
// allow_offsets is set, the law up to constant basepoint offsets
// W_i = R_i(u_i) (two packages whose xi choices differ by a constant).
struct ConjugationSearchResult {
    ConjugationFamily family;
    bool exact_law = true;
    std::vector<Id> offsets;  // W_i per chart (all e_H when exact)
};

inline std::optional<ConjugationSearchResult> find_conjugation(
    const IsometablicCocycle& from, const IsometablicCocycle& to,
    const PrincipalBundleAtlas& atlas, bool allow_offsets = true)
{
    if (allow_offsets) {
        // prefer a family with the exact law when one exists
        if (auto exact = find_conjugation(from, to, atlas, false))
            return exact;
    }
    const int nc = atlas.n_charts();
    const FiniteGroup& G = atlas.group();
    const FiniteGroup& H = from.rho.h;
    const RhoFamily& rho = from.rho;

    // relation to satisfy: to.s_ij(u) = r_i(u)^-1 · from.s_ij(u) · r_j(u)
    auto relation_holds = [&](const ConjugationFamily& fam) {
        for (int i = 0; i < nc; ++i)
            for (int j = 0; j < nc; ++j)
                for (Id u = 0; u < atlas.total; ++u) {
                    Id sv = from.at(i, j, u);
                    if (sv < 0) continue;
                    if (to.at(i, j, u) !=
                        H.op(H.inverse(fam.at(i, u)), H.op(sv, fam.at(j, u))))
                        return false;
                }
        return true;
    };

    // enumerate families with R_i(u_i) = W_i and the (possibly offset) law
    //   R_i(u·g) = rho_ii(g^-1)(R_i(u)) · rho_ii(g^-1)(W_i)^-1 · beta_i(g)
    // where beta_i(g) = R_i(u_i·g), beta_i(e) = W_i.
    struct ChartChoices {
        std::vector<std::vector<Id>> betas;   // candidate beta tables
        std::vector<Id> orbit_reps;           // non-basepoint fiber reps
    };
    std::vector<ChartChoices> per_chart(nc);
    // try the exact law (offset W = e) before offset variants
    std::vector<Id> w_order{H.e};
    if (allow_offsets)
        for (Id W = 0; W < H.n; ++W)
            if (W != H.e) w_order.push_back(W);
    for (int i = 0; i < nc; ++i) {
        Id ui = atlas.basepoints[i];
        for (Id W : w_order) {
            std::vector<Id> beta(G.n, -1);
            beta[G.e] = W;
            std::function<void(Id)> rec = [&](Id g) {
                while (g < G.n && beta[g] >= 0) ++g;
                if (g == G.n) {
                    for (Id g1 = 0; g1 < G.n; ++g1)
                        for (Id g2 = 0; g2 < G.n; ++g2) {
                            Id lhs = beta[G.op(g1, g2)];
                            Id rhs = H.op(
                                rho.apply(i, i, G.inverse(g2), beta[g1]),
                                H.op(H.inverse(rho.apply(i, i, G.inverse(g2),
                                                         W)),
                                     beta[g2]));
                            if (lhs != rhs) return;
                        }
                    per_chart[i].betas.push_back(beta);
                    return;
                }
                for (Id v = 0; v < H.n; ++v) {
                    beta[g] = v;
                    rec(g + 1);
                }
                beta[g] = -1;
            };
            rec(0);
        }
        for (Id w : atlas.chart_points[i]) {
            bool in_base_fiber = atlas.proj[w] == atlas.proj[ui];
            if (in_base_fiber) continue;
            bool minimal = true;
            for (Id g = 0; g < G.n; ++g)
                if (atlas.act(w, g) < w) minimal = false;
            if (minimal) per_chart[i].orbit_reps.push_back(w);
        }
    }

    ConjugationFamily fam;
    fam.r.assign(nc, std::vector<Id>(atlas.total, -1));
    std::vector<Id> offsets(nc, H.e);

    std::function<bool(int)> rec_chart = [&](int i) -> bool {
        if (i == nc) return relation_holds(fam);
        Id ui = atlas.basepoints[i];
        for (const auto& beta : per_chart[i].betas) {
            Id W = beta[G.e];
            offsets[i] = W;
            for (Id g = 0; g < G.n; ++g) fam.r[i][atlas.act(ui, g)] = beta[g];
            // free values on other fibers
            const auto& reps = per_chart[i].orbit_reps;
            std::function<bool(size_t)> rec_orbit = [&](size_t k) -> bool {
                if (k == reps.size()) return rec_chart(i + 1);
                Id w = reps[k];
                for (Id v = 0; v < H.n; ++v) {
                    for (Id g = 0; g < G.n; ++g) {
                        Id gi = G.inverse(g);
                        fam.r[i][atlas.act(w, g)] =
                            H.op(rho.apply(i, i, gi, v),
                                 H.op(H.inverse(rho.apply(i, i, gi, W)),
                                      beta[g]));
                    }
                    if (rec_orbit(k + 1)) return true;
                }
                return false;
            };
            if (rec_orbit(0)) return true;
        }
        return false;
    };
    if (!rec_chart(0)) return std::nullopt;

    ConjugationSearchResult res;
    res.family = fam;
    res.offsets = offsets;
    res.exact_law = true;
    for (Id w : offsets)
        if (w != H.e) res.exact_law = false;
    return res;
}

}  // namespace gcl
