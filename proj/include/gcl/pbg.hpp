// PBG-groupoids: groupoids over the total space of a principal bundle with
// a structure-group action by groupoid automorphisms, and their equivalence
// with extensions.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "gcl/base.hpp"
#include "gcl/bundle.hpp"
#include "gcl/groupoid.hpp"
#include "gcl/iso.hpp"
#include "gcl/quotient.hpp"

namespace gcl {

struct PBGGroupoid {
    FiniteGroupoid groupoid;    // over P = atlas.total
    PrincipalBundleAtlas atlas; // P(M, G)
    std::vector<Id> act;        // arrows x |G|

    Id act_arrow(Id a, Id g) const { return act[a * group().n + g]; }
    const FiniteGroup& group() const { return atlas.group(); }
};

// A PBG-Lie-group-bundle analogue: the groupoid part is a bundle of groups.
struct PBGGroupBundle {
    GroupBundle bundle;
    PrincipalBundleAtlas atlas;
    std::vector<Id> act;

    Id act_arrow(Id a, Id g) const { return act[a * atlas.group().n + g]; }
};

// Validates the four axioms of a PBG-groupoid:
//   (i)   endpoints:  src(xi·g) = src(xi)·g, tgt(xi·g) = tgt(xi)·g
//   (ii)  units:      1_{u·g} = 1_u·g
//   (iii) products:   (xi·eta)·g = (xi·g)(eta·g)
//   (iv)  inverses:   (xi·g)^-1 = xi^-1·g
inline PBGGroupoid validate_pbg(FiniteGroupoid groupoid,
                                PrincipalBundleAtlas atlas,
                                const std::vector<Id>& act)
{
    if (groupoid.n_base != atlas.total)
        throw ValidationError({"BadTable",
                               "groupoid base must be the bundle total space",
                               {{"base", groupoid.n_base},
                                {"total", atlas.total}}});
    const FiniteGroup& G = atlas.group();
    const int n = groupoid.n_arrows;
    if (static_cast<int>(act.size()) != n * G.n)
        throw ValidationError({"BadTable", "arrow action table sized wrong", {}});
    for (Id a = 0; a < n; ++a) {
        if (act[a * G.n + G.e] != a)
            throw ValidationError(
                {"NotAnAction", "xi·e != xi", {{"arrow", a}}});
        for (Id g = 0; g < G.n; ++g) {
            Id ag = act[a * G.n + g];
            if (ag < 0 || ag >= n)
                throw ValidationError({"BadTable", "action entry out of range",
                                       {{"arrow", a}, {"g", g}}});
            for (Id h = 0; h < G.n; ++h)
                if (act[ag * G.n + h] != act[a * G.n + G.op(g, h)])
                    throw ValidationError({"NotAnAction",
                                           "(xi·g)·h != xi·(g·h)",
                                           {{"arrow", a}, {"g", g}, {"h", h}}});
        }
    }
    for (Id a = 0; a < n; ++a)
        for (Id g = 0; g < G.n; ++g) {
            Id ag = act[a * G.n + g];
            if (groupoid.tgt[ag] != atlas.act(groupoid.tgt[a], g) ||
                groupoid.src[ag] != atlas.act(groupoid.src[a], g))
                throw ValidationError({"AxiomViolated",
                                       "axiom (i): endpoints not equivariant",
                                       {{"axiom", "i"}, {"arrow", a}, {"g", g}}});
        }
    for (Id u = 0; u < atlas.total; ++u)
        for (Id g = 0; g < G.n; ++g)
            if (act[groupoid.unit[u] * G.n + g] !=
                groupoid.unit[atlas.act(u, g)])
                throw ValidationError({"AxiomViolated",
                                       "axiom (ii): 1_{u·g} != 1_u·g",
                                       {{"axiom", "ii"}, {"u", u}, {"g", g}}});
    for (Id a = 0; a < n; ++a)
        for (Id b = 0; b < n; ++b) {
            if (!groupoid.composable(a, b)) continue;
            for (Id g = 0; g < G.n; ++g) {
                Id ag = act[a * G.n + g], bg = act[b * G.n + g];
                if (!groupoid.composable(ag, bg) ||
                    act[groupoid.compose(a, b) * G.n + g] !=
                        groupoid.compose(ag, bg))
                    throw ValidationError(
                        {"AxiomViolated",
                         "axiom (iii): (xi·eta)·g != (xi·g)(eta·g)",
                         {{"axiom", "iii"}, {"a", a}, {"b", b}, {"g", g}}});
            }
        }
    for (Id a = 0; a < n; ++a)
        for (Id g = 0; g < G.n; ++g)
            if (groupoid.inv[act[a * G.n + g]] != act[groupoid.inv[a] * G.n + g])
                throw ValidationError({"AxiomViolated",
                                       "axiom (iv): (xi·g)^-1 != xi^-1·g",
                                       {{"axiom", "iv"}, {"arrow", a}, {"g", g}}});

    PBGGroupoid out;
    out.groupoid = std::move(groupoid);
    out.atlas = std::move(atlas);
    out.act = act;
    return out;
}

inline PBGGroupBundle validate_pbg_group_bundle(GroupBundle bundle,
                                                PrincipalBundleAtlas atlas,
                                                const std::vector<Id>& act)
{
    PBGGroupoid as_pbg =
        validate_pbg(bundle.groupoid, std::move(atlas), act);
    PBGGroupBundle out;
    out.bundle = std::move(bundle);
    out.atlas = std::move(as_pbg.atlas);
    out.act = act;
    return out;
}

// The inner group bundle I(Omega) of a PBG-groupoid with its restricted
// action, validated as a PBG-LGB.
inline PBGGroupBundle inner_pbg_bundle(const PBGGroupoid& pbg)
{
    InnerSubgroupoid in = inner_subgroupoid(pbg.groupoid);
    const FiniteGroup& G = pbg.group();
    std::vector<Id> act(in.embed.size() * G.n);
    for (size_t a = 0; a < in.embed.size(); ++a)
        for (Id g = 0; g < G.n; ++g)
            act[a * G.n + g] = in.embed_inv.at(pbg.act_arrow(in.embed[a], g));
    return validate_pbg_group_bundle(std::move(in.bundle), pbg.atlas, act);
}

// An extension of principal bundles N >-> Q(M,H) ->> P(M,G): the input of
// the extension -> PBG direction. P and its atlas are derived from Q.
struct BundleExtension {
    GroupExtension groups;     // N >-> H ->> G
    PrincipalBundleAtlas q;    // Q(M, H)
};

// Derived data of the transverse bundle Q(P, N) and the quotient P = Q/N.
struct TransverseBundle {
    std::vector<Id> q_to_p;       // Q -> P (orbit of the N-action)
    PrincipalBundleAtlas p_atlas; // P(M, G) with charts derived from Q's
};

inline TransverseBundle transverse_bundle(const BundleExtension& ext)
{
    const auto& Q = ext.q;
    const auto& gx = ext.groups;
    const int nq = Q.total;

    // N-orbits on Q in ascending minimal-element order
    std::vector<Id> q_to_p(nq, -1);
    std::vector<Id> p_rep;
    for (Id q = 0; q < nq; ++q) {
        if (q_to_p[q] >= 0) continue;
        Id id = static_cast<Id>(p_rep.size());
        p_rep.push_back(q);
        for (Id a = 0; a < gx.kernel.n; ++a)
            q_to_p[Q.act(q, gx.inj[a])] = id;
    }
    const int np = static_cast<int>(p_rep.size());

    const FiniteGroup& G = gx.quotient;
    std::vector<Id> proj_p(np);
    for (Id p = 0; p < np; ++p) proj_p[p] = Q.proj[p_rep[p]];
    // induced G-action: <q>·g = <q·lift(g)>
    std::vector<Id> act_p(static_cast<size_t>(np) * G.n);
    for (Id p = 0; p < np; ++p)
        for (Id g = 0; g < G.n; ++g)
            act_p[p * G.n + g] = q_to_p[Q.act(p_rep[p], gx.lift[g])];

    // charts: phi'_i(m, g) = <phi_i(m, lift(g))>
    std::vector<std::vector<Id>> charts(Q.n_charts());
    for (int i = 0; i < Q.n_charts(); ++i) {
        const auto& u = Q.cover[i];
        charts[i].resize(u.size() * G.n);
        for (size_t mi = 0; mi < u.size(); ++mi)
            for (Id g = 0; g < G.n; ++g)
                charts[i][mi * G.n + g] =
                    q_to_p[Q.chart_point(i, u[mi], gx.lift[g])];
    }
    std::vector<Id> basepoints(Q.n_charts());
    for (int i = 0; i < Q.n_charts(); ++i) basepoints[i] = q_to_p[Q.basepoints[i]];

    GroupAction action = validate_action(G, np, act_p);
    TransverseBundle out;
    out.q_to_p = q_to_p;
    out.p_atlas = validate_principal_bundle(np, Q.base, proj_p,
                                            std::move(action), Q.cover, charts,
                                            basepoints, q_to_p[Q.u0]);
    return out;
}

// Extension -> PBG: Omega = (Q x Q)/N over P = Q/N with the G-action
// <q2,q1>·g = <q2·h, q1·h> for any lift h of g.
struct PbgFromExtension {
    PBGGroupoid pbg;
    TransverseBundle transverse;
    std::vector<Id> pair_to_arrow;  // (Q x Q) -> arrows of Omega
};

inline PbgFromExtension pbg_from_extension(const BundleExtension& ext)
{
    TransverseBundle tv = transverse_bundle(ext);
    const auto& Q = ext.q;
    const auto& gx = ext.groups;

    // atlas of Q restricted to the N-action: Q(P, N)
    std::vector<Id> act_n(static_cast<size_t>(Q.total) * gx.kernel.n);
    for (Id q = 0; q < Q.total; ++q)
        for (Id a = 0; a < gx.kernel.n; ++a)
            act_n[q * gx.kernel.n + a] = Q.act(q, gx.inj[a]);
    GroupAction n_action = validate_action(gx.kernel, Q.total, act_n);
    // single full chart is enough for the gauge construction; fibers of
    // Q -> P are exactly the N-orbits
    std::vector<std::vector<Id>> cover_p{std::vector<Id>{}};
    for (Id p = 0; p < tv.p_atlas.total; ++p) cover_p[0].push_back(p);
    std::vector<std::vector<Id>> charts_p(1);
    charts_p[0].resize(static_cast<size_t>(tv.p_atlas.total) * gx.kernel.n);
    {
        std::vector<Id> rep(tv.p_atlas.total, -1);
        for (Id q = Q.total - 1; q >= 0; --q) rep[tv.q_to_p[q]] = q;
        // rep[p] = minimal q in the orbit
        for (Id p = 0; p < tv.p_atlas.total; ++p)
            for (Id a = 0; a < gx.kernel.n; ++a)
                charts_p[0][p * gx.kernel.n + a] = n_action.apply(rep[p], a);
    }
    PrincipalBundleAtlas q_over_p = validate_principal_bundle(
        Q.total, tv.p_atlas.total, tv.q_to_p, std::move(n_action), cover_p,
        charts_p, {Q.u0}, Q.u0);

    GaugeGroupoid gauge = gauge_groupoid(q_over_p);
    const int nq = Q.total;
    const int na = gauge.groupoid.n_arrows;
    const FiniteGroup& G = gx.quotient;

    std::vector<Id> act_arrows(static_cast<size_t>(na) * G.n);
    for (Id a = 0; a < na; ++a) {
        auto [t, s] = gauge.reps[a];
        for (Id g = 0; g < G.n; ++g) {
            Id h = gx.lift[g];
            act_arrows[a * G.n + g] =
                gauge.pair_to_arrow[Q.act(t, h) * nq + Q.act(s, h)];
        }
    }

    PbgFromExtension out;
    out.pbg = validate_pbg(gauge.groupoid, tv.p_atlas, act_arrows);
    out.transverse = std::move(tv);
    out.pair_to_arrow = std::move(gauge.pair_to_arrow);
    return out;
}

// PBG -> extension: I(Upsilon)/G >-> Upsilon/G ->> (P x P)/G over M.
inline GroupoidExtension extension_from_pbg(const PBGGroupoid& pbg)
{
    if (!pbg.groupoid.transitive())
        throw ValidationError(
            {"NotTransitive", "quotient extension needs a transitive "
                              "PBG-groupoid", {}});
    GroupoidQuotient mid =
        quotient_groupoid_by_action(pbg.groupoid, pbg.atlas, pbg.act);

    GaugeGroupoid gauge = gauge_groupoid(pbg.atlas);

    // kernel: G-orbits of inner arrows
    InnerSubgroupoid in = inner_subgroupoid(pbg.groupoid);
    const FiniteGroup& G = pbg.group();
    std::vector<Id> act_inner(in.embed.size() * G.n);
    for (size_t a = 0; a < in.embed.size(); ++a)
        for (Id g = 0; g < G.n; ++g)
            act_inner[a * G.n + g] = in.embed_inv.at(pbg.act_arrow(in.embed[a], g));
    GroupoidQuotient ker =
        quotient_groupoid_by_action(in.bundle.groupoid, pbg.atlas, act_inner);

    GroupoidMorphism inj;
    inj.base_map.resize(pbg.atlas.base);
    for (Id x = 0; x < pbg.atlas.base; ++x) inj.base_map[x] = x;
    inj.arrow_map.resize(ker.groupoid.n_arrows);
    for (Id c = 0; c < ker.groupoid.n_arrows; ++c)
        inj.arrow_map[c] = mid.orbit_of[in.embed[ker.rep_of[c]]];

    GroupoidMorphism surj;
    surj.base_map = inj.base_map;
    surj.arrow_map.resize(mid.groupoid.n_arrows);
    const int P = pbg.atlas.total;
    for (Id c = 0; c < mid.groupoid.n_arrows; ++c) {
        Id a = mid.rep_of[c];
        surj.arrow_map[c] =
            gauge.pair_to_arrow[pbg.groupoid.tgt[a] * P + pbg.groupoid.src[a]];
    }

    return validate_extension(validate_group_bundle(ker.groupoid),
                              mid.groupoid, gauge.groupoid, inj, surj);
}

// Reference groupoid extension of a bundle extension:
// (Q x N)/H >-> (Q x Q)/H ->> (P x P)/G over M. The kernel is realised as
// the inner subgroupoid of the middle gauge groupoid.
inline GroupoidExtension reference_extension(const BundleExtension& ext)
{
    TransverseBundle tv = transverse_bundle(ext);
    GaugeGroupoid mid = gauge_groupoid(ext.q);
    GaugeGroupoid quot = gauge_groupoid(tv.p_atlas);

    // kernel arrows <t,s> with t, s in the same N-orbit — the image of
    // (Q x N)/H under (q, n) -> <q·n, q>
    InnerSubgroupoid in = loop_subgroupoid(mid.groupoid, [&](Id a) {
        const auto& [t, s] = mid.reps[a];
        return tv.q_to_p[t] == tv.q_to_p[s];
    });
    GroupoidMorphism inj;
    inj.base_map.resize(ext.q.base);
    for (Id x = 0; x < ext.q.base; ++x) inj.base_map[x] = x;
    inj.arrow_map = in.embed;

    GroupoidMorphism surj;
    surj.base_map = inj.base_map;
    surj.arrow_map.resize(mid.groupoid.n_arrows);
    const int P = tv.p_atlas.total;
    for (Id c = 0; c < mid.groupoid.n_arrows; ++c) {
        auto [t, s] = mid.reps[c];
        surj.arrow_map[c] = quot.pair_to_arrow[tv.q_to_p[t] * P + tv.q_to_p[s]];
    }
    return validate_extension(validate_group_bundle(in.bundle.groupoid),
                              mid.groupoid, quot.groupoid, inj, surj);
}

// An isomorphism of groupoid extensions: a middle isomorphism over a base
// bijection that descends to the quotients and preserves the kernel image.
struct ExtensionIso {
    GroupoidMorphism middle;
    GroupoidMorphism quotient;
};

inline std::optional<ExtensionIso> find_extension_iso(
    const GroupoidExtension& a, const GroupoidExtension& b,
    std::uint64_t budget = 1u << 22)
{
    if (a.middle.n_base != b.middle.n_base ||
        a.middle.n_arrows != b.middle.n_arrows ||
        a.quotient.n_arrows != b.quotient.n_arrows ||
        a.kernel.groupoid.n_arrows != b.kernel.groupoid.n_arrows)
        return std::nullopt;
    const int nb = a.middle.n_base;

    std::vector<char> a_in_ker(a.middle.n_arrows, 0), b_in_ker(b.middle.n_arrows, 0);
    for (Id k = 0; k < a.kernel.groupoid.n_arrows; ++k)
        a_in_ker[a.inj.arrow_map[k]] = 1;
    for (Id k = 0; k < b.kernel.groupoid.n_arrows; ++k)
        b_in_ker[b.inj.arrow_map[k]] = 1;

    // enumerate base bijections, then middle isos over each
    std::vector<Id> perm(nb);
    for (Id x = 0; x < nb; ++x) perm[x] = x;
    std::sort(perm.begin(), perm.end());
    do {
        IsoOptions opt;
        opt.base_map = perm;
        opt.budget = budget;
        auto phi = find_groupoid_iso(a.middle, b.middle, opt);
        if (!phi) continue;
        // kernel image preserved?
        bool ok = true;
        for (Id m = 0; m < a.middle.n_arrows && ok; ++m)
            if (a_in_ker[m] != b_in_ker[phi->arrow_map[m]]) ok = false;
        if (!ok) continue;
        // induced quotient map: surj_b(phi(x)) must factor through surj_a
        std::vector<Id> qmap(a.quotient.n_arrows, -1);
        for (Id m = 0; m < a.middle.n_arrows && ok; ++m) {
            Id qa = a.surj.arrow_map[m];
            Id qb = b.surj.arrow_map[phi->arrow_map[m]];
            if (qmap[qa] < 0)
                qmap[qa] = qb;
            else if (qmap[qa] != qb)
                ok = false;
        }
        if (!ok) continue;
        GroupoidMorphism psi;
        psi.base_map = perm;
        psi.arrow_map = qmap;
        try {
            validate_morphism(a.quotient, b.quotient, psi);
        } catch (const ValidationError&) {
            continue;
        }
        return ExtensionIso{std::move(*phi), std::move(psi)};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

}  // namespace gcl
