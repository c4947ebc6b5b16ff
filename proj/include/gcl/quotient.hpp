// Quotients of groupoids by free group actions: the gauge groupoid
// (P x P)/G of a principal bundle, and groupoid extensions.
#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "gcl/base.hpp"
#include "gcl/bundle.hpp"
#include "gcl/groupoid.hpp"

namespace gcl {

// Gauge groupoid of an atlas. Arrows are diagonal G-orbits of pairs
// (t, s) in P x P; <u2,u1> runs proj(u1) -> proj(u2). The orbit map
// pair_to_arrow (indexed t*|P|+s) is returned alongside.
struct GaugeGroupoid {
    FiniteGroupoid groupoid;               // over M
    std::vector<Id> pair_to_arrow;         // (P x P) -> arrows
    std::vector<std::pair<Id, Id>> reps;   // arrow -> minimal pair (t, s)
};

inline GaugeGroupoid gauge_groupoid(const PrincipalBundleAtlas& atlas)
{
    const int P = atlas.total;
    const FiniteGroup& G = atlas.group();
    GaugeGroupoid out;
    out.pair_to_arrow.assign(static_cast<size_t>(P) * P, -1);

    // canonical representative: lexicographically minimal pair in the orbit
    std::map<std::pair<Id, Id>, Id> rep_ids;
    for (Id t = 0; t < P; ++t)
        for (Id s = 0; s < P; ++s) {
            std::pair<Id, Id> rep{t, s};
            for (Id g = 0; g < G.n; ++g)
                rep = std::min(rep, {atlas.act(t, g), atlas.act(s, g)});
            auto it = rep_ids.find(rep);
            if (it == rep_ids.end())
                rep_ids.emplace(rep, -1);
        }
    Id next = 0;
    for (auto& [rep, id] : rep_ids) id = next++;
    for (Id t = 0; t < P; ++t)
        for (Id s = 0; s < P; ++s) {
            std::pair<Id, Id> rep{t, s};
            for (Id g = 0; g < G.n; ++g)
                rep = std::min(rep, {atlas.act(t, g), atlas.act(s, g)});
            out.pair_to_arrow[t * P + s] = rep_ids.at(rep);
        }

    FiniteGroupoid g;
    g.n_base = atlas.base;
    g.n_arrows = next;
    g.src.resize(next);
    g.tgt.resize(next);
    g.inv.resize(next);
    g.unit.assign(atlas.base, -1);
    g.mul.assign(static_cast<size_t>(next) * next, -1);
    out.reps.resize(next);
    for (const auto& [rep, id] : rep_ids) {
        out.reps[id] = rep;
        g.tgt[id] = atlas.proj[rep.first];
        g.src[id] = atlas.proj[rep.second];
        g.inv[id] = out.pair_to_arrow[rep.second * P + rep.first];
    }
    for (Id p = 0; p < P; ++p)
        g.unit[atlas.proj[p]] = out.pair_to_arrow[p * P + p];

    // <u2,u1><u2',u1'> = <u2, u1'·g> where u1 = u2'·g
    for (Id a = 0; a < next; ++a)
        for (Id b = 0; b < next; ++b) {
            if (g.src[a] != g.tgt[b]) continue;
            auto [t1, s1] = out.reps[a];
            auto [t2, s2] = out.reps[b];
            Id gg = -1;
            for (Id h = 0; h < G.n; ++h)
                if (atlas.act(t2, h) == s1) {
                    gg = h;
                    break;
                }
            g.mul[a * next + b] =
                out.pair_to_arrow[t1 * P + atlas.act(s2, gg)];
        }
    out.groupoid = std::move(g);
    return out;
}

// Quotient of a groupoid over P by a free G-action on its arrows covering
// the G-action on P. Arrows of the quotient are G-orbits; representatives
// are minimal arrow ids. The base of the quotient is M.
struct GroupoidQuotient {
    FiniteGroupoid groupoid;        // over M
    std::vector<Id> orbit_of;       // arrow of Omega -> arrow of Omega/G
    std::vector<Id> rep_of;         // quotient arrow -> minimal member
};

inline GroupoidQuotient quotient_groupoid_by_action(
    const FiniteGroupoid& omega, const PrincipalBundleAtlas& atlas,
    const std::vector<Id>& arrow_act /* arrows x |G| */)
{
    const FiniteGroup& G = atlas.group();
    const int n = omega.n_arrows;
    GroupoidQuotient out;
    out.orbit_of.assign(n, -1);
    // ascending sweep: an unassigned arrow is the minimum of its orbit
    for (Id a = 0; a < n; ++a) {
        if (out.orbit_of[a] >= 0) continue;
        Id id = static_cast<Id>(out.rep_of.size());
        out.rep_of.push_back(a);
        for (Id g = 0; g < G.n; ++g) out.orbit_of[arrow_act[a * G.n + g]] = id;
    }

    const int m = static_cast<int>(out.rep_of.size());
    FiniteGroupoid q;
    q.n_base = atlas.base;
    q.n_arrows = m;
    q.src.resize(m);
    q.tgt.resize(m);
    q.inv.resize(m);
    q.unit.assign(atlas.base, -1);
    q.mul.assign(static_cast<size_t>(m) * m, -1);
    for (Id c = 0; c < m; ++c) {
        Id a = out.rep_of[c];
        q.src[c] = atlas.proj[omega.src[a]];
        q.tgt[c] = atlas.proj[omega.tgt[a]];
        q.inv[c] = out.orbit_of[omega.inv[a]];
    }
    for (Id x = 0; x < atlas.total; ++x)
        q.unit[atlas.proj[x]] = out.orbit_of[omega.unit[x]];
    // <a><b> = <a·(b·g)> for the unique g with src(a) = tgt(b)·g
    for (Id c = 0; c < m; ++c)
        for (Id d = 0; d < m; ++d) {
            if (q.src[c] != q.tgt[d]) continue;
            Id a = out.rep_of[c], b = out.rep_of[d];
            Id gg = -1;
            for (Id g = 0; g < G.n; ++g)
                if (atlas.act(omega.tgt[b], g) == omega.src[a]) {
                    gg = g;
                    break;
                }
            Id bg = arrow_act[b * G.n + gg];
            q.mul[c * m + d] = out.orbit_of[omega.compose(a, bg)];
        }
    out.groupoid = std::move(q);
    return out;
}

// An extension of groupoids over a common base:
// kernel >--inj--> middle --surj->> quotient.
struct GroupoidExtension {
    GroupBundle kernel;
    FiniteGroupoid middle;
    FiniteGroupoid quotient;
    GroupoidMorphism inj;   // kernel.groupoid -> middle, over id
    GroupoidMorphism surj;  // middle -> quotient, over id
};

inline GroupoidExtension validate_extension(GroupBundle kernel,
                                            FiniteGroupoid middle,
                                            FiniteGroupoid quotient,
                                            GroupoidMorphism inj,
                                            GroupoidMorphism surj)
{
    if (kernel.groupoid.n_base != middle.n_base ||
        middle.n_base != quotient.n_base)
        throw ValidationError(
            {"NotAnExtension", "terms do not share a base", {}});
    validate_morphism(kernel.groupoid, middle, inj);
    validate_morphism(middle, quotient, surj);
    for (Id x = 0; x < middle.n_base; ++x)
        if (inj.base_map[x] != x || surj.base_map[x] != x)
            throw ValidationError(
                {"NotAnExtension", "morphisms must be over the identity",
                 {{"x", x}}});
    for (Id a = 0; a < kernel.groupoid.n_arrows; ++a)
        for (Id b = a + 1; b < kernel.groupoid.n_arrows; ++b)
            if (inj.arrow_map[a] == inj.arrow_map[b])
                throw ValidationError({"NotInjective",
                                       "kernel arrows collide in middle",
                                       {{"a", a}, {"b", b}}});
    std::vector<char> hit(quotient.n_arrows, 0);
    for (Id a = 0; a < middle.n_arrows; ++a) hit[surj.arrow_map[a]] = 1;
    for (Id c = 0; c < quotient.n_arrows; ++c)
        if (!hit[c])
            throw ValidationError({"NotSurjective",
                                   "quotient arrow unreachable",
                                   {{"arrow", c}}});
    // image(inj) = surj^-1(units of quotient)
    std::vector<char> in_image(middle.n_arrows, 0);
    for (Id a = 0; a < kernel.groupoid.n_arrows; ++a)
        in_image[inj.arrow_map[a]] = 1;
    std::vector<char> is_unit(quotient.n_arrows, 0);
    for (Id x = 0; x < quotient.n_base; ++x) is_unit[quotient.unit[x]] = 1;
    for (Id a = 0; a < middle.n_arrows; ++a)
        if (in_image[a] != is_unit[surj.arrow_map[a]])
            throw ValidationError({"KernelMismatch",
                                   "image of kernel differs from preimage of "
                                   "quotient units",
                                   {{"arrow", a}}});
    return GroupoidExtension{std::move(kernel), std::move(middle),
                             std::move(quotient), std::move(inj),
                             std::move(surj)};
}

}  // namespace gcl
