// Finite groupoids with explicit arrow tables, pair/action constructions,
// morphisms and group bundles.
#pragma once

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <vector>

#include "gcl/base.hpp"
#include "gcl/group.hpp"

namespace gcl {

// Arrows compose like functions: compose(a, b) is defined iff src(a) = tgt(b)
// and runs src(b) -> tgt(a). mul stores -1 where undefined.
struct FiniteGroupoid {
    int n_base = 0;
    int n_arrows = 0;
    std::vector<Id> src, tgt;
    std::vector<Id> unit;  // base -> arrows
    std::vector<Id> mul;   // n_arrows^2, -1 where not composable
    std::vector<Id> inv;

    bool composable(Id a, Id b) const { return src[a] == tgt[b]; }
    Id compose(Id a, Id b) const { return mul[a * n_arrows + b]; }
    Id inverse(Id a) const { return inv[a]; }

    // Arrows x -> y, in increasing id order.
    std::vector<Id> hom(Id x, Id y) const
    {
        std::vector<Id> out;
        for (Id a = 0; a < n_arrows; ++a)
            if (src[a] == x && tgt[a] == y) out.push_back(a);
        return out;
    }

    bool transitive() const
    {
        for (Id x = 0; x < n_base; ++x)
            for (Id y = 0; y < n_base; ++y) {
                bool found = false;
                for (Id a = 0; a < n_arrows && !found; ++a)
                    if (src[a] == x && tgt[a] == y) found = true;
                if (!found) return false;
            }
        return true;
    }

    // Partition of the base into transitivity classes (sorted).
    std::vector<std::vector<Id>> transitivity_classes() const
    {
        std::vector<Id> rep(n_base);
        for (Id x = 0; x < n_base; ++x) rep[x] = x;
        std::function<Id(Id)> find = [&](Id x) {
            while (rep[x] != x) x = rep[x] = rep[rep[x]];
            return x;
        };
        for (Id a = 0; a < n_arrows; ++a) {
            Id x = find(src[a]), y = find(tgt[a]);
            if (x != y) rep[std::max(x, y)] = std::min(x, y);
        }
        std::vector<std::vector<Id>> classes;
        std::unordered_map<Id, int> idx;
        for (Id x = 0; x < n_base; ++x) {
            Id r = find(x);
            auto it = idx.find(r);
            if (it == idx.end()) {
                idx[r] = static_cast<int>(classes.size());
                classes.push_back({x});
            } else {
                classes[it->second].push_back(x);
            }
        }
        return classes;
    }
};

// Validates all groupoid axioms by full iteration.
inline FiniteGroupoid validate_groupoid(int n_base, int n_arrows,
                                        const std::vector<Id>& src,
                                        const std::vector<Id>& tgt,
                                        const std::vector<Id>& unit,
                                        const std::vector<Id>& mul,
                                        const std::vector<Id>& inv)
{
    auto bad = [&](const std::string& what, json w = json::object()) {
        throw ValidationError({"BadTable", what, std::move(w)});
    };
    if (n_base <= 0 || n_arrows <= 0) bad("empty base or arrow set");
    if (static_cast<int>(src.size()) != n_arrows ||
        static_cast<int>(tgt.size()) != n_arrows ||
        static_cast<int>(inv.size()) != n_arrows ||
        static_cast<int>(unit.size()) != n_base ||
        static_cast<int>(mul.size()) != n_arrows * n_arrows)
        bad("table sizes inconsistent with declared counts");
    for (Id a = 0; a < n_arrows; ++a) {
        if (src[a] < 0 || src[a] >= n_base || tgt[a] < 0 || tgt[a] >= n_base)
            bad("src/tgt out of range", {{"arrow", a}});
        if (inv[a] < 0 || inv[a] >= n_arrows)
            bad("inv out of range", {{"arrow", a}});
    }
    for (Id x = 0; x < n_base; ++x) {
        Id u = unit[x];
        if (u < 0 || u >= n_arrows) bad("unit out of range", {{"x", x}});
        if (src[u] != x || tgt[u] != x)
            throw ValidationError({"BadUnit",
                                   "unit arrow not a loop at its point",
                                   {{"x", x}, {"unit", u}}});
    }

    FiniteGroupoid g;
    g.n_base = n_base;
    g.n_arrows = n_arrows;
    g.src = src;
    g.tgt = tgt;
    g.unit = unit;
    g.mul = mul;
    g.inv = inv;

    // mul defined exactly on composable pairs, endpoints as required
    for (Id a = 0; a < n_arrows; ++a)
        for (Id b = 0; b < n_arrows; ++b) {
            Id c = mul[a * n_arrows + b];
            if (g.composable(a, b)) {
                if (c < 0 || c >= n_arrows)
                    throw ValidationError({"MulDomainWrong",
                                           "product of composable pair missing",
                                           {{"a", a}, {"b", b}}});
                if (src[c] != src[b] || tgt[c] != tgt[a])
                    throw ValidationError({"MulDomainWrong",
                                           "product has wrong endpoints",
                                           {{"a", a}, {"b", b}, {"ab", c}}});
            } else if (c != -1) {
                throw ValidationError({"MulDomainWrong",
                                       "product defined on non-composable pair",
                                       {{"a", a}, {"b", b}}});
            }
        }

    // units neutral
    for (Id a = 0; a < n_arrows; ++a) {
        if (g.compose(a, unit[src[a]]) != a || g.compose(unit[tgt[a]], a) != a)
            throw ValidationError(
                {"BadUnit", "unit not neutral", {{"arrow", a}}});
    }
    // inverses two-sided with src/tgt swapped
    for (Id a = 0; a < n_arrows; ++a) {
        Id b = inv[a];
        if (src[b] != tgt[a] || tgt[b] != src[a] ||
            g.compose(a, b) != unit[tgt[a]] || g.compose(b, a) != unit[src[a]])
            throw ValidationError(
                {"BadInverse", "inv not a two-sided inverse", {{"arrow", a}}});
    }
    // associativity on all composable triples
    for (Id a = 0; a < n_arrows; ++a)
        for (Id b = 0; b < n_arrows; ++b) {
            if (!g.composable(a, b)) continue;
            for (Id c = 0; c < n_arrows; ++c) {
                if (!g.composable(b, c)) continue;
                if (g.compose(g.compose(a, b), c) !=
                    g.compose(a, g.compose(b, c)))
                    throw ValidationError({"NotAssociative",
                                           "(a·b)·c != a·(b·c)",
                                           {{"a", a}, {"b", b}, {"c", c}}});
            }
        }
    return g;
}

// Pair groupoid of {0..m-1}: arrow (y, x) : x -> y has id y*m + x.
inline FiniteGroupoid pair_groupoid(int m)
{
    FiniteGroupoid g;
    g.n_base = m;
    g.n_arrows = m * m;
    g.src.resize(g.n_arrows);
    g.tgt.resize(g.n_arrows);
    g.inv.resize(g.n_arrows);
    g.unit.resize(m);
    g.mul.assign(g.n_arrows * g.n_arrows, -1);
    for (Id y = 0; y < m; ++y)
        for (Id x = 0; x < m; ++x) {
            Id a = y * m + x;
            g.src[a] = x;
            g.tgt[a] = y;
            g.inv[a] = x * m + y;
        }
    for (Id x = 0; x < m; ++x) g.unit[x] = x * m + x;
    for (Id a = 0; a < g.n_arrows; ++a)
        for (Id b = 0; b < g.n_arrows; ++b)
            if (g.src[a] == g.tgt[b])
                g.mul[a * g.n_arrows + b] = g.tgt[a] * m + g.src[b];
    return g;
}

// Action groupoid of a right action: arrows (x, g) : x -> x·g with
// (xg, h)·(x, g) = (x, gh), unit (x, e), inverse (xg, g^-1).
inline FiniteGroupoid action_groupoid(const GroupAction& act)
{
    const FiniteGroup& G = act.group;
    const int m = act.carrier;
    FiniteGroupoid g;
    g.n_base = m;
    g.n_arrows = m * G.n;
    auto id_of = [&](Id x, Id h) { return x * G.n + h; };
    g.src.resize(g.n_arrows);
    g.tgt.resize(g.n_arrows);
    g.inv.resize(g.n_arrows);
    g.unit.resize(m);
    g.mul.assign(static_cast<size_t>(g.n_arrows) * g.n_arrows, -1);
    for (Id x = 0; x < m; ++x)
        for (Id h = 0; h < G.n; ++h) {
            Id a = id_of(x, h);
            g.src[a] = x;
            g.tgt[a] = act.apply(x, h);
            g.inv[a] = id_of(act.apply(x, h), G.inverse(h));
        }
    for (Id x = 0; x < m; ++x) g.unit[x] = id_of(x, G.e);
    for (Id a = 0; a < g.n_arrows; ++a)
        for (Id b = 0; b < g.n_arrows; ++b)
            if (g.src[a] == g.tgt[b]) {
                Id x = g.src[b];
                Id gb = b % G.n, ga = a % G.n;
                g.mul[a * g.n_arrows + b] = id_of(x, G.op(gb, ga));
            }
    return g;
}

// Vertex group Omega_x^x presented as a FiniteGroup over the loop arrows.
struct VertexGroup {
    FiniteGroup group;
    std::vector<Id> arrows;            // H-index -> arrow id
    std::unordered_map<Id, int> index; // arrow id -> H-index

    int size() const { return group.n; }
    Id arrow_of(int h) const { return arrows[h]; }
    int index_of(Id a) const { return index.at(a); }
};

inline VertexGroup vertex_group(const FiniteGroupoid& g, Id x)
{
    VertexGroup v;
    for (Id a = 0; a < g.n_arrows; ++a)
        if (g.src[a] == x && g.tgt[a] == x) {
            v.index[a] = static_cast<int>(v.arrows.size());
            v.arrows.push_back(a);
        }
    const int n = static_cast<int>(v.arrows.size());
    std::vector<Id> mul(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            mul[i * n + j] = v.index.at(g.compose(v.arrows[i], v.arrows[j]));
    v.group = validate_group(n, mul, v.index.at(g.unit[x]));
    return v;
}

// A morphism of groupoids over base_map; arrow_map commutes with all
// structure maps.
struct GroupoidMorphism {
    std::vector<Id> base_map;
    std::vector<Id> arrow_map;
};

inline void validate_morphism(const FiniteGroupoid& dom,
                              const FiniteGroupoid& cod,
                              const GroupoidMorphism& f)
{
    if (static_cast<int>(f.base_map.size()) != dom.n_base ||
        static_cast<int>(f.arrow_map.size()) != dom.n_arrows)
        throw ValidationError({"BadTable", "morphism tables sized wrong", {}});
    for (Id a = 0; a < dom.n_arrows; ++a) {
        Id fa = f.arrow_map[a];
        if (fa < 0 || fa >= cod.n_arrows)
            throw ValidationError(
                {"BadTable", "arrow image out of range", {{"arrow", a}}});
        if (cod.src[fa] != f.base_map[dom.src[a]] ||
            cod.tgt[fa] != f.base_map[dom.tgt[a]])
            throw ValidationError({"NotAMorphism",
                                   "src/tgt not preserved",
                                   {{"arrow", a}}});
        if (f.arrow_map[dom.inv[a]] != cod.inv[fa])
            throw ValidationError(
                {"NotAMorphism", "inv not preserved", {{"arrow", a}}});
    }
    for (Id x = 0; x < dom.n_base; ++x)
        if (f.arrow_map[dom.unit[x]] != cod.unit[f.base_map[x]])
            throw ValidationError(
                {"NotAMorphism", "unit not preserved", {{"x", x}}});
    for (Id a = 0; a < dom.n_arrows; ++a)
        for (Id b = 0; b < dom.n_arrows; ++b)
            if (dom.composable(a, b) &&
                f.arrow_map[dom.compose(a, b)] !=
                    cod.compose(f.arrow_map[a], f.arrow_map[b]))
                throw ValidationError({"NotAMorphism",
                                       "composition not preserved",
                                       {{"a", a}, {"b", b}}});
}

// A bundle of groups: a groupoid all of whose arrows are loops.
struct GroupBundle {
    FiniteGroupoid groupoid;

    std::vector<Id> fiber_arrows(Id x) const { return groupoid.hom(x, x); }
};

inline GroupBundle validate_group_bundle(FiniteGroupoid g)
{
    for (Id a = 0; a < g.n_arrows; ++a)
        if (g.src[a] != g.tgt[a])
            throw ValidationError({"NotAGroupBundle",
                                   "non-loop arrow in group bundle",
                                   {{"arrow", a}}});
    return GroupBundle{std::move(g)};
}

// A loop subgroupoid of Omega re-indexed as a group bundle, together with
// the embedding arrow map.
struct InnerSubgroupoid {
    GroupBundle bundle;
    std::vector<Id> embed;                // new arrow -> old arrow
    std::unordered_map<Id, Id> embed_inv; // old arrow -> new arrow
};

// Subgroupoid induced on the loops satisfying `keep` (which must be closed
// under composition, inverses and contain all units).
inline InnerSubgroupoid loop_subgroupoid(const FiniteGroupoid& g,
                                         const std::function<bool(Id)>& keep)
{
    InnerSubgroupoid out;
    for (Id a = 0; a < g.n_arrows; ++a)
        if (g.src[a] == g.tgt[a] && keep(a)) {
            out.embed_inv[a] = static_cast<Id>(out.embed.size());
            out.embed.push_back(a);
        }
    FiniteGroupoid in;
    in.n_base = g.n_base;
    in.n_arrows = static_cast<int>(out.embed.size());
    in.src.resize(in.n_arrows);
    in.tgt.resize(in.n_arrows);
    in.inv.resize(in.n_arrows);
    in.unit.resize(g.n_base);
    in.mul.assign(static_cast<size_t>(in.n_arrows) * in.n_arrows, -1);
    for (Id a = 0; a < in.n_arrows; ++a) {
        Id old = out.embed[a];
        in.src[a] = g.src[old];
        in.tgt[a] = g.tgt[old];
        in.inv[a] = out.embed_inv.at(g.inv[old]);
    }
    for (Id x = 0; x < g.n_base; ++x) in.unit[x] = out.embed_inv.at(g.unit[x]);
    for (Id a = 0; a < in.n_arrows; ++a)
        for (Id b = 0; b < in.n_arrows; ++b)
            if (in.src[a] == in.tgt[b])
                in.mul[a * in.n_arrows + b] =
                    out.embed_inv.at(g.compose(out.embed[a], out.embed[b]));
    out.bundle = GroupBundle{std::move(in)};
    return out;
}

// The inner subgroupoid I(Omega): all arrows with src = tgt.
inline InnerSubgroupoid inner_subgroupoid(const FiniteGroupoid& g)
{
    return loop_subgroupoid(g, [](Id) { return true; });
}

}  // namespace gcl
