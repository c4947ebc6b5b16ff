// Exact isomorphism search between small groupoids.
//
// Every isomorphism over a fixed base bijection b decomposes, per
// transitivity component with basepoint x0, into a vertex-group isomorphism
// lambda and arrows B(y) from b(x0) to b(y); the search enumerates these
// and filters by any extra constraint (e.g. equivariance).
#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "gcl/base.hpp"
#include "gcl/groupoid.hpp"

namespace gcl {

struct IsoOptions {
    // fixed base bijection; empty = search over all base bijections
    std::vector<Id> base_map;
    // equivariance: arrow actions (arrows x n_g) on both sides, same group
    const std::vector<Id>* act_dom = nullptr;
    const std::vector<Id>* act_cod = nullptr;
    int n_g = 0;
    std::uint64_t budget = 1u << 22;  // candidate evaluations
};

namespace detail {

// Enumerates isomorphisms dom -> cod as images of a generating sequence,
// calling sink(map) for each; sink returns true to stop the search.
inline bool enumerate_group_isos(
    const FiniteGroup& dom, const FiniteGroup& cod,
    const std::function<bool(const std::vector<Id>&)>& sink)
{
    if (dom.n != cod.n) return false;
    // greedy generating sequence of dom
    std::vector<Id> gens;
    {
        std::vector<char> have(dom.n, 0);
        have[dom.e] = 1;
        int covered = 1;
        while (covered < dom.n) {
            Id pick = -1;
            for (Id a = 0; a < dom.n; ++a)
                if (!have[a]) {
                    pick = a;
                    break;
                }
            gens.push_back(pick);
            // close under multiplication with the new generator
            bool grew = true;
            have[pick] = 1;
            ++covered;
            while (grew) {
                grew = false;
                for (Id a = 0; a < dom.n; ++a)
                    if (have[a])
                        for (Id b = 0; b < dom.n; ++b)
                            if (have[b] && !have[dom.op(a, b)]) {
                                have[dom.op(a, b)] = 1;
                                ++covered;
                                grew = true;
                            }
            }
        }
    }

    std::vector<Id> order_dom(dom.n), order_cod(cod.n);
    auto elem_order = [](const FiniteGroup& g, Id a) {
        int k = 1;
        Id x = a;
        while (x != g.e) {
            x = g.op(x, a);
            ++k;
        }
        return k;
    };
    for (Id a = 0; a < dom.n; ++a) order_dom[a] = elem_order(dom, a);
    for (Id a = 0; a < cod.n; ++a) order_cod[a] = elem_order(cod, a);

    std::vector<Id> map(dom.n, -1);
    std::vector<char> used(cod.n, 0);
    map[dom.e] = cod.e;
    used[cod.e] = 1;

    // closes the partial map under products of mapped elements; returns
    // false on conflict
    std::function<bool(size_t)> rec = [&](size_t gi) -> bool {
        if (gi == gens.size()) {
            for (Id a = 0; a < dom.n; ++a)
                if (map[a] < 0) return false;
            return sink(map);
        }
        Id gen = gens[gi];
        for (Id img = 0; img < cod.n; ++img) {
            if (used[img] || order_cod[img] != order_dom[gen]) continue;
            auto saved_map = map;
            auto saved_used = used;
            map[gen] = img;
            used[img] = 1;
            bool ok = true;
            // deduce closure
            bool grew = true;
            while (grew && ok) {
                grew = false;
                for (Id a = 0; a < dom.n && ok; ++a) {
                    if (map[a] < 0) continue;
                    for (Id b = 0; b < dom.n && ok; ++b) {
                        if (map[b] < 0) continue;
                        Id ab = dom.op(a, b);
                        Id im = cod.op(map[a], map[b]);
                        if (map[ab] < 0) {
                            if (used[im]) {
                                ok = false;
                                break;
                            }
                            map[ab] = im;
                            used[im] = 1;
                            grew = true;
                        } else if (map[ab] != im) {
                            ok = false;
                        }
                    }
                }
            }
            if (ok && rec(gi + 1)) return true;
            map = saved_map;
            used = saved_used;
        }
        return false;
    };
    return rec(0);
}

}  // namespace detail

// Searches for an isomorphism dom -> cod subject to options; returns the
// morphism if one exists. Throws CapError when the budget is exhausted.
inline std::optional<GroupoidMorphism> find_groupoid_iso(
    const FiniteGroupoid& dom, const FiniteGroupoid& cod,
    const IsoOptions& opt = {})
{
    if (dom.n_base != cod.n_base || dom.n_arrows != cod.n_arrows)
        return std::nullopt;
    const int nb = dom.n_base;

    std::uint64_t spent = 0;
    auto charge = [&](std::uint64_t k) {
        spent += k;
        if (spent > opt.budget)
            throw CapError("iso-search", spent, opt.budget);
    };

    // per-point invariant for pruning base bijections
    auto loops_at = [](const FiniteGroupoid& g, Id x) {
        int n = 0;
        for (Id a = 0; a < g.n_arrows; ++a)
            if (g.src[a] == x && g.tgt[a] == x) ++n;
        return n;
    };
    std::vector<int> inv_dom(nb), inv_cod(nb);
    for (Id x = 0; x < nb; ++x) {
        inv_dom[x] = loops_at(dom, x);
        inv_cod[x] = loops_at(cod, x);
    }

    auto comps = dom.transitivity_classes();

    // hom-set sizes must agree under the base map
    auto base_ok = [&](const std::vector<Id>& b) {
        for (Id x = 0; x < nb; ++x)
            if (inv_dom[x] != inv_cod[b[x]]) return false;
        // components must map onto components
        for (const auto& comp : comps) {
            for (size_t i = 1; i < comp.size(); ++i) {
                bool connected = false;
                for (Id a = 0; a < cod.n_arrows && !connected; ++a)
                    if (cod.src[a] == b[comp[0]] && cod.tgt[a] == b[comp[i]])
                        connected = true;
                if (!connected) return false;
            }
        }
        return true;
    };

    // attempt to build an iso over a fixed base bijection
    auto try_base = [&](const std::vector<Id>& b)
        -> std::optional<GroupoidMorphism> {
        // per component: basepoint x0, vertex groups, spanning arrows
        struct CompData {
            Id x0;
            std::vector<Id> points;           // excluding x0
            VertexGroup vg_dom, vg_cod;
            std::vector<Id> A;                // A[y]: arrow x0 -> y in dom
            std::vector<std::vector<Id>> Bc;  // candidate arrows b(x0)->b(y)
        };
        std::vector<CompData> data;
        for (const auto& comp : comps) {
            CompData cd;
            cd.x0 = comp[0];
            cd.vg_dom = vertex_group(dom, cd.x0);
            cd.vg_cod = vertex_group(cod, b[cd.x0]);
            if (cd.vg_dom.size() != cd.vg_cod.size()) return std::nullopt;
            for (Id y : comp)
                if (y != cd.x0) cd.points.push_back(y);
            cd.A.assign(nb, -1);
            cd.A[cd.x0] = dom.unit[cd.x0];
            for (Id y : cd.points) {
                auto h = dom.hom(cd.x0, y);
                if (h.empty()) return std::nullopt;
                cd.A[y] = h[0];
            }
            for (Id y : cd.points) {
                auto h = cod.hom(b[cd.x0], b[y]);
                if (h.empty()) return std::nullopt;
                cd.Bc.push_back(std::move(h));
            }
            data.push_back(std::move(cd));
        }

        // assemble Phi from per-component (lambda, B) and test constraints
        GroupoidMorphism phi;
        phi.base_map = b;
        phi.arrow_map.assign(dom.n_arrows, -1);
        std::vector<std::vector<Id>> lambda(data.size());
        std::vector<std::vector<Id>> B(data.size());

        auto build_and_check = [&]() -> bool {
            charge(dom.n_arrows);
            for (Id a = 0; a < dom.n_arrows; ++a) {
                Id x = dom.src[a], y = dom.tgt[a];
                // find component of x
                size_t ci = 0;
                for (; ci < data.size(); ++ci)
                    if (data[ci].A[x] >= 0) break;
                if (ci == data.size() || data[ci].A[y] < 0) return false;
                const auto& cd = data[ci];
                Id v = dom.compose(dom.inv[cd.A[y]], dom.compose(a, cd.A[x]));
                int vi = cd.vg_dom.index_of(v);
                Id lv = cd.vg_cod.arrow_of(lambda[ci][vi]);
                auto Barrow = [&](Id p) -> Id {
                    if (p == cd.x0) return cod.unit[b[cd.x0]];
                    for (size_t k = 0; k < cd.points.size(); ++k)
                        if (cd.points[k] == p) return B[ci][k];
                    return -1;
                };
                phi.arrow_map[a] =
                    cod.compose(Barrow(y), cod.compose(lv, cod.inv[Barrow(x)]));
            }
            if (opt.act_dom) {
                for (Id a = 0; a < dom.n_arrows; ++a)
                    for (Id g = 0; g < opt.n_g; ++g)
                        if (phi.arrow_map[(*opt.act_dom)[a * opt.n_g + g]] !=
                            (*opt.act_cod)[phi.arrow_map[a] * opt.n_g + g])
                            return false;
            }
            return true;
        };

        // nested enumeration over components
        std::function<bool(size_t)> rec_comp = [&](size_t ci) -> bool {
            if (ci == data.size()) return build_and_check();
            const auto& cd = data[ci];
            bool found = false;
            detail::enumerate_group_isos(
                cd.vg_dom.group, cd.vg_cod.group,
                [&](const std::vector<Id>& lam) -> bool {
                    lambda[ci] = lam;
                    B[ci].assign(cd.points.size(), -1);
                    std::function<bool(size_t)> rec_b =
                        [&](size_t k) -> bool {
                        if (k == cd.points.size()) return rec_comp(ci + 1);
                        charge(1);
                        for (Id cand : cd.Bc[k]) {
                            B[ci][k] = cand;
                            if (rec_b(k + 1)) return true;
                        }
                        return false;
                    };
                    if (rec_b(0)) {
                        found = true;
                        return true;  // stop enumerate_group_isos
                    }
                    return false;
                });
            return found;
        };
        if (rec_comp(0)) return phi;
        return std::nullopt;
    };

    if (!opt.base_map.empty()) {
        if (!base_ok(opt.base_map)) return std::nullopt;
        return try_base(opt.base_map);
    }

    // search over base bijections
    std::vector<Id> b(nb, -1);
    std::vector<char> used(nb, 0);
    std::optional<GroupoidMorphism> result;
    std::function<bool(Id)> rec = [&](Id x) -> bool {
        if (x == nb) {
            if (!base_ok(b)) return false;
            auto r = try_base(b);
            if (r) {
                result = std::move(r);
                return true;
            }
            return false;
        }
        charge(1);
        for (Id y = 0; y < nb; ++y) {
            if (used[y] || inv_dom[x] != inv_cod[y]) continue;
            b[x] = y;
            used[y] = 1;
            if (rec(x + 1)) return true;
            used[y] = 0;
        }
        b[x] = -1;
        return false;
    };
    rec(0);
    return result;
}

inline bool groupoid_isomorphic(const FiniteGroupoid& a,
                                const FiniteGroupoid& b,
                                const IsoOptions& opt = {})
{
    return find_groupoid_iso(a, b, opt).has_value();
}

}  // namespace gcl
