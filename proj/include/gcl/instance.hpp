// JSON instance files: parsing, cross-reference validation and canonical
// re-serialization. Schema errors and dangling references throw InputError
// (exit code 2); algebraic axiom violations are captured per component so
// `verify` can report them as check failures (exit code 1).
#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcl/base.hpp"
#include "gcl/bundle.hpp"
#include "gcl/group.hpp"
#include "gcl/groupoid.hpp"
#include "gcl/pbg.hpp"
#include "gcl/transition.hpp"

namespace gcl {

struct InstanceCaps {
    std::uint64_t cap_enum = 1u << 24;
    std::uint64_t cap_iso = 1u << 22;
};

struct InstanceFile {
    json raw;          // as parsed
    std::string hash;  // fingerprint of the serialized form

    std::map<std::string, FiniteGroup> groups;
    std::optional<PrincipalBundleAtlas> bundle;
    std::optional<FiniteGroupoid> groupoid;
    std::optional<std::vector<Id>> groupoid_action;  // arrows x |G|
    std::optional<BundleExtension> extension;
    std::optional<FiniteGroup> h_group;
    std::optional<RhoFamily> rho;
    std::optional<IsometablicCocycle> cocycle;
    std::optional<ConjugationFamily> conjugation;
    std::optional<std::vector<std::vector<Id>>> sections_sigma_bar;
    std::optional<std::vector<Id>> sections_xi;
    InstanceCaps caps;

    // component name -> axiom failure captured during validation
    std::vector<std::pair<std::string, Fail>> failures;

    bool component_failed(const std::string& name) const
    {
        for (const auto& [n, f] : failures)
            if (n == name) return true;
        return false;
    }
};

namespace detail {

inline const json& require(const json& j, const std::string& key,
                           const std::string& pointer)
{
    if (!j.contains(key))
        throw InputError(pointer + "/" + key, "missing required field");
    return j.at(key);
}

inline int require_int(const json& j, const std::string& key,
                       const std::string& pointer)
{
    const json& v = require(j, key, pointer);
    if (!v.is_number_integer())
        throw InputError(pointer + "/" + key, "expected an integer");
    return v.get<int>();
}

inline std::vector<Id> id_list(const json& v, const std::string& pointer)
{
    if (!v.is_array()) throw InputError(pointer, "expected an array of ids");
    std::vector<Id> out;
    for (const auto& e : v) {
        if (!e.is_number_integer())
            throw InputError(pointer, "expected integer entries");
        out.push_back(e.get<Id>());
    }
    return out;
}

inline std::vector<Id> flat_table(const json& v, const std::string& pointer)
{
    if (!v.is_array()) throw InputError(pointer, "expected a table");
    std::vector<Id> out;
    for (const auto& row : v) {
        if (!row.is_array()) throw InputError(pointer, "expected table rows");
        for (const auto& e : row) out.push_back(e.get<Id>());
    }
    return out;
}

inline std::pair<int, int> parse_pair_key(const std::string& key,
                                          const std::string& pointer)
{
    auto comma = key.find(',');
    if (comma == std::string::npos)
        throw InputError(pointer, "expected \"i,j\" key");
    try {
        return {std::stoi(key.substr(0, comma)),
                std::stoi(key.substr(comma + 1))};
    } catch (...) {
        throw InputError(pointer, "malformed \"i,j\" key");
    }
}

}  // namespace detail

inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

inline InstanceFile parse_instance_json(const json& j)
{
    using detail::require;
    InstanceFile inst;
    inst.raw = j;
    inst.hash = fnv1a_hex(j.dump());

    if (!j.contains("version") || j.at("version") != "gcl/1")
        throw InputError("/version", "expected instance version \"gcl/1\"");

    auto capture = [&](const std::string& component, const ValidationError& e) {
        inst.failures.emplace_back(component, e.fail);
    };

    if (j.contains("groups")) {
        for (const auto& [name, gj] : j.at("groups").items()) {
            const std::string ptr = "/groups/" + name;
            const json& elems = require(gj, "elements", ptr);
            std::vector<std::string> names;
            for (const auto& e : elems) names.push_back(e.get<std::string>());
            int n = static_cast<int>(names.size());
            std::vector<Id> mul =
                detail::flat_table(require(gj, "mul", ptr), ptr + "/mul");
            Id identity = 0;
            const json& idj = require(gj, "identity", ptr);
            if (idj.is_number_integer()) {
                identity = idj.get<Id>();
            } else {
                identity = -1;
                for (int i = 0; i < n; ++i)
                    if (names[i] == idj.get<std::string>()) identity = i;
                if (identity < 0)
                    throw InputError(ptr + "/identity", "unknown element name");
            }
            try {
                inst.groups.emplace(name,
                                    validate_group(n, mul, identity, names));
            } catch (const ValidationError& e) {
                capture("group:" + name, e);
            }
        }
    }

    auto group_ref = [&](const json& v,
                         const std::string& pointer) -> const FiniteGroup* {
        std::string name = v.get<std::string>();
        auto it = inst.groups.find(name);
        if (it == inst.groups.end()) {
            if (inst.component_failed("group:" + name)) return nullptr;
            throw InputError(pointer, "dangling group reference: " + name);
        }
        return &it->second;
    };

    auto parse_bundle =
        [&](const json& b,
            const std::string& ptr) -> std::optional<PrincipalBundleAtlas> {
        int total = detail::require_int(b, "total", ptr);
        int base = detail::require_int(b, "base", ptr);
        const FiniteGroup* G =
            group_ref(require(b, "group", ptr), ptr + "/group");
        if (!G) return std::nullopt;
        std::vector<Id> proj =
            detail::id_list(require(b, "proj", ptr), ptr + "/proj");
        std::vector<Id> act =
            detail::flat_table(require(b, "action", ptr), ptr + "/action");
        std::vector<std::vector<Id>> cover;
        for (const auto& u : require(b, "cover", ptr))
            cover.push_back(detail::id_list(u, ptr + "/cover"));
        std::vector<std::vector<Id>> charts(cover.size());
        const json& cj = require(b, "charts", ptr);
        if (cj.size() != cover.size())
            throw InputError(ptr + "/charts", "one chart per cover set");
        for (size_t i = 0; i < cover.size(); ++i) {
            auto sorted = cover[i];
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()),
                         sorted.end());
            charts[i].assign(sorted.size() * G->n, -1);
            for (const auto& triple : cj.at(i)) {
                Id m = triple.at(0).get<Id>();
                Id g = triple.at(1).get<Id>();
                Id p = triple.at(2).get<Id>();
                auto it = std::lower_bound(sorted.begin(), sorted.end(), m);
                if (it == sorted.end() || *it != m)
                    throw InputError(ptr + "/charts",
                                     "chart point outside its cover set");
                if (g < 0 || g >= G->n)
                    throw InputError(ptr + "/charts",
                                     "dangling group element in chart");
                if (p < 0 || p >= total)
                    throw InputError(ptr + "/charts", "dangling point id");
                charts[i][(it - sorted.begin()) * G->n + g] = p;
            }
            for (Id v : charts[i])
                if (v < 0)
                    throw InputError(ptr + "/charts", "chart table incomplete");
        }
        std::vector<Id> basepoints = detail::id_list(
            require(b, "basepoints", ptr), ptr + "/basepoints");
        if (basepoints.size() != cover.size())
            throw InputError(ptr + "/basepoints", "one basepoint per chart");
        Id u0 = detail::require_int(b, "u0", ptr);
        return validate_principal_bundle(total, base, proj,
                                         validate_action(*G, total, act),
                                         cover, charts, basepoints, u0);
    };

    if (j.contains("bundle")) {
        try {
            inst.bundle = parse_bundle(j.at("bundle"), "/bundle");
            if (!inst.bundle)
                inst.failures.emplace_back(
                    "bundle", Fail{"PrerequisiteInvalid",
                                   "structure group failed validation", {}});
        } catch (const ValidationError& e) {
            capture("bundle", e);
        }
    }

    if (j.contains("groupoid")) {
        const json& gj = j.at("groupoid");
        const std::string ptr = "/groupoid";
        int base = detail::require_int(gj, "base", ptr);
        int arrows = detail::require_int(gj, "arrows", ptr);
        try {
            inst.groupoid = validate_groupoid(
                base, arrows,
                detail::id_list(require(gj, "src", ptr), ptr + "/src"),
                detail::id_list(require(gj, "tgt", ptr), ptr + "/tgt"),
                detail::id_list(require(gj, "unit", ptr), ptr + "/unit"),
                detail::flat_table(require(gj, "mul", ptr), ptr + "/mul"),
                detail::id_list(require(gj, "inv", ptr), ptr + "/inv"));
        } catch (const ValidationError& e) {
            capture("groupoid", e);
        }
        if (gj.contains("action"))
            inst.groupoid_action =
                detail::flat_table(gj.at("action"), ptr + "/action");
    }

    if (j.contains("extension")) {
        const json& ej = j.at("extension");
        const std::string ptr = "/extension";
        const FiniteGroup* N =
            group_ref(require(ej, "kernel", ptr), ptr + "/kernel");
        const FiniteGroup* H =
            group_ref(require(ej, "middle", ptr), ptr + "/middle");
        const FiniteGroup* G =
            group_ref(require(ej, "quotient", ptr), ptr + "/quotient");
        if (N && H && G) {
            std::vector<Id> inj =
                detail::id_list(require(ej, "inj", ptr), ptr + "/inj");
            std::vector<Id> proj =
                detail::id_list(require(ej, "proj", ptr), ptr + "/proj");
            try {
                BundleExtension bx;
                bx.groups = validate_group_extension(*N, *H, *G, inj, proj);
                auto q = parse_bundle(require(ej, "q_bundle", ptr),
                                      ptr + "/q_bundle");
                if (q) {
                    if (q->group().n != H->n || q->group().mul != H->mul)
                        throw InputError(
                            ptr + "/q_bundle",
                            "Q bundle group differs from the middle group");
                    bx.q = std::move(*q);
                    inst.extension = std::move(bx);
                }
            } catch (const ValidationError& e) {
                capture("extension", e);
            }
        }
    }

    if (j.contains("h_group")) {
        const FiniteGroup* H = group_ref(j.at("h_group"), "/h_group");
        if (H) inst.h_group = *H;
    }

    const int nc = inst.bundle ? inst.bundle->n_charts() : 0;

    if (j.contains("rho")) {
        if (!inst.bundle || !inst.h_group) {
            if (inst.failures.empty())
                throw InputError("/rho", "rho needs bundle and h_group");
        } else {
            const json& rj = j.at("rho");
            const FiniteGroup& G = inst.bundle->group();
            RhoFamily rho;
            rho.n_charts = nc;
            rho.n_g = G.n;
            rho.h = *inst.h_group;
            rho.tables.assign(static_cast<size_t>(nc) * nc * G.n,
                              std::vector<Id>());
            for (const auto& [key, perms] :
                 require(rj, "tables", "/rho").items()) {
                auto [i, jx] = detail::parse_pair_key(key, "/rho/tables");
                if (i < 0 || i >= nc || jx < 0 || jx >= nc)
                    throw InputError("/rho/tables",
                                     "dangling chart index in key " + key);
                for (const auto& [gkey, perm] : perms.items()) {
                    int g = std::stoi(gkey);
                    if (g < 0 || g >= G.n)
                        throw InputError("/rho/tables/" + key,
                                         "dangling group element " + gkey);
                    rho.tables[(i * nc + jx) * G.n + g] =
                        detail::id_list(perm, "/rho/tables/" + key);
                }
            }
            for (auto& t : rho.tables)
                if (t.empty())
                    throw InputError("/rho/tables", "rho table incomplete");
            try {
                validate_rho(rho, G);
                inst.rho = std::move(rho);
            } catch (const ValidationError& e) {
                capture("rho", e);
            }
        }
    }

    if (j.contains("cocycle")) {
        if (!inst.rho) {
            if (inst.failures.empty())
                throw InputError("/cocycle", "cocycle needs rho");
        } else {
            const json& cj = j.at("cocycle");
            IsometablicCocycle c;
            c.rho = *inst.rho;
            c.s.assign(static_cast<size_t>(nc) * nc,
                       std::vector<Id>(inst.bundle->total, -1));
            for (int i = 0; i < nc; ++i)
                for (Id u : inst.bundle->chart_points[i])
                    c.s[i * nc + i][u] = c.rho.h.e;
            for (const auto& [key, entries] :
                 detail::require(cj, "s", "/cocycle").items()) {
                auto [i, jx] = detail::parse_pair_key(key, "/cocycle/s");
                if (i < 0 || i >= nc || jx < 0 || jx >= nc)
                    throw InputError("/cocycle/s",
                                     "dangling chart index in key " + key);
                for (const auto& pair : entries) {
                    Id u = pair.at(0).get<Id>();
                    Id h = pair.at(1).get<Id>();
                    if (u < 0 || u >= inst.bundle->total)
                        throw InputError("/cocycle/s/" + key,
                                         "dangling point id");
                    if (h < 0 || h >= c.rho.h.n)
                        throw InputError("/cocycle/s/" + key,
                                         "dangling H element");
                    c.s[i * nc + jx][u] = h;
                    c.s[jx * nc + i][u] = c.rho.h.inverse(h);
                }
            }
            try {
                validate_cocycle(c, *inst.bundle);
                inst.cocycle = std::move(c);
            } catch (const ValidationError& e) {
                capture("cocycle", e);
            }
        }
    }

    if (j.contains("conjugation") && inst.bundle && inst.h_group) {
        ConjugationFamily fam;
        fam.r.assign(nc, std::vector<Id>(inst.bundle->total, -1));
        for (const auto& [key, entries] :
             detail::require(j.at("conjugation"), "r", "/conjugation")
                 .items()) {
            int i = std::stoi(key);
            if (i < 0 || i >= nc)
                throw InputError("/conjugation/r",
                                 "dangling chart index " + key);
            for (const auto& pair : entries) {
                Id u = pair.at(0).get<Id>();
                Id h = pair.at(1).get<Id>();
                if (u < 0 || u >= inst.bundle->total)
                    throw InputError("/conjugation/r/" + key,
                                     "dangling point id");
                if (h < 0 || h >= inst.h_group->n)
                    throw InputError("/conjugation/r/" + key,
                                     "dangling H element");
                fam.r[i][u] = h;
            }
        }
        inst.conjugation = std::move(fam);
    }

    if (j.contains("sections") && inst.bundle) {
        const json& sj = j.at("sections");
        std::vector<std::vector<Id>> sb(nc,
                                        std::vector<Id>(inst.bundle->total, -1));
        for (const auto& [key, entries] :
             detail::require(sj, "sigma_bar", "/sections").items()) {
            int i = std::stoi(key);
            if (i < 0 || i >= nc)
                throw InputError("/sections/sigma_bar",
                                 "dangling chart index " + key);
            for (const auto& pair : entries)
                sb[i][pair.at(0).get<Id>()] = pair.at(1).get<Id>();
        }
        inst.sections_sigma_bar = std::move(sb);
        inst.sections_xi = detail::id_list(
            detail::require(sj, "xi", "/sections"), "/sections/xi");
    }

    if (j.contains("caps")) {
        const json& cj = j.at("caps");
        if (cj.contains("enum"))
            inst.caps.cap_enum = cj.at("enum").get<std::uint64_t>();
        if (cj.contains("iso"))
            inst.caps.cap_iso = cj.at("iso").get<std::uint64_t>();
    }
    return inst;
}

inline InstanceFile parse_instance(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("/", "cannot open instance file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("/", std::string("JSON parse error: ") + e.what());
    }
    return parse_instance_json(j);
}

}  // namespace gcl
