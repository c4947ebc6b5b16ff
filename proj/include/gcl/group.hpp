// Finite groups given by full multiplication tables, and right group actions.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "gcl/base.hpp"

namespace gcl {

struct FiniteGroup {
    int n = 0;                       // order
    std::vector<Id> mul;             // n*n, mul[a*n+b] = a·b
    std::vector<Id> inv;             // two-sided inverses
    Id e = 0;                        // identity
    std::vector<std::string> names;  // optional element labels

    Id op(Id a, Id b) const { return mul[a * n + b]; }
    Id inverse(Id a) const { return inv[a]; }

    std::string name_of(Id a) const
    {
        if (a >= 0 && a < static_cast<int>(names.size()) && !names[a].empty())
            return names[a];
        return std::to_string(a);
    }

    bool is_abelian() const
    {
        for (Id a = 0; a < n; ++a)
            for (Id b = 0; b < n; ++b)
                if (op(a, b) != op(b, a)) return false;
        return true;
    }
};

// Checks every group axiom by full iteration and fills in the inverse table.
// The identity, if not supplied (identity < 0), is searched for.
inline FiniteGroup validate_group(int n, const std::vector<Id>& mul,
                                  Id identity = -1,
                                  std::vector<std::string> names = {})
{
    if (n <= 0 || static_cast<int>(mul.size()) != n * n)
        throw ValidationError({"BadTable",
                               "multiplication table is not square over the "
                               "declared element list",
                               {{"order", n}, {"entries", mul.size()}}});
    for (int i = 0; i < n * n; ++i)
        if (mul[i] < 0 || mul[i] >= n)
            throw ValidationError({"BadTable",
                                   "table entry out of range",
                                   {{"index", i}, {"value", mul[i]}}});

    auto is_identity = [&](Id c) {
        for (Id a = 0; a < n; ++a)
            if (mul[c * n + a] != a || mul[a * n + c] != a) return false;
        return true;
    };
    Id e = identity;
    if (e >= 0) {
        if (!is_identity(e))
            throw ValidationError(
                {"NoIdentity", "declared identity is not two-sided",
                 {{"identity", e}}});
    } else {
        e = -1;
        for (Id c = 0; c < n && e < 0; ++c)
            if (is_identity(c)) e = c;
        if (e < 0)
            throw ValidationError({"NoIdentity", "no two-sided identity", {}});
    }

    for (Id a = 0; a < n; ++a)
        for (Id b = 0; b < n; ++b)
            for (Id c = 0; c < n; ++c)
                if (mul[mul[a * n + b] * n + c] != mul[a * n + mul[b * n + c]])
                    throw ValidationError(
                        {"NotAssociative",
                         "(a·b)·c != a·(b·c)",
                         {{"a", a}, {"b", b}, {"c", c}}});

    std::vector<Id> inv(n, -1);
    for (Id a = 0; a < n; ++a) {
        for (Id b = 0; b < n; ++b)
            if (mul[a * n + b] == e && mul[b * n + a] == e) inv[a] = b;
        if (inv[a] < 0)
            throw ValidationError(
                {"NoInverse", "element has no two-sided inverse",
                 {{"element", a}}});
    }

    FiniteGroup g;
    g.n = n;
    g.mul = mul;
    g.inv = std::move(inv);
    g.e = e;
    g.names = std::move(names);
    return g;
}

inline FiniteGroup cyclic_group(int n)
{
    std::vector<Id> mul(n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mul[a * n + b] = (a + b) % n;
    return validate_group(n, mul, 0);
}

inline FiniteGroup trivial_group() { return cyclic_group(1); }

// A total right action of `group` on {0..carrier-1}:
// apply(x, g·h) = apply(apply(x, g), h).
struct GroupAction {
    FiniteGroup group;
    int carrier = 0;
    std::vector<Id> act;  // act[x*|G|+g]

    Id apply(Id x, Id g) const { return act[x * group.n + g]; }
};

inline GroupAction validate_action(FiniteGroup group, int carrier,
                                   const std::vector<Id>& act)
{
    const int n = group.n;
    if (static_cast<int>(act.size()) != carrier * n)
        throw ValidationError({"BadTable", "action table has wrong size",
                               {{"carrier", carrier}, {"entries", act.size()}}});
    for (int i = 0; i < carrier * n; ++i)
        if (act[i] < 0 || act[i] >= carrier)
            throw ValidationError({"BadTable",
                                   "action entry out of range",
                                   {{"index", i}, {"value", act[i]}}});
    for (Id x = 0; x < carrier; ++x) {
        if (act[x * n + group.e] != x)
            throw ValidationError(
                {"NotAnAction", "act(x, e) != x", {{"x", x}}});
        for (Id g = 0; g < n; ++g)
            for (Id h = 0; h < n; ++h)
                if (act[act[x * n + g] * n + h] != act[x * n + group.op(g, h)])
                    throw ValidationError({"NotAnAction",
                                           "act(act(x,g),h) != act(x,g·h)",
                                           {{"x", x}, {"g", g}, {"h", h}}});
    }
    GroupAction a;
    a.group = std::move(group);
    a.carrier = carrier;
    a.act = act;
    return a;
}

inline bool action_is_free(const GroupAction& a)
{
    for (Id x = 0; x < a.carrier; ++x)
        for (Id g = 0; g < a.group.n; ++g)
            if (g != a.group.e && a.apply(x, g) == x) return false;
    return true;
}

// Orbits in increasing order of their minimal element; each orbit sorted.
inline std::vector<std::vector<Id>> action_orbits(const GroupAction& a)
{
    std::vector<std::vector<Id>> orbits;
    std::vector<bool> seen(a.carrier, false);
    for (Id x = 0; x < a.carrier; ++x) {
        if (seen[x]) continue;
        std::vector<Id> orb;
        for (Id g = 0; g < a.group.n; ++g) {
            Id y = a.apply(x, g);
            if (!seen[y]) {
                seen[y] = true;
                orb.push_back(y);
            }
        }
        std::sort(orb.begin(), orb.end());
        orbits.push_back(std::move(orb));
    }
    return orbits;
}

// Checks that `map` is a group homomorphism dom -> cod.
inline bool is_homomorphism(const FiniteGroup& dom, const FiniteGroup& cod,
                            const std::vector<Id>& map)
{
    if (static_cast<int>(map.size()) != dom.n) return false;
    for (Id a = 0; a < dom.n; ++a) {
        if (map[a] < 0 || map[a] >= cod.n) return false;
        for (Id b = 0; b < dom.n; ++b)
            if (map[dom.op(a, b)] != cod.op(map[a], map[b])) return false;
    }
    return true;
}

// A short exact sequence of finite groups N >-> H ->> G.
struct GroupExtension {
    FiniteGroup kernel;   // N
    FiniteGroup middle;   // H
    FiniteGroup quotient; // G
    std::vector<Id> inj;  // N -> H, injective homomorphism
    std::vector<Id> proj; // H -> G, surjective homomorphism
    std::vector<Id> lift; // G -> H, a fixed section of proj (minimal id)

    bool in_kernel(Id h) const { return proj[h] == quotient.e; }
};

inline GroupExtension validate_group_extension(FiniteGroup kernel,
                                               FiniteGroup middle,
                                               FiniteGroup quotient,
                                               const std::vector<Id>& inj,
                                               const std::vector<Id>& proj)
{
    if (!is_homomorphism(kernel, middle, inj))
        throw ValidationError(
            {"NotAnExtension", "kernel injection is not a homomorphism", {}});
    if (!is_homomorphism(middle, quotient, proj))
        throw ValidationError(
            {"NotAnExtension", "projection is not a homomorphism", {}});
    for (Id a = 0; a < kernel.n; ++a)
        for (Id b = a + 1; b < kernel.n; ++b)
            if (inj[a] == inj[b])
                throw ValidationError({"NotAnExtension",
                                       "kernel injection is not injective",
                                       {{"a", a}, {"b", b}}});
    std::vector<bool> hit(quotient.n, false);
    for (Id h = 0; h < middle.n; ++h) hit[proj[h]] = true;
    for (Id g = 0; g < quotient.n; ++g)
        if (!hit[g])
            throw ValidationError({"NotAnExtension",
                                   "projection is not surjective",
                                   {{"missing", g}}});
    // image(inj) must be exactly ker(proj)
    std::vector<bool> in_image(middle.n, false);
    for (Id a = 0; a < kernel.n; ++a) in_image[inj[a]] = true;
    for (Id h = 0; h < middle.n; ++h)
        if (in_image[h] != (proj[h] == quotient.e))
            throw ValidationError({"NotAnExtension",
                                   "image of kernel differs from ker(proj)",
                                   {{"h", h}}});

    GroupExtension ext;
    ext.lift.assign(quotient.n, -1);
    for (Id h = 0; h < middle.n; ++h)
        if (ext.lift[proj[h]] < 0) ext.lift[proj[h]] = h;
    ext.kernel = std::move(kernel);
    ext.middle = std::move(middle);
    ext.quotient = std::move(quotient);
    ext.inj = inj;
    ext.proj = proj;
    return ext;
}

}  // namespace gcl
