// Command implementations shared by the CLI and the test suites.
#pragma once

#include <optional>
#include <string>

#include "gcl/base.hpp"
#include "gcl/cohomology.hpp"
#include "gcl/gluing.hpp"
#include "gcl/instance.hpp"
#include "gcl/iso.hpp"
#include "gcl/pbg.hpp"
#include "gcl/quotient.hpp"
#include "gcl/report.hpp"
#include "gcl/transition.hpp"

namespace gcl {

struct CommandOptions {
    int threads = 1;
    bool with_timing = true;
    std::optional<std::uint64_t> cap_enum;
    std::optional<std::uint64_t> cap_iso;
};

namespace detail {

// Resolves the PBG-groupoid a command operates on: an explicit groupoid
// with an action, a bundle extension, or glueable (rho, s) data.
inline std::optional<PBGGroupoid> resolve_pbg(const InstanceFile& inst,
                                              CheckReport& rep)
{
    if (inst.groupoid && inst.groupoid_action && inst.bundle) {
        try {
            PBGGroupoid pbg = validate_pbg(*inst.groupoid, *inst.bundle,
                                           *inst.groupoid_action);
            rep.pass("pbg-axioms", "explicit groupoid action satisfies the "
                                   "four PBG axioms");
            return pbg;
        } catch (const ValidationError& e) {
            rep.fail("pbg-axioms", e.fail.detail, e.fail.witness);
            return std::nullopt;
        }
    }
    if (inst.extension) {
        try {
            PbgFromExtension built = pbg_from_extension(*inst.extension);
            rep.pass("pbg-from-extension",
                     "transverse gauge groupoid built and validated");
            return built.pbg;
        } catch (const ValidationError& e) {
            rep.fail("pbg-from-extension", e.fail.detail, e.fail.witness);
            return std::nullopt;
        }
    }
    if (inst.bundle && inst.cocycle) {
        try {
            GluedGroupoid glued = glue_groupoid(*inst.bundle, *inst.cocycle);
            rep.pass("pbg-from-cocycle", "glued groupoid built and validated");
            return glued.pbg;
        } catch (const ValidationError& e) {
            rep.fail("pbg-from-cocycle", e.fail.detail, e.fail.witness);
            return std::nullopt;
        }
    }
    rep.fail("pbg-source",
             "instance provides no groupoid+action, extension or cocycle "
             "data", {});
    return std::nullopt;
}

inline json morphism_to_json(const GroupoidMorphism& m)
{
    return {{"base_map", m.base_map}, {"arrow_map", m.arrow_map}};
}

inline json cocycle_to_json(const IsometablicCocycle& c,
                            const PrincipalBundleAtlas& atlas)
{
    json s = json::object();
    const int nc = atlas.n_charts();
    for (int i = 0; i < nc; ++i)
        for (int jx = i + 1; jx < nc; ++jx) {
            json entries = json::array();
            for (Id u = 0; u < atlas.total; ++u)
                if (c.at(i, jx, u) >= 0)
                    entries.push_back({u, c.at(i, jx, u)});
            if (!entries.empty())
                s[std::to_string(i) + "," + std::to_string(jx)] = entries;
        }
    json rho = json::object();
    for (int i = 0; i < nc; ++i)
        for (int jx = 0; jx < nc; ++jx) {
            json per_g = json::object();
            for (Id g = 0; g < c.rho.n_g; ++g)
                per_g[std::to_string(g)] = c.rho.table(i, jx, g);
            rho[std::to_string(i) + "," + std::to_string(jx)] = per_g;
        }
    return {{"s", s}, {"rho", {{"tables", rho}}}};
}

}  // namespace detail

// `verify`: axiom suites for every object present in the instance.
inline Report cmd_verify(const InstanceFile& inst)
{
    Report rep;
    rep.command = "verify";
    for (const auto& [name, group] : inst.groups)
        rep.checks.pass("group:" + name,
                        "order " + std::to_string(group.n) + " group axioms");
    for (const auto& [name, fail] : inst.failures)
        rep.checks.fail(name, fail.code + ": " + fail.detail, fail.witness);
    if (inst.bundle) {
        rep.checks.pass("bundle", "principal bundle axioms and charts");
        // extracted cocycle satisfies g_ij·g_jk = g_ik on triple overlaps
        const auto& atlas = *inst.bundle;
        bool ok = true;
        json w;
        for (int i = 0; i < atlas.n_charts() && ok; ++i)
            for (int jx = 0; jx < atlas.n_charts() && ok; ++jx)
                for (int k = 0; k < atlas.n_charts() && ok; ++k)
                    for (Id m = 0; m < atlas.base; ++m) {
                        bool in = true;
                        for (int c : {i, jx, k}) {
                            const auto& u = atlas.cover[c];
                            if (!std::binary_search(u.begin(), u.end(), m))
                                in = false;
                        }
                        if (!in) continue;
                        if (atlas.group().op(atlas.bundle_cocycle(i, jx, m),
                                             atlas.bundle_cocycle(jx, k, m)) !=
                            atlas.bundle_cocycle(i, k, m)) {
                            ok = false;
                            w = {{"i", i}, {"j", jx}, {"k", k}, {"m", m}};
                            break;
                        }
                    }
        ok ? rep.checks.pass("bundle-cocycle",
                             "g_ij(m)·g_jk(m) = g_ik(m) on triple overlaps")
           : rep.checks.fail("bundle-cocycle", "violated", w);
    }
    if (inst.groupoid) rep.checks.pass("groupoid", "groupoid axioms");
    if (inst.groupoid && inst.groupoid_action && inst.bundle) {
        try {
            validate_pbg(*inst.groupoid, *inst.bundle, *inst.groupoid_action);
            rep.checks.pass("pbg-axioms", "the four PBG axioms");
        } catch (const ValidationError& e) {
            rep.checks.fail("pbg-axioms", e.fail.detail, e.fail.witness);
        }
    }
    if (inst.extension)
        rep.checks.pass("extension", "group extension and Q bundle axioms");
    if (inst.rho)
        rep.checks.pass("rho", "action family with the cocycle-morphism "
                               "property");
    if (inst.cocycle) {
        rep.checks.pass("cocycle", "isometablic transition cocycle");
        TransitionSystem sys =
            transition_system_from_cocycle(*inst.cocycle, *inst.bundle);
        rep.checks.merge(
            verify_transition_package(*inst.cocycle, *inst.bundle, &sys));
    }
    if (inst.conjugation && inst.cocycle) {
        auto fail = conjugation_law_violation(*inst.conjugation,
                                              inst.cocycle->rho, *inst.bundle);
        fail ? rep.checks.fail("conjugation", fail->detail, fail->witness)
             : rep.checks.pass("conjugation", "conjugation isometablicity law");
    }
    return rep;
}

// `pbg-roundtrip`: extension -> PBG -> extension, with an exact-search
// isomorphism back to the reference groupoid extension.
inline Report cmd_pbg_roundtrip(const InstanceFile& inst,
                                const CommandOptions& opt)
{
    Report rep;
    rep.command = "pbg-roundtrip";
    if (!inst.extension) {
        rep.checks.fail("input", "instance has no extension data", {});
        return rep;
    }
    const BundleExtension& ext = *inst.extension;
    PbgFromExtension built = pbg_from_extension(ext);
    rep.checks.pass("pbg-from-extension",
                    "(Q x Q)/N validated as a PBG-groupoid over Q/N");

    // well-definedness of the action under all lifts of g
    {
        const auto& Q = ext.q;
        const FiniteGroup& G = ext.groups.quotient;
        bool ok = true;
        json w;
        for (Id a = 0; a < built.pbg.groupoid.n_arrows && ok; ++a) {
            for (Id g = 0; g < G.n && ok; ++g) {
                Id expect = built.pbg.act_arrow(a, g);
                for (Id h = 0; h < ext.groups.middle.n; ++h) {
                    if (ext.groups.proj[h] != g) continue;
                    // act on some pair representative with this lift
                    for (Id tq = 0; tq < Q.total; ++tq)
                        for (Id sq = 0; sq < Q.total; ++sq) {
                            if (built.pair_to_arrow[tq * Q.total + sq] != a)
                                continue;
                            Id moved = built.pair_to_arrow[Q.act(tq, h) *
                                                               Q.total +
                                                           Q.act(sq, h)];
                            if (moved != expect) {
                                ok = false;
                                w = {{"arrow", a}, {"g", g}, {"lift", h}};
                            }
                        }
                }
            }
        }
        ok ? rep.checks.pass("action-well-defined",
                             "<q2,q1>·g independent of the chosen lift of g")
           : rep.checks.fail("action-well-defined", "violated", w);
    }

    bool transitive = built.pbg.groupoid.transitive();
    transitive ? rep.checks.pass("transitive", "output PBG-groupoid is "
                                               "transitive")
               : rep.checks.fail("transitive", "output not transitive", {});

    GroupoidExtension recovered = extension_from_pbg(built.pbg);
    rep.checks.pass("extension-from-pbg",
                    "I(Omega)/G >-> Omega/G ->> (P x P)/G validated");

    GroupoidExtension reference = reference_extension(ext);
    auto iso = find_extension_iso(recovered, reference,
                                  opt.cap_iso.value_or(inst.caps.cap_iso));
    if (iso) {
        rep.checks.pass("roundtrip-isomorphism",
                        "recovered extension isomorphic to the reference "
                        "(Q x Q)/H extension");
        rep.metadata["roundtrip"] = {
            {"middle", detail::morphism_to_json(iso->middle)},
            {"quotient", detail::morphism_to_json(iso->quotient)}};
    } else {
        rep.checks.fail("roundtrip-isomorphism",
                        "no extension isomorphism found", {});
    }
    rep.metadata["counts"] = {
        {"omega_arrows", built.pbg.groupoid.n_arrows},
        {"middle_arrows", recovered.middle.n_arrows},
        {"quotient_arrows", recovered.quotient.n_arrows}};
    return rep;
}

// `derive`: schisms, sections, transition functions, rho, and the full
// identity suite, on whatever PBG-groupoid the instance describes.
inline Report cmd_derive(const InstanceFile& inst)
{
    Report rep;
    rep.command = "derive";
    auto pbg = detail::resolve_pbg(inst, rep.checks);
    if (!pbg) return rep;

    SectionPackage pkg;
    if (inst.sections_sigma_bar && inst.sections_xi) {
        try {
            pkg = package_from_sections(*pbg, *inst.sections_sigma_bar,
                                        *inst.sections_xi);
            rep.checks.pass("sections", "supplied schisms accepted");
        } catch (const ValidationError& e) {
            rep.checks.fail("sections", e.fail.detail, e.fail.witness);
            return rep;
        }
    } else {
        try {
            pkg = derive_schisms(*pbg);
            rep.checks.pass("derive-schisms",
                            "equivariant local morphisms found by search");
        } catch (const ValidationError& e) {
            rep.checks.fail("derive-schisms", e.fail.detail, e.fail.witness);
            return rep;
        }
    }

    rep.checks.merge(verify_section_package(*pbg, pkg));
    TransitionData data = transition_functions(*pbg, pkg);
    rep.checks.merge(verify_rho_identities(*pbg, pkg, data));
    rep.checks.merge(
        verify_local_action_globality(*pbg, pkg, data.cocycle.rho));
    TransitionSystem sys =
        transition_system_from_cocycle(data.cocycle, pbg->atlas);
    rep.checks.merge(
        verify_transition_package(data.cocycle, pbg->atlas, &sys));

    rep.metadata["choices"] = {{"xi", pkg.xi}, {"u0", pbg->atlas.u0}};
    rep.metadata["transition_data"] =
        detail::cocycle_to_json(data.cocycle, pbg->atlas);
    rep.metadata["cocycle_hash"] = cocycle_fingerprint(data.cocycle);
    return rep;
}

// `glue`: Thm-4.2 and Thm-5.1 style reconstruction from (rho, s).
inline Report cmd_glue(const InstanceFile& inst)
{
    Report rep;
    rep.command = "glue";
    if (!inst.bundle || !inst.cocycle) {
        for (const auto& [name, fail] : inst.failures)
            rep.checks.fail(name, fail.code + ": " + fail.detail,
                            fail.witness);
        if (rep.checks.checks.empty())
            rep.checks.fail("input", "glue needs bundle, h_group, rho and "
                                     "cocycle", {});
        return rep;
    }
    const auto& atlas = *inst.bundle;
    GluedGroupoid glued;
    try {
        glued = glue_groupoid(atlas, *inst.cocycle);
        rep.checks.pass("glue-groupoid",
                        "glued groupoid passes all PBG axioms");
    } catch (const ValidationError& e) {
        rep.checks.fail("glue-groupoid", e.fail.detail, e.fail.witness);
        return rep;
    }
    bool transitive = glued.pbg.groupoid.transitive();
    transitive
        ? rep.checks.pass("transitive", "glued groupoid is transitive")
        : rep.checks.fail("transitive", "glued groupoid not transitive", {});

    // inversion formula <i,u,h,v,j>^-1 = <j,v,h^-1,u,i>
    {
        bool ok = true;
        json w;
        const FiniteGroup& H = inst.cocycle->rho.h;
        for (Id a = 0; a < glued.pbg.groupoid.n_arrows && ok; ++a) {
            const auto& t = glued.reps[a];
            if (glued.pbg.groupoid.inv[a] !=
                glued.arrow_of(t[4], t[3], H.inverse(t[2]), t[1], t[0],
                               atlas.total)) {
                ok = false;
                w = {{"arrow", a}};
            }
        }
        ok ? rep.checks.pass("inversion-formula",
                             "<i,u,h,v,j>^-1 = <j,v,h^-1,u,i>")
           : rep.checks.fail("inversion-formula", "violated", w);
    }

    // the inner bundle of the glued groupoid is the glued group bundle for
    // alpha = I_s with the diagonal rho family
    try {
        GluedGroupBundle bun = glue_group_bundle(
            atlas, diagonal_of(inst.cocycle->rho),
            aut_cocycle_from_transition(*inst.cocycle, atlas));
        bool ok = true;
        json w;
        const FiniteGroup& G = atlas.group();
        for (Id e = 0; e < bun.pbg.bundle.groupoid.n_arrows && ok; ++e) {
            const auto& r = bun.reps[e];
            Id loop = glued.arrow_of(r[0], r[1], r[2], r[1], r[0],
                                     atlas.total);
            // group structure and action must match under the element map
            for (Id e2 = 0; e2 < bun.pbg.bundle.groupoid.n_arrows && ok;
                 ++e2) {
                const auto& r2 = bun.reps[e2];
                if (r2[1] != r[1]) continue;
                Id prod = bun.pbg.bundle.groupoid.compose(e, e2);
                Id loop2 = glued.arrow_of(r2[0], r2[1], r2[2], r2[1], r2[0],
                                          atlas.total);
                const auto& rp = bun.reps[prod];
                Id loopp = glued.arrow_of(rp[0], rp[1], rp[2], rp[1], rp[0],
                                          atlas.total);
                if (glued.pbg.groupoid.compose(loop, loop2) != loopp) {
                    ok = false;
                    w = {{"e", e}, {"e2", e2}};
                }
            }
            for (Id g = 0; g < G.n && ok; ++g) {
                const auto& rg = bun.reps[bun.pbg.act_arrow(e, g)];
                if (glued.pbg.act_arrow(loop, g) !=
                    glued.arrow_of(rg[0], rg[1], rg[2], rg[1], rg[0],
                                   atlas.total)) {
                    ok = false;
                    w = {{"e", e}, {"g", g}};
                }
            }
        }
        ok ? rep.checks.pass("inner-bundle",
                             "I(Omega) matches the glued group bundle for "
                             "alpha = I_s")
           : rep.checks.fail("inner-bundle", "mismatch", w);
    } catch (const ValidationError& e) {
        rep.checks.fail("inner-bundle", e.fail.detail, e.fail.witness);
    }

    rep.metadata["provenance"] = {
        {"cocycle_hash", glued.provenance_hash},
        {"charts", atlas.n_charts()},
        {"arrows", glued.pbg.groupoid.n_arrows}};
    return rep;
}

// `equiv`: Prop 5.2 — the explicit phi between groupoids glued from
// conjugate transition data.
inline Report cmd_equiv(const InstanceFile& inst)
{
    Report rep;
    rep.command = "equiv";
    if (!inst.bundle || !inst.cocycle || !inst.conjugation) {
        rep.checks.fail("input",
                        "equiv needs bundle, rho, cocycle and conjugation",
                        {});
        return rep;
    }
    const auto& atlas = *inst.bundle;
    IsometablicCocycle conjugated;
    try {
        conjugated =
            conjugate_transition_data(*inst.cocycle, *inst.conjugation, atlas);
        rep.checks.pass("conjugate-data",
                        "conjugated cocycle is rho'-isometablic");
    } catch (const ValidationError& e) {
        rep.checks.fail("conjugate-data", e.fail.detail, e.fail.witness);
        return rep;
    }
    rep.checks.merge(verify_system_conjugation(*inst.cocycle, conjugated,
                                               *inst.conjugation, atlas));
    GluedGroupoid omega2 = glue_groupoid(atlas, *inst.cocycle);
    GluedGroupoid omega1 = glue_groupoid(atlas, conjugated);
    try {
        GroupoidMorphism phi =
            equivalence_isomorphism(omega1, omega2, *inst.conjugation);
        rep.checks.pass("phi-isomorphism",
                        "phi is a PBG-isomorphism between the glued "
                        "groupoids");
        rep.metadata["phi"] = detail::morphism_to_json(phi);
    } catch (const ValidationError& e) {
        rep.checks.fail("phi-isomorphism", e.fail.detail, e.fail.witness);
    }
    return rep;
}

// `classify`: enumerate H^1 and audit it against exact PBG-isomorphism
// search.
inline Report cmd_classify(const InstanceFile& inst, const CommandOptions& opt)
{
    Report rep;
    rep.command = "classify";
    if (!inst.bundle || !inst.rho) {
        for (const auto& [name, fail] : inst.failures)
            rep.checks.fail(name, fail.code + ": " + fail.detail,
                            fail.witness);
        if (rep.checks.checks.empty())
            rep.checks.fail("input", "classify needs bundle, h_group and rho",
                            {});
        return rep;
    }
    H1Options h1opt;
    h1opt.cap_enum = opt.cap_enum.value_or(inst.caps.cap_enum);
    h1opt.cap_iso = opt.cap_iso.value_or(inst.caps.cap_iso);
    h1opt.threads = opt.threads;

    AuditResult audit = classification_audit(*inst.bundle, *inst.rho, h1opt);
    rep.checks.merge(audit.report);

    json reps = json::array();
    for (int idx : audit.h1.strict_reps)
        reps.push_back(
            detail::cocycle_to_json(audit.h1.cocycles[idx], *inst.bundle)["s"]);
    rep.metadata = {
        {"cocycles", static_cast<int>(audit.h1.cocycles.size())},
        {"classes", audit.n_classes},
        {"classes_basepoint_law", audit.n_based_classes},
        {"iso_types", audit.n_iso_types},
        {"representatives", reps},
        {"delta_product_order", "left-to-right in increasing k"},
        {"caps", {{"enum", h1opt.cap_enum}, {"iso", h1opt.cap_iso}}}};
    return rep;
}

inline Report run_command(const std::string& cmd, const InstanceFile& inst,
                          const std::string& path, const CommandOptions& opt)
{
    Report rep;
    if (cmd == "verify")
        rep = cmd_verify(inst);
    else if (cmd == "pbg-roundtrip")
        rep = cmd_pbg_roundtrip(inst, opt);
    else if (cmd == "derive")
        rep = cmd_derive(inst);
    else if (cmd == "glue")
        rep = cmd_glue(inst);
    else if (cmd == "equiv")
        rep = cmd_equiv(inst);
    else if (cmd == "classify")
        rep = cmd_classify(inst, opt);
    else
        throw InputError("/", "unknown command: " + cmd);
    rep.instance_path = path;
    rep.instance_hash = inst.hash;
    rep.with_timing = opt.with_timing;
    return rep;
}

}  // namespace gcl
