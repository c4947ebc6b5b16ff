// Shared ids, diagnostics and report plumbing for the gcl library.
#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace gcl {

using json = nlohmann::json;

// Dense integer ids. Elements of groups, points of sets and arrows of
// groupoids are all numbered 0..n-1 so every table is a flat array.
using Id = int;

inline constexpr const char* kToolName = "gcl";
inline constexpr const char* kToolVersion = "0.1.0";

// A named failure with a structured witness, e.g.
// {code: "NotAssociative", witness: {a: 1, b: 2, c: 0}}.
struct Fail {
    std::string code;
    std::string detail;
    json witness = json::object();

    json to_json() const
    {
        json j{{"code", code}, {"detail", detail}};
        if (!witness.empty()) j["witness"] = witness;
        return j;
    }
};

// Thrown when a candidate object violates one of its axioms.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(Fail f)
        : std::runtime_error(f.code + ": " + f.detail), fail(std::move(f))
    {
    }
    Fail fail;
};

// Thrown for malformed input files / schema violations. Exit code 2.
class InputError : public std::runtime_error {
public:
    InputError(std::string pointer_, const std::string& message)
        : std::runtime_error(message + " (at " + pointer_ + ")"),
          pointer(std::move(pointer_))
    {
    }
    std::string pointer;
};

// Thrown when an instance exceeds an enumeration or search cap. Exit code 3.
class CapError : public std::runtime_error {
public:
    CapError(std::string where_, std::uint64_t estimate_, std::uint64_t cap_)
        : std::runtime_error(where_ + ": estimated work " +
                             std::to_string(estimate_) + " exceeds cap " +
                             std::to_string(cap_)),
          where(std::move(where_)), estimate(estimate_), cap(cap_)
    {
    }
    std::string where;
    std::uint64_t estimate;
    std::uint64_t cap;
};

// One verdict of a report-style verification.
struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
    json witness = json::object();

    json to_json() const
    {
        json j{{"name", name}, {"pass", pass}};
        if (!detail.empty()) j["detail"] = detail;
        if (!witness.empty()) j["witness"] = witness;
        return j;
    }
};

struct CheckReport {
    std::vector<Check> checks;

    void add(Check c) { checks.push_back(std::move(c)); }

    // Records a passing check.
    void pass(const std::string& name, const std::string& detail = "")
    {
        checks.push_back({name, true, detail, json::object()});
    }

    void fail(const std::string& name, const std::string& detail,
              json witness = json::object())
    {
        checks.push_back({name, false, detail, std::move(witness)});
    }

    void merge(const CheckReport& other)
    {
        for (const auto& c : other.checks) checks.push_back(c);
    }

    bool all_pass() const
    {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    int failed() const
    {
        int n = 0;
        for (const auto& c : checks)
            if (!c.pass) ++n;
        return n;
    }

    json to_json() const
    {
        json arr = json::array();
        for (const auto& c : checks) arr.push_back(c.to_json());
        return arr;
    }
};

// FNV-1a, used for instance/cocycle fingerprints in reports.
inline std::uint64_t fnv1a(const std::string& data)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string fnv1a_hex(const std::string& data)
{
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a(data);
    std::string out = "fnv1a:";
    for (int i = 15; i >= 0; --i) out += digits[(h >> (4 * i)) & 0xF];
    return out;
}

// GCL_LOG=debug enables stderr notes.
int log_level();
inline int log_level_impl()
{
    const char* env = std::getenv("GCL_LOG");
    if (!env) return 0;
    std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}
inline int log_level()
{
    static int lvl = log_level_impl();
    return lvl;
}

}  // namespace gcl
