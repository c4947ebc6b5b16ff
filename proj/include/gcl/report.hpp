// Deterministic command reports: a JSON document and a textual rendering
// generated from the same structure.
#pragma once

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>

#include "gcl/base.hpp"

namespace gcl {

enum ExitCode : int {
    kExitPass = 0,
    kExitCheckFailure = 1,
    kExitInputError = 2,
    kExitCapExceeded = 3,
};

struct Report {
    std::string command;
    std::string instance_path;
    std::string instance_hash;
    CheckReport checks;
    json metadata = json::object();
    bool with_timing = true;
    double timing_ms = 0.0;

    json to_json() const
    {
        json j;
        j["command"] = command;
        j["instance"] = {{"path", instance_path}, {"hash", instance_hash}};
        j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
        j["checks"] = checks.to_json();
        j["summary"] = {
            {"passed",
             static_cast<int>(checks.checks.size()) - checks.failed()},
            {"failed", checks.failed()},
            {"verdict", checks.all_pass() ? "pass" : "fail"}};
        if (!metadata.empty()) j["metadata"] = metadata;
        if (with_timing) j["timing_ms"] = timing_ms;
        return j;
    }

    // The text view renders exactly the JSON content.
    std::string to_text() const
    {
        std::ostringstream out;
        out << kToolName << " " << kToolVersion << " — " << command << "\n";
        out << "instance: " << instance_path << " (" << instance_hash << ")\n";
        for (const auto& c : checks.checks) {
            out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
            if (!c.detail.empty()) out << " — " << c.detail;
            if (!c.pass && !c.witness.empty())
                out << " witness=" << c.witness.dump();
            out << "\n";
        }
        if (!metadata.empty()) out << "metadata: " << metadata.dump() << "\n";
        out << "summary: "
            << (static_cast<int>(checks.checks.size()) - checks.failed())
            << " passed, " << checks.failed() << " failed — "
            << (checks.all_pass() ? "PASS" : "FAIL") << "\n";
        if (with_timing) out << "timing_ms: " << timing_ms << "\n";
        return out.str();
    }

    int exit_code() const
    {
        return checks.all_pass() ? kExitPass : kExitCheckFailure;
    }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const
    {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace gcl
