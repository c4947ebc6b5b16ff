// gcl — finite-model verifier and classifier for PBG-groupoids.
//
//   gcl <verify|pbg-roundtrip|derive|glue|equiv|classify>
//       --instance <path> [--out <path>] [--threads N] [--no-timing]
//       [--cap-enum N] [--cap-iso N]
//
// Exit codes: 0 all checks pass, 1 check failure, 2 input error,
// 3 cap exceeded. GCL_LOG=debug enables stderr notes.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gcl/commands.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"finite PBG-groupoid toolkit"};
    app.require_subcommand(1);

    std::string instance_path;
    std::string out_path;
    int threads = 1;
    bool no_timing = false;
    std::uint64_t cap_enum = 0, cap_iso = 0;

    std::vector<CLI::App*> subs;
    for (const char* name : {"verify", "pbg-roundtrip", "derive", "glue",
                             "equiv", "classify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--instance", instance_path, "instance JSON file")
            ->required();
        sub->add_option("--out", out_path, "write the JSON report here");
        sub->add_option("--threads", threads, "worker thread cap");
        sub->add_flag("--no-timing", no_timing,
                      "omit timings for byte-stable reports");
        sub->add_option("--cap-enum", cap_enum, "enumeration cap override");
        sub->add_option("--cap-iso", cap_iso, "isomorphism search cap override");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);
    std::string cmd = app.get_subcommands().front()->get_name();

    gcl::CommandOptions opt;
    opt.threads = threads > 0 ? threads : 1;
    opt.with_timing = !no_timing;
    if (cap_enum > 0) opt.cap_enum = cap_enum;
    if (cap_iso > 0) opt.cap_iso = cap_iso;

    try {
        gcl::Stopwatch watch;
        gcl::InstanceFile inst = gcl::parse_instance(instance_path);
        if (gcl::log_level() >= 2)
            std::cerr << "[gcl] parsed " << instance_path << " hash "
                      << inst.hash << "\n";
        gcl::Report rep = gcl::run_command(cmd, inst, instance_path, opt);
        rep.timing_ms = watch.ms();
        std::cout << rep.to_text();
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            out << gcl::canonical_dump(rep.to_json());
        }
        return rep.exit_code();
    } catch (const gcl::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return gcl::kExitInputError;
    } catch (const gcl::CapError& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return gcl::kExitCapExceeded;
    } catch (const gcl::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return gcl::kExitCheckFailure;
    }
}
