#include <chrono>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rangewalk/errors.hpp"

using namespace rangewalk;
using namespace rangewalk::cli;

int main(int argc, char** argv) {
    const auto started = std::chrono::system_clock::now();
    CLI::App app{"Exact and Monte Carlo checks for random walks among moving traps"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", RANGEWALK_VERSION);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "master seed")->capture_default_str()->each([&g](const std::string&) {
        g.seed_given = true;
    });
    app.add_option("--threads", g.threads, "worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    auto* exact = app.add_flag("--exact", g.exact, "force rational arithmetic");
    auto* floating = app.add_flag("--float", g.floating, "force double arithmetic");
    exact->excludes(floating);
    app.add_option("--out", g.out_dir, "write the JSON report and CSV tables to this directory");
    app.add_option("--format", g.format, "stdout report format when --out is not given")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    std::vector<Command> commands;
    add_verify_commands(app, g, commands);
    add_range_commands(app, g, commands);
    add_trap_commands(app, g, commands);
    add_coupling_commands(app, g, commands);
    add_counterexample_command(app, g, commands);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    if (g.threads > 0) omp_set_num_threads(g.threads);
    std::ostringstream command_line;
    for (int i = 0; i < argc; ++i) command_line << (i ? " " : "") << argv[i];

    for (const Command& c : commands) {
        if (!c.app->parsed()) continue;
        try {
            return emit(c.run(), g, command_line.str(), started);
        } catch (const ResourceError& e) {
            std::cerr << "resource budget exceeded: " << e.what() << "\n";
            return kResourceExceeded;
        } catch (const InvariantError& e) {
            std::cerr << "invariant violated: " << e.what() << "\n";
            return kPropertyFailure;
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kUsageError;
        } catch (const std::out_of_range& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kUsageError;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kPropertyFailure;
        }
    }
    std::cerr << app.help();
    return kUsageError;
}
