#pragma once

#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rangewalk/arith.hpp"
#include "rangewalk/lattice.hpp"
#include "rangewalk/perturb.hpp"
#include "report.hpp"

namespace rangewalk::cli {

struct Command {
    CLI::App* app = nullptr;
    std::function<Report()> run;
};

void add_verify_commands(CLI::App& app, GlobalOptions& global, std::vector<Command>& out);
void add_range_commands(CLI::App& app, GlobalOptions& global, std::vector<Command>& out);
void add_trap_commands(CLI::App& app, GlobalOptions& global, std::vector<Command>& out);
void add_coupling_commands(CLI::App& app, GlobalOptions& global, std::vector<Command>& out);
void add_counterexample_command(CLI::App& app, GlobalOptions& global, std::vector<Command>& out);

ArithMode arith_mode(const GlobalOptions& global);

/// "2,1" -> {2, 1}.
Site parse_site(const std::string& text);

/// From a spec string or, if non-empty, a file of sites.
TrapTrajectory load_phi(const std::string& spec, const std::string& file, int dim);

/// From a file, or a spec "zero:N" / "random:SEED:N" / "file:PATH"; empty
/// spec means the zero path with n + 1 entries.
InsertionPath load_f(const std::string& spec, const std::string& file, int dim, int n);

}  // namespace rangewalk::cli
