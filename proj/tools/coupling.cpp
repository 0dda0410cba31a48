#include <sstream>

#include "commands.hpp"
#include "rangewalk/coupling.hpp"

namespace rangewalk::cli {

namespace {

json start_json(const NormalizedStart& s) {
    json j = json::object();
    j["x"] = s.x;
    j["permutation"] = s.permutation;
    j["signs"] = s.signs;
    j["m"] = s.m;
    return j;
}

}  // namespace

void add_coupling_commands(CLI::App& app, GlobalOptions& g, std::vector<Command>& out) {
    CLI::App* coupling = app.add_subcommand("coupling", "coupling of X from x with Y from e_1");
    coupling->require_subcommand(1);
    coupling->fallthrough();

    {
        CLI::App* sub = coupling->add_subcommand("run", "randomized coupled paths with invariant monitoring");
        sub->fallthrough();
        auto x = std::make_shared<std::string>();
        auto n = std::make_shared<int>(5);
        auto reps = std::make_shared<std::uint64_t>(100000);
        sub->add_option("--x", *x, "start point, comma separated, |x|_1 odd")->required();
        sub->add_option("--n", *n, "odd path length")->capture_default_str();
        sub->add_option("--reps", *reps, "replicas")->capture_default_str()->check(CLI::PositiveNumber);
        out.push_back(Command{sub, [x, n, reps, &g]() {
            const Site start = parse_site(*x);
            const CouplingRunReport rep = run_coupling(start, *n, *reps, g.seed);
            Report r;
            r.name = "coupling_run";
            r.config = {{"x", start}, {"n", *n}, {"reps", *reps}};
            r.body["start"] = start_json(rep.start);
            r.body["violations"] = rep.violations;
            r.body["x_zero"] = rep.x_zero;
            r.body["y_zero"] = rep.y_zero;
            r.body["p_hat_x"] = rep.p_hat_x();
            r.body["p_hat_y"] = rep.p_hat_y();
            r.body["y_increments"] = rep.y_increments;
            std::ostringstream s;
            s << "coupling run: " << rep.violations << " violations over " << rep.reps << " replicas; P(X_n=0) ~ "
              << rep.p_hat_x() << ", P(Y_n=0) ~ " << rep.p_hat_y() << "\n";
            r.summary = s.str();
            r.exit_code = rep.violations == 0 ? kPass : kPropertyFailure;
            return r;
        }});
    }
    {
        CLI::App* sub = coupling->add_subcommand("oracle", "exhaustive check over every driving sequence");
        sub->fallthrough();
        auto x = std::make_shared<std::string>();
        auto n = std::make_shared<int>(5);
        sub->add_option("--x", *x, "start point, comma separated, |x|_1 odd")->required();
        sub->add_option("--n", *n, "path length")->capture_default_str()->check(CLI::NonNegativeNumber);
        out.push_back(Command{sub, [x, n]() {
            const Site start = parse_site(*x);
            const CouplingOracleReport rep = exhaustive_coupling_oracle(start, *n);
            Report r;
            r.name = "coupling_oracle";
            r.config = {{"x", start}, {"n", *n}};
            r.body["start"] = start_json(rep.start);
            r.body["paths"] = rep.paths;
            r.body["invariants_hold"] = rep.invariants_hold;
            r.body["implication_holds"] = rep.implication_holds;
            r.body["y_uniform"] = rep.y_uniform;
            r.body["x_zero"] = rep.x_zero;
            r.body["y_zero"] = rep.y_zero;
            r.body["pass"] = rep.pass();
            if (!rep.first_failure.empty()) r.body["first_failure"] = rep.first_failure;
            std::ostringstream s;
            s << "coupling oracle: " << (rep.pass() ? "PASS" : "FAIL") << " over " << rep.paths << " paths; #{X_n=0} = "
              << rep.x_zero << " <= #{Y_n=0} = " << rep.y_zero << "\n";
            if (!rep.first_failure.empty()) s << "  " << rep.first_failure << "\n";
            r.summary = s.str();
            r.exit_code = rep.pass() ? kPass : kPropertyFailure;
            return r;
        }});
    }
}

}  // namespace rangewalk::cli
