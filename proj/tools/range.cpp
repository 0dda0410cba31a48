#include <sstream>

#include "commands.hpp"
#include "rangewalk/engine.hpp"
#include "rangewalk/errors.hpp"
#include "rangewalk/montecarlo.hpp"
#include "rangewalk/pmf.hpp"

namespace rangewalk::cli {

namespace {

struct RangeInputs {
    std::string pmf = "srw:1";
    std::string f;
    std::string f_file;
    int n = 10;
    std::uint64_t reps = 100000;
};

void add_inputs(CLI::App* sub, RangeInputs& in, bool with_reps) {
    sub->fallthrough();
    sub->add_option("--pmf", in.pmf, "increment law")->capture_default_str();
    sub->add_option("--f", in.f, "inserted path: zero:N, random:SEED:N or file:PATH (default zero)");
    sub->add_option("--f-file", in.f_file, "inserted path file, one site per line");
    sub->add_option("--n", in.n, "range horizon")->capture_default_str()->check(CLI::NonNegativeNumber);
    if (with_reps) sub->add_option("--reps", in.reps, "replicas")->capture_default_str()->check(CLI::PositiveNumber);
}

json base_config(const RangeInputs& in) {
    json c = json::object();
    c["pmf"] = in.pmf;
    c["f"] = !in.f_file.empty() ? "file:" + in.f_file : (in.f.empty() ? "zero" : in.f);
    c["n"] = in.n;
    return c;
}

}  // namespace

void add_range_commands(CLI::App& app, GlobalOptions& g, std::vector<Command>& out) {
    CLI::App* range = app.add_subcommand("range", "expected range of the insertion-perturbed walk");
    range->require_subcommand(1);
    range->fallthrough();

    {
        CLI::App* sub = range->add_subcommand("exact", "E|R_n| through the killed-particle recursion");
        auto in = std::make_shared<RangeInputs>();
        add_inputs(sub, *in, false);
        out.push_back(Command{sub, [in, &g]() {
            const IncrementPmf pmf = pmf_from_spec(in->pmf);
            const InsertionPath f = load_f(in->f, in->f_file, pmf.dim(), in->n);
            Report r;
            r.name = "range_exact";
            r.config = base_config(*in);
            std::string value;
            double approx = 0;
            if (g.floating) {
                approx = range_via_hits<FloatArith>(pmf, f, in->n);
                value = FloatArith::to_string(approx);
            } else {
                const mpq_class v = range_via_hits<ExactArith>(pmf, f, in->n);
                value = v.get_str();
                approx = v.get_d();
            }
            r.config["arithmetic"] = g.floating ? "float" : "exact";
            r.body["expected_range"] = value;
            r.body["approx"] = approx;
            r.tables.push_back(Table{"", {"n", "expected_range", "approx"}, {{std::to_string(in->n), value,
                                                                           FloatArith::to_string(approx)}}});
            r.summary = "E|R_" + std::to_string(in->n) + "| = " + value + " (" + FloatArith::to_string(approx) + ")\n";
            return r;
        }});
    }
    {
        CLI::App* sub = range->add_subcommand("enumerate", "E|R_n| by enumerating every walk path");
        auto in = std::make_shared<RangeInputs>();
        add_inputs(sub, *in, false);
        out.push_back(Command{sub, [in]() {
            const IncrementPmf pmf = pmf_from_spec(in->pmf);
            const InsertionPath f = load_f(in->f, in->f_file, pmf.dim(), in->n);
            const mpq_class v = enumerate_range(pmf, f, in->n);
            Report r;
            r.name = "range_enumerate";
            r.config = base_config(*in);
            r.body["expected_range"] = v.get_str();
            r.body["approx"] = v.get_d();
            r.tables.push_back(Table{"", {"n", "expected_range", "approx"},
                                     {{std::to_string(in->n), v.get_str(), FloatArith::to_string(v.get_d())}}});
            r.summary = "E|R_" + std::to_string(in->n) + "| = " + v.get_str() + " by enumeration\n";
            return r;
        }});
    }
    {
        CLI::App* sub = range->add_subcommand("mc", "Monte Carlo estimate of E|R_n|");
        auto in = std::make_shared<RangeInputs>();
        add_inputs(sub, *in, true);
        out.push_back(Command{sub, [in, &g]() {
            const IncrementPmf pmf = pmf_from_spec(in->pmf);
            const InsertionPath f = load_f(in->f, in->f_file, pmf.dim(), in->n);
            const RangeEstimate est = mc_range(pmf, f, in->n, in->reps, g.seed);
            Report r;
            r.name = "range_mc";
            r.config = base_config(*in);
            r.config["reps"] = in->reps;
            r.body["mean"] = est.mean;
            r.body["stderr"] = est.stderr_of_mean;
            r.body["reps"] = est.reps;
            r.tables.push_back(Table{"", {"mean", "stderr", "reps"},
                                     {{FloatArith::to_string(est.mean), FloatArith::to_string(est.stderr_of_mean),
                                       std::to_string(est.reps)}}});
            std::ostringstream s;
            s << "E|R_" << in->n << "| ~ " << est.mean << " +/- " << est.stderr_of_mean << " (" << est.reps
              << " replicas)\n";
            r.summary = s.str();
            return r;
        }});
    }
}

void add_counterexample_command(CLI::App& app, GlobalOptions& g, std::vector<Command>& out) {
    CLI::App* sub = app.add_subcommand("counterexample",
                                       "range ratio |R_n(Z - phi)| / |R_n(Z)| for phi alternating 0, 1 (d = 1)");
    sub->fallthrough();
    auto n = std::make_shared<int>(10000);
    auto reps = std::make_shared<std::uint64_t>(1000);
    sub->add_option("--n", *n, "walk length")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--reps", *reps, "replicas")->capture_default_str()->check(CLI::PositiveNumber);
    out.push_back(Command{sub, [n, reps, &g]() {
        const CounterexampleReport rep = counterexample_ratio(*n, *reps, g.seed);
        Report r;
        r.name = "counterexample";
        r.config = {{"n", *n}, {"reps", *reps}};
        r.body["mean_ratio"] = rep.mean_ratio;
        r.body["stderr"] = rep.stderr_of_mean;
        r.body["reps"] = rep.reps;
        r.body["all_even"] = rep.all_even;
        if (rep.odd_site) r.body["odd_site"] = *rep.odd_site;
        r.tables.push_back(Table{"", {"n", "mean_ratio", "stderr", "reps", "all_even"},
                                 {{std::to_string(rep.n), FloatArith::to_string(rep.mean_ratio),
                                   FloatArith::to_string(rep.stderr_of_mean), std::to_string(rep.reps),
                                   rep.all_even ? "true" : "false"}}});
        std::ostringstream s;
        s << "counterexample: mean ratio " << rep.mean_ratio << " +/- " << rep.stderr_of_mean << " over " << rep.reps
          << " replicas; visited sites " << (rep.all_even ? "all even" : "include odd sites") << "\n";
        r.summary = s.str();
        r.exit_code = rep.all_even ? kPass : kPropertyFailure;
        return r;
    }});
}

}  // namespace rangewalk::cli
