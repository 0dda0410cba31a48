#include <sstream>

#include "commands.hpp"
#include "rangewalk/coupling.hpp"
#include "rangewalk/engine.hpp"
#include "rangewalk/errors.hpp"
#include "rangewalk/kernels.hpp"
#include "rangewalk/pmf.hpp"

namespace rangewalk::cli {

namespace {

struct VerifyInputs {
    std::string pmf = "srw:1";
    std::string phi = "alternating:20";
    std::string phi_file;
    int horizon = -1;
};

struct Resolved {
    IncrementPmf pmf;
    TrapTrajectory phi;
    int horizon;
    bool exact;
};

void add_inputs(CLI::App* sub, VerifyInputs& in) {
    sub->add_option("--pmf", in.pmf, "increment law: srw:d, lazy:d, uniform3:d, point:d or file:PATH")
        ->capture_default_str();
    sub->add_option("--phi", in.phi, "trap trajectory: alternating:N, zero:N, random:SEED:N or file:PATH")
        ->capture_default_str();
    sub->add_option("--phi-file", in.phi_file, "trap trajectory file, one site per line");
    sub->add_option("--horizon,-N", in.horizon, "last time N (default: trajectory length - 1)");
}

Resolved resolve(const VerifyInputs& in, const GlobalOptions& g) {
    IncrementPmf pmf = pmf_from_spec(in.pmf);
    TrapTrajectory phi = load_phi(in.phi, in.phi_file, pmf.dim());
    if (phi.dim() != pmf.dim()) throw DimensionError("trajectory and pmf dimensions differ");
    const int horizon = in.horizon >= 0 ? in.horizon : static_cast<int>(phi.size()) - 1;
    const std::size_t cells = window_cells(pmf.dim(), engine_window(pmf, phi, horizon));
    const bool exact = use_exact(arith_mode(g), pmf.dim(), cells);
    return Resolved{std::move(pmf), std::move(phi), horizon, exact};
}

json input_config(const VerifyInputs& in, const Resolved& r) {
    json c = json::object();
    c["pmf"] = in.pmf;
    c["pmf_atoms"] = r.pmf.describe();
    c["phi"] = in.phi_file.empty() ? in.phi : "file:" + in.phi_file;
    c["horizon"] = r.horizon;
    c["arithmetic"] = r.exact ? "exact" : "float";
    return c;
}

std::string verdict(bool ok) { return ok ? "ok" : "FAIL"; }

template <class A>
Report pascal(const Resolved& r) {
    const PascalReport<A> rep = verify_pascal<A>(r.pmf, r.phi, r.horizon);
    Report out;
    out.name = "pascal";
    Table t{"", {"n", "Wtilde_phi", "Wtilde_0", "margin", "verdict"}, {}};
    std::optional<int> first_fail;
    for (const auto& row : rep.rows) {
        t.add({std::to_string(row.n), A::to_string(row.w_phi), A::to_string(row.w_zero), A::to_string(row.margin),
               verdict(row.ok)});
        if (!row.ok && !first_fail) first_fail = row.n;
    }
    out.tables.push_back(std::move(t));
    out.body["walk_class"] = to_string(rep.walk_class.tag);
    out.body["unproved_regime"] = rep.unproved_regime;
    out.body["pass"] = rep.pass;
    if (first_fail) out.body["witness_n"] = *first_fail;
    std::ostringstream s;
    s << "pascal: " << (rep.pass ? "PASS" : "FAIL") << " for n <= " << r.horizon << " (" << A::name
      << ", class " << to_string(rep.walk_class.tag) << (rep.unproved_regime ? ", unproved regime" : "") << ")";
    if (first_fail) s << "; first negative margin at n=" << *first_fail;
    out.summary = s.str() + "\n";
    out.exit_code = rep.pass ? kPass : kPropertyFailure;
    return out;
}

template <class A>
Report domination(const Resolved& r) {
    if (r.pmf.dim() != 1) throw DimensionError("domination check is defined in d = 1 only");
    const auto chain = domination_chain<A>(r.pmf, r.phi, r.horizon);
    Report out;
    out.name = "domination";
    Table t{"", {"n", "min_slack", "witness_k", "witness_x0", "verdict"}, {}};
    bool pass = true;
    std::optional<int> first_fail;
    for (const auto& d : chain) {
        t.add({std::to_string(d.n), A::to_string(d.min_slack), std::to_string(d.witness_k),
               std::to_string(d.witness_x0), verdict(d.pass)});
        if (!d.pass && !first_fail) first_fail = d.n;
        pass = pass && d.pass;
    }
    out.tables.push_back(std::move(t));
    out.body["walk_class"] = to_string(validate_class(r.pmf).tag);
    out.body["pass"] = pass;
    if (first_fail) out.body["witness_n"] = *first_fail;
    out.summary = std::string("domination: ") + (pass ? "PASS" : "FAIL") + " for n <= " + std::to_string(r.horizon) +
                  (first_fail ? "; first failure at n=" + std::to_string(*first_fail) : "") + "\n";
    out.exit_code = pass ? kPass : kPropertyFailure;
    return out;
}

template <class A>
Report decomposition(const Resolved& r) {
    const auto rows = verify_decomposition<A>(r.pmf, r.phi, r.horizon);
    Report out;
    out.name = "decomposition";
    Table t{"", {"n", "value", "target", "residual", "verdict"}, {}};
    bool pass = true;
    std::optional<int> first_fail;
    for (const auto& row : rows) {
        const bool ok = A::is_zero(row.residual);
        t.add({std::to_string(row.n), A::to_string(row.value), A::to_string(row.target), A::to_string(row.residual),
               verdict(ok)});
        if (!ok && !first_fail) first_fail = row.n;
        pass = pass && ok;
    }
    out.tables.push_back(std::move(t));
    out.body["pass"] = pass;
    if (first_fail) out.body["witness_n"] = *first_fail;
    out.summary = std::string("decomposition: ") + (pass ? "PASS" : "FAIL") + " for n <= " +
                  std::to_string(r.horizon) +
                  (first_fail ? "; nonzero residual at n=" + std::to_string(*first_fail) : "") + "\n";
    out.exit_code = pass ? kPass : kPropertyFailure;
    return out;
}

template <class A>
Report w_recursion(const Resolved& r) {
    const auto rep = verify_w_recursion<A>(r.pmf, r.phi, r.horizon);
    Report out;
    out.name = "w_recursion";
    Table t{"", {"n", "lhs", "rhs", "slack", "verdict"}, {}};
    std::optional<int> first_fail;
    for (const auto& row : rep.rows) {
        const bool ok = A::nonneg(row.slack);
        t.add({std::to_string(row.n), A::to_string(row.lhs), A::to_string(row.rhs), A::to_string(row.slack),
               verdict(ok)});
        if (!ok && !first_fail) first_fail = row.n;
    }
    out.tables.push_back(std::move(t));
    out.body["conditions_hold"] = rep.conditions_hold;
    out.body["pass"] = rep.pass;
    if (first_fail) out.body["witness_n"] = *first_fail;
    out.summary = std::string("w-recursion: ") + (rep.pass ? "PASS" : "FAIL") + " for n <= " +
                  std::to_string(r.horizon) + (rep.conditions_hold ? "" : " (monotonicity conditions fail)") +
                  (first_fail ? "; negative slack at n=" + std::to_string(*first_fail) : "") + "\n";
    out.exit_code = rep.pass ? kPass : kPropertyFailure;
    return out;
}

json check_json(const ConditionCheck& c) {
    json j = json::object();
    j["name"] = c.name;
    j["holds"] = c.holds;
    j["min_slack"] = c.min_slack.text;
    j["min_slack_approx"] = c.min_slack.approx;
    j["witness_n"] = c.witness_n;
    if (c.witness_x) j["witness_x"] = *c.witness_x;
    if (c.first_failure_n) j["first_failure_n"] = *c.first_failure_n;
    return j;
}

std::string check_line(const ConditionCheck& c) {
    std::ostringstream s;
    s << "  " << c.name << ": " << (c.holds ? "holds" : "FAILS") << ", min slack " << c.min_slack.text << " at n="
      << c.witness_n;
    if (c.witness_x) s << " x=" << to_string(*c.witness_x);
    if (c.first_failure_n) s << "; first failure n=" << *c.first_failure_n;
    return s.str() + "\n";
}

template <class F>
Command make(CLI::App* sub, F&& run) {
    return Command{sub, std::forward<F>(run)};
}

}  // namespace

void add_verify_commands(CLI::App& app, GlobalOptions& g, std::vector<Command>& out) {
    CLI::App* verify = app.add_subcommand("verify", "exact checks of the discrete-time results");
    verify->require_subcommand(1);
    verify->fallthrough();

    struct Suite {
        const char* name;
        const char* help;
        Report (*exact)(const Resolved&);
        Report (*floating)(const Resolved&);
    };
    static const Suite suites[] = {
        {"pascal", "W~_phi(n) >= W~_0(n) for every n <= N", &pascal<ExactArith>, &pascal<FloatArith>},
        {"domination", "symmetric domination of the survival fields (d = 1)", &domination<ExactArith>,
         &domination<FloatArith>},
        {"decomposition", "first-passage decomposition identity", &decomposition<ExactArith>,
         &decomposition<FloatArith>},
        {"w-recursion", "recursive lower bound on the hit-mass difference", &w_recursion<ExactArith>,
         &w_recursion<FloatArith>},
    };
    for (const Suite& suite : suites) {
        CLI::App* sub = verify->add_subcommand(suite.name, suite.help);
        sub->fallthrough();
        auto in = std::make_shared<VerifyInputs>();
        add_inputs(sub, *in);
        out.push_back(make(sub, [in, &g, suite]() {
            const Resolved r = resolve(*in, g);
            Report rep = r.exact ? suite.exact(r) : suite.floating(r);
            rep.config = input_config(*in, r);
            return rep;
        }));
    }

    {
        CLI::App* sub = verify->add_subcommand("conditions", "monotonicity conditions on the origin kernel");
        sub->fallthrough();
        auto pmf = std::make_shared<std::string>("srw:1");
        auto mode = std::make_shared<std::string>("mono");
        auto horizon = std::make_shared<int>(16);
        sub->add_option("--pmf", *pmf, "increment law")->capture_default_str();
        sub->add_option("--mode", *mode, "mono (paired kernel) or moreau (single kernel)")
            ->check(CLI::IsMember({"mono", "moreau"}))
            ->capture_default_str();
        sub->add_option("--horizon,-N", *horizon, "last time N")->capture_default_str()->check(CLI::NonNegativeNumber);
        out.push_back(make(sub, [pmf, mode, horizon, &g]() {
            const IncrementPmf law = pmf_from_spec(*pmf);
            const ConditionReport rep = *mode == "mono" ? check_mono_conditions(law, *horizon, arith_mode(g))
                                                        : check_moreau_conditions(law, *horizon, arith_mode(g));
            Report r;
            r.name = "conditions_" + *mode;
            r.config = {{"pmf", *pmf}, {"mode", *mode}, {"horizon", *horizon}, {"arithmetic", rep.arithmetic}};
            r.body["family"] = rep.family;
            r.body["holds"] = rep.holds();
            r.body["temporal"] = check_json(rep.temporal);
            r.body["pointwise"] = check_json(rep.pointwise);
            r.summary = "conditions (" + rep.family + ", " + rep.arithmetic + ", n <= " + std::to_string(*horizon) +
                        "): " + (rep.holds() ? "PASS" : "FAIL") + "\n" + check_line(rep.temporal) +
                        check_line(rep.pointwise);
            r.exit_code = rep.holds() ? kPass : kPropertyFailure;
            return r;
        }));
    }

    {
        CLI::App* sub = verify->add_subcommand("pnxodd", "p_n(x) <= p_n(e_1) for odd |x|_1 (simple random walk)");
        sub->fallthrough();
        auto dim = std::make_shared<int>(1);
        auto n = std::make_shared<int>(9);
        auto radius = std::make_shared<int>(-1);
        sub->add_option("--dim,-d", *dim, "dimension")->capture_default_str()->check(CLI::Range(1, 8));
        sub->add_option("--n", *n, "odd number of steps")->capture_default_str();
        sub->add_option("--radius", *radius, "sup-norm radius checked (default n)");
        out.push_back(make(sub, [dim, n, radius]() {
            const int rad = *radius >= 0 ? *radius : *n;
            const OddSiteReport rep = verify_pnxodd_exact(*dim, *n, rad);
            Report r;
            r.name = "pnxodd";
            r.config = {{"dim", *dim}, {"n", *n}, {"radius", rad}};
            r.body["pass"] = rep.pass;
            r.body["checked"] = rep.checked;
            r.body["p_n_e1"] = rep.reference.get_str();
            r.body["worst"] = rep.worst.get_str();
            r.body["worst_site"] = rep.worst_site;
            r.summary = std::string("pnxodd: ") + (rep.pass ? "PASS" : "FAIL") + ", p_n(e_1) = " +
                        rep.reference.get_str() + ", largest other odd site " + to_string(rep.worst_site) + " = " +
                        rep.worst.get_str() + "\n";
            r.exit_code = rep.pass ? kPass : kPropertyFailure;
            return r;
        }));
    }
}

}  // namespace rangewalk::cli
