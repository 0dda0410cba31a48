#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <toml.hpp>

#include "commands.hpp"
#include "rangewalk/errors.hpp"
#include "rangewalk/montecarlo.hpp"
#include "rangewalk/pmf.hpp"

namespace rangewalk::cli {

namespace {

struct TrapInputs {
    std::string config;
    std::optional<std::uint64_t> reps;
    std::optional<double> horizon;
    std::optional<int> window;
    std::optional<double> intensity;
    std::optional<int> curve_points;
};

template <class T>
T get_or(const toml::table& t, std::string_view key, T fallback) {
    const toml::node* node = t.get(key);
    if (!node) return fallback;
    if constexpr (std::is_same_v<T, double>) {
        if (auto v = node->value<double>()) return *v;
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (auto v = node->value<std::string>()) return *v;
    } else {
        if (auto v = node->value<std::int64_t>()) return static_cast<T>(*v);
    }
    throw ValidationError("config key '" + std::string(key) + "' has the wrong type");
}

HoldingLaw parse_holding(const toml::table* t) {
    if (!t) return HoldingLaw::exponential(1.0);
    const std::string kind = get_or<std::string>(*t, "kind", "exponential");
    if (kind == "exponential") return HoldingLaw::exponential(get_or<double>(*t, "rate", 1.0));
    if (kind == "pareto") return HoldingLaw::pareto(get_or<double>(*t, "shape", 1.0), get_or<double>(*t, "scale", 1.0));
    if (kind == "deterministic") return HoldingLaw::deterministic(get_or<double>(*t, "period", 1.0));
    throw ValidationError("unknown holding kind '" + kind + "'");
}

Site array_site(const toml::array& a, std::size_t from = 0) {
    Site s;
    for (std::size_t i = from; i < a.size(); ++i) {
        auto v = a[i].value<std::int64_t>();
        if (!v) throw ValidationError("particle site coordinates must be integers");
        s.push_back(static_cast<int>(*v));
    }
    return s;
}

ParticlePath parse_particle(const toml::table* t, int dim, const std::filesystem::path& base) {
    if (!t) return ParticlePath::constant(origin(dim));
    if (auto file = t->get("file")) {
        auto p = file->value<std::string>();
        if (!p) throw ValidationError("particle.file must be a string");
        std::filesystem::path path(*p);
        if (path.is_relative()) path = base / path;
        return load_particle_file(path.string());
    }
    ParticlePath path;
    if (auto start = t->get_as<toml::array>("start"))
        path.start = array_site(*start);
    else
        path.start = origin(dim);
    if (auto jumps = t->get_as<toml::array>("jumps")) {
        for (const auto& j : *jumps) {
            const toml::array* row = j.as_array();
            if (!row || row->size() < 2) throw ValidationError("particle.jumps rows are [time, x_1, ..., x_d]");
            auto time = (*row)[0].value<double>();
            if (!time) throw ValidationError("particle jump time must be a number");
            path.jumps.emplace_back(*time, array_site(*row, 1));
        }
    }
    path.validate();
    return path;
}

TrapSimConfig load_config(const TrapInputs& in, const GlobalOptions& g, json& resolved) {
    toml::table root;
    try {
        root = toml::parse_file(in.config);
    } catch (const toml::parse_error& e) {
        std::ostringstream s;
        s << "cannot parse " << in.config << ": " << e.description() << " at line " << e.source().begin.line;
        throw ValidationError(s.str());
    }
    const std::filesystem::path base = std::filesystem::path(in.config).parent_path();

    TrapSimConfig cfg;
    const std::string pmf_spec = get_or<std::string>(root, "pmf", "srw:1");
    cfg.pmf = pmf_from_spec(pmf_spec);
    cfg.dim = get_or<int>(root, "dim", cfg.pmf.dim());
    cfg.intensity = in.intensity.value_or(get_or<double>(root, "intensity", 1.0));
    cfg.holding = parse_holding(root["holding"].as_table());
    cfg.horizon = in.horizon.value_or(get_or<double>(root, "horizon", 1.0));
    cfg.particle = parse_particle(root["particle"].as_table(), cfg.dim, base);
    cfg.reps = in.reps.value_or(get_or<std::uint64_t>(root, "reps", 10000));
    cfg.seed = g.seed_given ? g.seed : get_or<std::uint64_t>(root, "seed", g.seed);
    cfg.curve_points = in.curve_points.value_or(get_or<int>(root, "curve_points", 0));
    const bool window_set = in.window || root.contains("window");
    cfg.window = 1;
    cfg.window = in.window.value_or(get_or<int>(root, "window", default_window(cfg)));
    cfg.validate();

    resolved = json::object();
    resolved["config_file"] = in.config;
    resolved["dim"] = cfg.dim;
    resolved["pmf"] = pmf_spec;
    resolved["window"] = cfg.window;
    resolved["window_source"] = window_set ? "given" : "default";
    resolved["default_window"] = default_window(cfg);
    resolved["intensity"] = cfg.intensity;
    resolved["holding"] = cfg.holding.describe();
    resolved["horizon"] = cfg.horizon;
    json particle = json::object();
    particle["start"] = cfg.particle.start;
    json jumps = json::array();
    for (const auto& [t, s] : cfg.particle.jumps) jumps.push_back({{"time", t}, {"site", s}});
    particle["jumps"] = jumps;
    resolved["particle"] = particle;
    resolved["reps"] = cfg.reps;
    resolved["seed"] = cfg.seed;
    resolved["curve_points"] = cfg.curve_points;
    return cfg;
}

json estimate_json(const SurvivalEstimate& e) {
    json j = json::object();
    j["estimate"] = e.estimate;
    j["stderr"] = e.stderr_of_mean;
    j["reps"] = e.reps;
    j["method"] = e.method;
    return j;
}

Report trap_report(const std::string& name, const TrapSimConfig& cfg, const TrapComparison& c, json resolved) {
    Report r;
    r.name = name;
    r.config = std::move(resolved);
    r.body["estimate"] = c.moving.estimate;
    r.body["stderr"] = c.moving.stderr_of_mean;
    r.body["reps"] = c.moving.reps;
    r.body["method"] = c.moving.method;
    r.body["truncation_events"] = c.truncation_events;
    r.body["tie_events"] = c.tie_events;
    r.body["moving"] = estimate_json(c.moving);
    r.body["constant"] = estimate_json(c.constant);
    r.body["diff_stderr"] = c.diff_stderr;
    r.body["combined_stderr"] = c.combined_stderr;
    r.body["pascal_verdict"] = c.pascal_ok() ? "consistent" : "violated";
    r.body["window_below_default"] = c.window_below_default;
    r.body["within_hypotheses"] = c.within_hypotheses;
    if (!c.curve_times.empty()) {
        Table t{"survival", {"t", "S_X", "S_0"}, {}};
        for (std::size_t i = 0; i < c.curve_times.size(); ++i)
            t.add({FloatArith::to_string(c.curve_times[i]), FloatArith::to_string(c.curve_moving[i]),
                   FloatArith::to_string(c.curve_constant[i])});
        r.tables.push_back(std::move(t));
    }
    std::ostringstream s;
    s << name << ": S_t(X) = " << c.moving.estimate << " +/- " << c.moving.stderr_of_mean
      << ", S_t(0) = " << c.constant.estimate << " +/- " << c.constant.stderr_of_mean << " at t = " << cfg.horizon
      << " (" << c.moving.method << ", " << c.moving.reps << " replicas); comparison "
      << (c.pascal_ok() ? "consistent" : "VIOLATED") << "\n";
    if (c.truncation_events) s << "warning: " << c.truncation_events << " kills by traps from the window edge\n";
    if (c.window_below_default) s << "warning: window " << cfg.window << " is below the default " << default_window(cfg) << "\n";
    if (!c.within_hypotheses) s << "warning: configuration lies outside the proved regime\n";
    r.summary = s.str();
    return r;
}

}  // namespace

void add_trap_commands(CLI::App& app, GlobalOptions& g, std::vector<Command>& out) {
    CLI::App* trap = app.add_subcommand("trap", "continuous-time survival among mobile traps");
    trap->require_subcommand(1);
    trap->fallthrough();
    const std::pair<const char*, const char*> subs[] = {
        {"simulate", "direct simulation of the Poisson trap field"},
        {"identity", "exp(-intensity * sum_y h(y)) from single-trap hitting estimates"},
    };
    for (const auto& [name, help] : subs) {
        CLI::App* sub = trap->add_subcommand(name, help);
        sub->fallthrough();
        auto in = std::make_shared<TrapInputs>();
        sub->add_option("--config", in->config, "TOML configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--reps", in->reps, "override replicas");
        sub->add_option("--horizon,-t", in->horizon, "override horizon t");
        sub->add_option("--window,-L", in->window, "override window radius L");
        sub->add_option("--intensity", in->intensity, "override trap intensity");
        sub->add_option("--curve-points", in->curve_points, "override survival curve resolution");
        const std::string mode = name;
        out.push_back(Command{sub, [in, &g, mode]() {
            json resolved;
            const TrapSimConfig cfg = load_config(*in, g, resolved);
            const TrapComparison c = mode == "simulate" ? simulate_trap_field(cfg) : survival_via_identity(cfg);
            return trap_report("trap_" + mode, cfg, c, std::move(resolved));
        }});
    }
}

}  // namespace rangewalk::cli
