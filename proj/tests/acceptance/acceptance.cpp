// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rangewalk/coupling.hpp"
#include "rangewalk/engine.hpp"
#include "rangewalk/kernels.hpp"
#include "rangewalk/montecarlo.hpp"
#include "rangewalk/perturb.hpp"
#include "rangewalk/pmf.hpp"

using namespace rangewalk;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (failures.size() < 5) failures.push_back(what);
    }
};

using Check = std::function<void(Outcome&)>;

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

void exact_pascal(Outcome& o) {
    const std::vector<std::pair<std::string, IncrementPmf>> laws = {
        {"srw:1", simple_symmetric(1)}, {"srw:2", simple_symmetric(2)}, {"uniform3:1", uniform_cube(1)}};
    constexpr int kHorizon = 24;
    std::size_t rows = 0;
    for (const auto& [name, pmf] : laws) {
        const IncrementPmf steps = uniform_cube(pmf.dim());
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const TrapTrajectory phi = random_phi(1000 + seed, kHorizon + 1, steps);
            const auto rep = verify_pascal<ExactArith>(pmf, phi, kHorizon);
            for (const auto& r : rep.rows) {
                ++rows;
                o.require(r.margin >= 0, name + " seed " + std::to_string(seed) + " n=" + std::to_string(r.n) +
                                             " margin " + r.margin.get_str());
            }
        }
    }
    o.detail = std::to_string(rows) + " exact margins, 3 laws x 100 trajectories, n <= 24";
}

void domination(Outcome& o) {
    const std::vector<std::pair<std::string, IncrementPmf>> laws = {
        {"srw:1", simple_symmetric(1)},
        {"uniform3:1", uniform_cube(1)},
        {"lazy:1", lazy_half(1)},
        {"uniform5:1", IncrementPmf(1, {{{0}, mpq_class(1, 5)},
                                        {{1}, mpq_class(1, 5)}, {{-1}, mpq_class(1, 5)},
                                        {{2}, mpq_class(1, 5)}, {{-2}, mpq_class(1, 5)}})}};
    std::size_t checks = 0;
    for (const auto& [name, pmf] : laws) {
        o.require(validate_class(pmf).has(ClassTag::ClassI), name + " is not in ClassI");
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const TrapTrajectory phi = random_phi(2000 + seed, 21, uniform_cube(1));
            for (const auto& d : domination_chain<ExactArith>(pmf, phi, 20)) {
                ++checks;
                o.require(d.pass, name + " seed " + std::to_string(seed) + " n=" + std::to_string(d.n) + " slack " +
                                      d.min_slack.get_str());
            }
        }
    }
    o.detail = std::to_string(checks) + " domination checks, 4 ClassI laws x 50 trajectories, n <= 20";
}

void conditions(Outcome& o) {
    for (int d = 1; d <= 3; ++d) {
        const ConditionReport r = check_mono_conditions(simple_symmetric(d), 16, ArithMode::Exact);
        o.require(r.arithmetic == "exact" && r.holds(), "mono conditions fail for srw:" + std::to_string(d));
    }
    const ConditionReport r4 = check_mono_conditions(simple_symmetric(4), 16, ArithMode::Float);
    o.require(r4.holds(), "mono conditions fail for srw:4 (float), min slack " + r4.temporal.min_slack.text + " / " +
                              r4.pointwise.min_slack.text);
    for (int d = 1; d <= 3; ++d)
        o.require(check_moreau_conditions(lazy_half(d), 16, ArithMode::Auto).holds(),
                  "moreau conditions fail for lazy:" + std::to_string(d));
    const ConditionReport srw = check_moreau_conditions(simple_symmetric(1), 16, ArithMode::Exact);
    o.require(!srw.holds(), "moreau conditions unexpectedly hold for srw:1");
    o.require(srw.temporal.first_failure_n == 1, "moreau temporal failure for srw:1 not at n = 1");
    o.require(srw.temporal.witness_n == 1, "moreau witness for srw:1 not at n = 1");
    o.detail = "mono exact srw d<=3 and float srw d=4 (N=16); moreau lazy d<=3 pass; srw:1 fails, witness n=" +
               std::to_string(srw.temporal.witness_n) + " slack " + srw.temporal.min_slack.text;
}

void decomposition(Outcome& o) {
    std::size_t rows = 0;
    for (int d = 1; d <= 2; ++d) {
        const IncrementPmf pmf = simple_symmetric(d);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const TrapTrajectory phi = random_phi(3000 + seed, 13, uniform_cube(d));
            for (const auto& r : verify_decomposition<ExactArith>(pmf, phi, 12)) {
                ++rows;
                o.require(r.residual == 0, "d=" + std::to_string(d) + " seed " + std::to_string(seed) +
                                               " n=" + std::to_string(r.n) + " residual " + r.residual.get_str());
            }
            const auto rec = verify_w_recursion<ExactArith>(pmf, phi, 12);
            for (const auto& r : rec.rows) {
                ++rows;
                o.require(r.slack >= 0, "w-recursion d=" + std::to_string(d) + " seed " + std::to_string(seed) +
                                            " n=" + std::to_string(r.n) + " slack " + r.slack.get_str());
            }
        }
    }
    o.detail = std::to_string(rows) + " identity residuals and recursion slacks, srw d<=2, 20 trajectories, n <= 12";
}

void coupling(Outcome& o) {
    const std::vector<std::pair<Site, int>> cases = {{{3}, 9}, {{2, 1}, 7}, {{1, 1, 1}, 7}};
    std::uint64_t paths = 0, simulated = 0;
    for (const auto& [x, nmax] : cases) {
        for (int n = 0; n <= nmax; ++n) {
            const auto rep = exhaustive_coupling_oracle(x, n);
            paths += rep.paths;
            o.require(rep.pass(), "oracle x=" + to_string(x) + " n=" + std::to_string(n) + ": " + rep.first_failure);
        }
        try {
            const auto run = run_coupling(x, nmax, 100000, 77);
            simulated += run.reps;
            o.require(run.violations == 0, "run_coupling reported violations for x=" + to_string(x));
        } catch (const std::exception& e) {
            o.require(false, std::string("run_coupling: ") + e.what());
        }
    }
    for (int d = 1; d <= 2; ++d)
        for (int n = 1; n <= 9; n += 2)
            o.require(verify_pnxodd_exact(d, n, n).pass, "pnxodd d=" + std::to_string(d) + " n=" + std::to_string(n));
    o.detail = std::to_string(paths) + " enumerated paths, " + std::to_string(simulated) +
               " simulated coupled paths, pnxodd d<=2 n<=9";
}

void counterexample(Outcome& o) {
    const CounterexampleReport r = counterexample_ratio(10000, 1000, 2024);
    o.require(r.all_even, "odd site visited: " + std::to_string(r.odd_site.value_or(0)));
    o.require(r.mean_ratio >= 0.45 && r.mean_ratio <= 0.55, "mean ratio " + fmt(r.mean_ratio) + " outside [0.45, 0.55]");
    o.detail = "mean ratio " + fmt(r.mean_ratio) + " +/- " + fmt(r.stderr_of_mean) + ", all sites even: " +
               (r.all_even ? "yes" : "no");
}

void range_oracles(Outcome& o) {
    const IncrementPmf pmf = simple_symmetric(1);
    double worst_z = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const InsertionPath f = random_insertion(4000 + seed, 12, uniform_cube(1));
        for (int n = 0; n <= 12; ++n) {
            const mpq_class a = range_via_hits<ExactArith>(pmf, f, n);
            const mpq_class b = enumerate_range(pmf, f, n);
            o.require(a == b, "seed " + std::to_string(seed) + " n=" + std::to_string(n) + ": " + a.get_str() +
                                  " vs " + b.get_str());
        }
        const RangeEstimate mc = mc_range(pmf, f, 12, 100000, 5000 + seed);
        const double exact = enumerate_range(pmf, f, 12).get_d();
        const double z = std::abs(mc.mean - exact) / mc.stderr_of_mean;
        worst_z = std::max(worst_z, z);
        o.require(z <= 3.0, "mc_range seed " + std::to_string(seed) + " off by " + fmt(z) + " sigma");
    }
    o.detail = "exact equality for 10 paths, n <= 12; largest mc deviation " + fmt(worst_z) + " sigma";
}

void continuous_time(Outcome& o) {
    TrapSimConfig base;
    base.dim = 1;
    base.pmf = simple_symmetric(1);
    base.horizon = 5.0;
    base.window = 60;
    base.reps = 10000;
    base.intensity = 1.0;

    ParticlePath still = ParticlePath::constant({0});
    ParticlePath one_jump = still;
    one_jump.jumps = {{2.5, {1}}};
    ParticlePath zigzag = still;
    zigzag.jumps = {{1.0, {1}}, {2.0, {0}}, {3.0, {1}}, {4.0, {0}}};
    const std::vector<std::pair<std::string, ParticlePath>> particles = {
        {"static", still}, {"one-jump", one_jump}, {"zig-zag", zigzag}};
    const std::vector<std::pair<std::string, HoldingLaw>> laws = {
        {"exp(1)", HoldingLaw::exponential(1.0)}, {"pareto(0.8)", HoldingLaw::pareto(0.8, 1.0)}};

    double worst = 0;
    std::uint64_t seed = 6000;
    for (const auto& [lname, law] : laws) {
        TrapSimConfig cfg = base;
        cfg.holding = law;
        cfg.horizon = 0.0;
        cfg.seed = seed++;
        const TrapComparison t0 = simulate_trap_field(cfg);
        const double z0 = std::abs(t0.moving.estimate - std::exp(-1.0)) / t0.moving.stderr_of_mean;
        o.require(z0 <= 3.0, lname + " t=0 estimate " + fmt(t0.moving.estimate) + " is " + fmt(z0) + " sigma from e^-1");
        worst = std::max(worst, z0);

        for (const auto& [pname, particle] : particles) {
            cfg.horizon = base.horizon;
            cfg.particle = particle;
            cfg.seed = seed++;
            const TrapComparison direct = simulate_trap_field(cfg);
            const TrapComparison ident = survival_via_identity(cfg);
            const std::string tag = lname + " " + pname;
            o.require(direct.pascal_ok(), tag + " direct: S(X)=" + fmt(direct.moving.estimate) + " > S(0)=" +
                                              fmt(direct.constant.estimate) + " + 3 sigma");
            o.require(ident.pascal_ok(), tag + " identity: S(X)=" + fmt(ident.moving.estimate) + " > S(0)=" +
                                             fmt(ident.constant.estimate) + " + 3 sigma");
            const auto agree = [&](const SurvivalEstimate& a, const SurvivalEstimate& b, const std::string& which) {
                const double s = std::hypot(a.stderr_of_mean, b.stderr_of_mean);
                const double z = s > 0 ? std::abs(a.estimate - b.estimate) / s : (a.estimate == b.estimate ? 0 : 1e9);
                worst = std::max(worst, z);
                o.require(z <= 3.0, tag + " " + which + ": direct " + fmt(a.estimate) + " vs identity " +
                                        fmt(b.estimate) + " (" + fmt(z) + " sigma)");
            };
            agree(direct.moving, ident.moving, "S(X)");
            agree(direct.constant, ident.constant, "S(0)");
            o.require(direct.truncation_events == 0, tag + ": " + std::to_string(direct.truncation_events) +
                                                         " kills from the window edge");
        }
    }
    o.detail = "2 holding laws x 3 particles, t=5, L=60, 10^4 replicas; largest deviation " + fmt(worst) + " sigma";
}

void kernels(Outcome& o) {
    double worst = 0;
    for (int d = 1; d <= 3; ++d)
        for (int n = 0; n <= 12; ++n) {
            const double err = fourier_crosscheck(simple_symmetric(d), n, 2 * n + 3);
            worst = std::max(worst, err);
            o.require(err <= 1e-10, "fourier d=" + std::to_string(d) + " n=" + std::to_string(n) + " error " + fmt(err));
        }

    // Semigroup p_m * p_n = p_{m+n} with the convolution done by a sparse map in this file.
    std::size_t pairs = 0;
    for (const IncrementPmf& pmf : {simple_symmetric(1), uniform_cube(1), simple_symmetric(2)}) {
        const auto table = kernel_table<ExactArith>(pmf, 12);
        for (int m = 0; m <= 12; ++m)
            for (int n = 0; m + n <= 12; ++n) {
                const auto& pm = table[static_cast<std::size_t>(m + 1)];
                const auto& pn = table[static_cast<std::size_t>(n + 1)];
                const auto& pmn = table[static_cast<std::size_t>(m + n + 1)];
                std::map<Site, mpq_class> conv;
                for (std::size_t i = 0; i < pm.grid().size(); ++i) {
                    if (pm.grid()[i] == 0) continue;
                    const Site x = pm.grid().site(i);
                    const mpq_class a = pm(x);
                    for (std::size_t j = 0; j < pn.grid().size(); ++j) {
                        if (pn.grid()[j] == 0) continue;
                        const Site y = pn.grid().site(j);
                        conv[add(x, y)] += a * pn(y);
                    }
                }
                bool ok = true;
                mpq_class total = 0;
                for (const auto& [z, v] : conv) {
                    ok = ok && pmn(z) == v;
                    total += v;
                }
                ok = ok && total == 1 && pmn.total() == 1;
                ++pairs;
                o.require(ok, pmf.describe() + " semigroup fails at m=" + std::to_string(m) + " n=" + std::to_string(n));
            }
    }
    for (int d = 1; d <= 3; ++d)
        for (int n = 1; n <= 11; n += 2)
            o.require(n_step_kernel<ExactArith>(simple_symmetric(d), n)(origin(d)) == 0,
                      "p_" + std::to_string(n) + "(0) != 0 in d=" + std::to_string(d));
    o.detail = "fourier max error " + fmt(worst) + " (srw d<=3, n<=12); " + std::to_string(pairs) +
               " exact semigroup pairs; odd p_n(0) = 0";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, Check>> criteria = {
        {"exact pascal suite", exact_pascal},
        {"domination induction suite", domination},
        {"conditions suite", conditions},
        {"decomposition identities", decomposition},
        {"coupling suite", coupling},
        {"counterexample ratio", counterexample},
        {"range oracle equivalence", range_oracles},
        {"continuous-time pascal", continuous_time},
        {"kernel cross-checks", kernels},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            check(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d %s: %s (%.1fs) %s\n", index, name.c_str(), o.pass ? "PASS" : "FAIL", secs,
                    o.detail.c_str());
        for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
