#include <cmath>
#include <sstream>

#include <omp.h>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rangewalk/errors.hpp"
#include "rangewalk/montecarlo.hpp"

using namespace rangewalk;

TEST(Moments, MergeMatchesSinglePass) {
    std::vector<double> xs;
    for (int i = 0; i < 5000; ++i) xs.push_back(std::sin(i * 0.37) * 10 + (i % 7));
    Moments one;
    for (double x : xs) one.add(x);
    const Moments blocked = reduce_samples(xs);
    EXPECT_EQ(blocked.count, one.count);
    EXPECT_NEAR(blocked.mean, one.mean, 1e-12);
    EXPECT_NEAR(blocked.variance(), one.variance(), 1e-9);
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    EXPECT_NEAR(one.variance(), var, 1e-9);
}

TEST(EnumerateRange, MatchesIndependentOracle) {
    for (const auto& pmf : {simple_symmetric(1), uniform_cube(1), simple_symmetric(2)}) {
        const auto law = oracle::law_of(pmf);
        const InsertionPath f = random_insertion(11, 8, uniform_cube(pmf.dim()));
        for (int n = 0; n <= 8; ++n) EXPECT_EQ(enumerate_range(pmf, f, n), oracle::insertion_range(law, pmf.dim(), f.values(), n));
    }
    EXPECT_THROW(enumerate_range(simple_symmetric(3), InsertionPath::zero(3, 40), 39, 1000), ResourceError);
}

TEST(EnumerateRange, ZeroInsertionSimpleWalk) {
    // f = 0, n = 4: Zbar takes 2 steps. Paths ++ and -- visit 3 sites, +- and -+ visit 2.
    EXPECT_EQ(enumerate_range(simple_symmetric(1), InsertionPath::zero(1, 5), 4), mpq_class(5, 2));
}

TEST(McRange, WithinThreeSigmaAndThreadIndependent) {
    const IncrementPmf pmf = simple_symmetric(1);
    const InsertionPath f = random_insertion(3, 12, uniform_cube(1));
    const double exact = enumerate_range(pmf, f, 12).get_d();
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const RangeEstimate one = mc_range(pmf, f, 12, 40000, 99);
    omp_set_num_threads(3);
    const RangeEstimate three = mc_range(pmf, f, 12, 40000, 99);
    omp_set_num_threads(saved);
    EXPECT_EQ(one.mean, three.mean);
    EXPECT_EQ(one.stderr_of_mean, three.stderr_of_mean);
    EXPECT_LE(std::abs(one.mean - exact), 3 * one.stderr_of_mean);
    EXPECT_THROW(mc_range(pmf, f, 13, 10, 1), ValidationError);
}

TEST(HoldingLaw, SamplingMoments) {
    Engine eng = make_engine(5, 0);
    const HoldingLaw ex = HoldingLaw::exponential(2.0);
    Moments m;
    for (int i = 0; i < 200000; ++i) m.add(ex.sample(eng));
    EXPECT_NEAR(m.mean, 0.5, 4 * m.stderr_of_mean());

    const HoldingLaw par = HoldingLaw::pareto(0.8, 1.0);
    int above = 0;
    const int trials = 200000;
    for (int i = 0; i < trials; ++i) {
        const double t = par.sample(eng);
        ASSERT_GE(t, 1.0);
        above += t > 2.0;
    }
    const double p = std::pow(2.0, -0.8);
    EXPECT_NEAR(static_cast<double>(above) / trials, p, 4 * std::sqrt(p * (1 - p) / trials));

    EXPECT_EQ(HoldingLaw::deterministic(0.5).sample(eng), 0.5);
    EXPECT_FALSE(HoldingLaw::deterministic(0.5).continuous());
    EXPECT_THROW(HoldingLaw::exponential(0), ValidationError);
    EXPECT_THROW(HoldingLaw::pareto(-1, 1), ValidationError);
    EXPECT_DOUBLE_EQ(HoldingLaw::pareto(0.8, 0.5).jump_count_bound(5), 10);
}

TEST(FirstMeeting, Basics) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const PiecewisePath still{{0.0}, {{0}}};
    const PiecewisePath trap{{0.0, 1.0, 2.5}, {{2}, {1}, {0}}};
    EXPECT_EQ(first_meeting(trap, still, 3.0), 2.5);
    EXPECT_EQ(first_meeting(trap, still, 2.0), inf);
    EXPECT_EQ(first_meeting(still, still, 0.0), 0.0);
    const PiecewisePath mover{{0.0, 1.0}, {{0}, {1}}};
    std::uint64_t ties = 0;
    EXPECT_EQ(first_meeting(trap, mover, 3.0, &ties), 1.0);
    EXPECT_EQ(ties, 1u);
    // Crossing without sharing a site at an observed time is not a meeting.
    const PiecewisePath swap_a{{0.0, 1.0}, {{0}, {1}}};
    const PiecewisePath swap_b{{0.0, 1.0}, {{1}, {0}}};
    EXPECT_EQ(first_meeting(swap_a, swap_b, 5.0), inf);
}

TEST(ParticlePath, ParseAndValidate) {
    std::istringstream in("0 0 0\n0.5 1 0  # jump\n2 1 1\n");
    const ParticlePath p = read_particle_path(in);
    EXPECT_EQ(p.dim(), 2);
    ASSERT_EQ(p.jumps.size(), 2u);
    EXPECT_EQ(p.extent(), 1);
    std::istringstream late("1 0\n");
    EXPECT_THROW(read_particle_path(late), ValidationError);
    std::istringstream backwards("0 0\n2 1\n1 0\n");
    EXPECT_THROW(read_particle_path(backwards), ValidationError);
}

namespace {

TrapSimConfig base_config(double horizon, std::uint64_t reps) {
    TrapSimConfig cfg;
    cfg.dim = 1;
    cfg.pmf = simple_symmetric(1);
    cfg.holding = HoldingLaw::exponential(1.0);
    cfg.horizon = horizon;
    cfg.window = 12;
    cfg.reps = reps;
    cfg.seed = 21;
    cfg.particle = ParticlePath::constant({0});
    return cfg;
}

}  // namespace

TEST(TrapField, TimeZeroSurvivalIsPoissonVoid) {
    const TrapSimConfig cfg = base_config(0.0, 20000);
    const TrapComparison direct = simulate_trap_field(cfg);
    EXPECT_NEAR(direct.moving.estimate, std::exp(-1.0), 3 * direct.moving.stderr_of_mean);
    EXPECT_EQ(direct.moving.estimate, direct.constant.estimate);
    const TrapComparison ident = survival_via_identity(base_config(0.0, 50));
    EXPECT_DOUBLE_EQ(ident.moving.estimate, std::exp(-1.0));
    EXPECT_EQ(ident.moving.stderr_of_mean, 0.0);
}

TEST(TrapField, DirectAndIdentityAgree) {
    TrapSimConfig cfg = base_config(2.0, 4000);
    cfg.particle.jumps = {{0.7, {1}}, {1.4, {2}}};
    const TrapComparison d = simulate_trap_field(cfg);
    const TrapComparison i = survival_via_identity(cfg);
    EXPECT_LE(std::abs(d.moving.estimate - i.moving.estimate),
              3 * std::hypot(d.moving.stderr_of_mean, i.moving.stderr_of_mean));
    EXPECT_LE(std::abs(d.constant.estimate - i.constant.estimate),
              3 * std::hypot(d.constant.stderr_of_mean, i.constant.stderr_of_mean));
    EXPECT_TRUE(d.pascal_ok());
    EXPECT_TRUE(i.pascal_ok());
}

TEST(TrapField, ThreadIndependentAndDiagnostics) {
    TrapSimConfig cfg = base_config(3.0, 500);
    cfg.curve_points = 6;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const TrapComparison a = simulate_trap_field(cfg);
    omp_set_num_threads(3);
    const TrapComparison b = simulate_trap_field(cfg);
    omp_set_num_threads(saved);
    EXPECT_EQ(a.moving.estimate, b.moving.estimate);
    EXPECT_EQ(a.curve_moving, b.curve_moving);
    ASSERT_EQ(a.curve_times.size(), 7u);
    for (std::size_t k = 1; k < a.curve_moving.size(); ++k) EXPECT_LE(a.curve_moving[k], a.curve_moving[k - 1]);

    cfg.window = 2;
    const TrapComparison tight = simulate_trap_field(cfg);
    EXPECT_TRUE(tight.window_below_default);
    EXPECT_GT(tight.truncation_events, 0u);

    cfg.holding = HoldingLaw::deterministic(1.0);
    EXPECT_FALSE(simulate_trap_field(cfg).within_hypotheses);
    cfg.reps = 0;
    EXPECT_THROW(simulate_trap_field(cfg), ValidationError);
}

TEST(Counterexample, EvenSitesAndRatioNearHalf) {
    const CounterexampleReport r = counterexample_ratio(2000, 200, 4);
    EXPECT_TRUE(r.all_even);
    EXPECT_FALSE(r.odd_site.has_value());
    EXPECT_GT(r.mean_ratio, 0.4);
    EXPECT_LT(r.mean_ratio, 0.6);
    // n = 1: Z - phi is {0, 0} after an up-step and {0, -2} after a down-step.
    const CounterexampleReport one = counterexample_ratio(1, 400, 1);
    EXPECT_GT(one.mean_ratio, 0.5);
    EXPECT_LT(one.mean_ratio, 1.0);
    EXPECT_NEAR(one.mean_ratio, 0.75, 4 * one.stderr_of_mean);
}
