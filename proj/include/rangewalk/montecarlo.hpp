#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "rangewalk/lattice.hpp"
#include "rangewalk/perturb.hpp"
#include "rangewalk/pmf.hpp"
#include "rangewalk/rng.hpp"

namespace rangewalk {

/// Mergeable mean/variance accumulator (Chan et al. pairwise update).
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const Moments& other);
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double stderr_of_mean() const;
};

/// Reduces per-replica samples in fixed blocks of index order, so the result
/// does not depend on the number of threads that produced them.
Moments reduce_samples(const std::vector<double>& samples);

struct RangeEstimate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::uint64_t reps = 0;
};

/// Zbar jumps at even times and holds at odd times; counts distinct sites of
/// Zbar_i + f_i over 0 <= i <= n. f must have at least n + 1 entries.
RangeEstimate mc_range(const IncrementPmf& pmf, const InsertionPath& f, int n, std::uint64_t reps,
                       std::uint64_t seed);

inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

/// Exact E|R_n(Zbar + f)| by enumerating all |support|^floor(n/2) walk paths.
mpq_class enumerate_range(const IncrementPmf& pmf, const InsertionPath& f, int n,
                          std::uint64_t budget = kEnumerationBudget);

/// Holding-time law of the traps.
struct HoldingLaw {
    enum class Kind { Exponential, Pareto, Deterministic };
    Kind kind = Kind::Exponential;
    double rate = 1.0;   ///< Exponential
    double shape = 1.0;  ///< Pareto alpha
    double scale = 1.0;  ///< Pareto minimum
    double period = 1.0; ///< Deterministic

    static HoldingLaw exponential(double rate);
    static HoldingLaw pareto(double shape, double scale);
    static HoldingLaw deterministic(double period);

    /// Deterministic holding violates the continuity hypothesis of the
    /// continuous-time comparison; it is admitted for exploration only.
    bool continuous() const { return kind != Kind::Deterministic; }
    double sample(Engine& eng) const;
    /// Jump count bound used to size the default window: the mean for
    /// Exponential, the sure bound t / minimum for Pareto and Deterministic.
    double jump_count_bound(double horizon) const;
    std::string describe() const;
    void validate() const;
};

/// Piecewise-constant particle path: start site plus (time, new site) jumps.
struct ParticlePath {
    Site start;
    std::vector<std::pair<double, Site>> jumps;

    static ParticlePath constant(Site at) { return ParticlePath{std::move(at), {}}; }
    int dim() const { return static_cast<int>(start.size()); }
    int extent() const;
    void validate() const;
};

/// Lines "time x_1 ... x_d"; the first line (time 0) gives the start.
ParticlePath read_particle_path(std::istream& in);
ParticlePath load_particle_file(const std::string& path);

struct TrapSimConfig {
    int dim = 1;
    int window = 1;  ///< sup-norm radius L of the initial Poisson field
    double intensity = 1.0;
    IncrementPmf pmf = simple_symmetric(1);
    HoldingLaw holding;
    double horizon = 0.0;
    ParticlePath particle = ParticlePath::constant(Site{0});
    std::uint64_t reps = 1;
    std::uint64_t seed = 0;
    int curve_points = 0;  ///< > 0: also tabulate survival on a time grid

    void validate() const;
};

/// 4 * (jump bound * support radius + particle extent), at least 1.
int default_window(const TrapSimConfig& cfg);

struct SurvivalEstimate {
    double estimate = 0.0;
    double stderr_of_mean = 0.0;
    std::uint64_t reps = 0;
    std::string method;
};

struct TrapComparison {
    SurvivalEstimate moving;    ///< S_t(X)
    SurvivalEstimate constant;  ///< S_t(0), same trap realizations
    double diff_stderr = 0.0;   ///< stderr of the paired difference
    double combined_stderr = 0.0;
    std::uint64_t truncation_events = 0;
    std::uint64_t tie_events = 0;
    bool window_below_default = false;
    bool within_hypotheses = true;
    std::vector<double> curve_times;
    std::vector<double> curve_moving;
    std::vector<double> curve_constant;

    /// S_t(X) <= S_t(0) + 3 * combined stderr.
    bool pascal_ok() const { return moving.estimate <= constant.estimate + 3.0 * combined_stderr; }
};

/// First time in [0, t] at which the trap path and the particle path share a
/// site (both right-continuous), or +inf. Equal jump times count as a tie.
struct PiecewisePath {
    std::vector<double> times;  ///< times[0] = 0, strictly increasing
    std::vector<Site> sites;
};
double first_meeting(const PiecewisePath& trap, const PiecewisePath& particle, double horizon,
                     std::uint64_t* ties = nullptr);

/// Direct simulation of the Poisson trap field, replayed against X and X = 0.
TrapComparison simulate_trap_field(const TrapSimConfig& cfg);

/// exp(-intensity * sum_y h(y)) with h(y) = P(single trap from y meets X by t),
/// each h estimated from cfg.reps traps per site, replayed against X and X = 0.
TrapComparison survival_via_identity(const TrapSimConfig& cfg);

struct CounterexampleReport {
    int n = 0;
    std::uint64_t reps = 0;
    double mean_ratio = 0.0;
    double stderr_of_mean = 0.0;
    bool all_even = true;
    std::optional<std::int64_t> odd_site;  ///< first odd site seen, if any
};

/// |R_n(Z - phi)| / |R_n(Z)| for SRW in d = 1 and phi alternating 0, 1.
CounterexampleReport counterexample_ratio(int n, std::uint64_t reps, std::uint64_t seed);

}  // namespace rangewalk
