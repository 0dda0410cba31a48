#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rangewalk/arith.hpp"
#include "rangewalk/convolve.hpp"
#include "rangewalk/lattice.hpp"
#include "rangewalk/pmf.hpp"

namespace rangewalk {

/// Default ceiling on cells in a single kernel or engine window.
inline constexpr std::size_t kDefaultCellBudget = 40'000'000;

/// n-step transition kernel p_n. n = -1 is the zero kernel.
/// Values are numerators over scale() (D^n exact, 1 float).
template <class A>
class StepKernel {
public:
    using value_type = typename A::value_type;
    using scalar_type = typename A::scalar_type;

    StepKernel(int n, Grid<value_type> values, value_type scale)
        : n_(n), values_(std::move(values)), scale_(std::move(scale)) {}

    int n() const { return n_; }
    const Grid<value_type>& grid() const { return values_; }
    const value_type& scale() const { return scale_; }

    value_type numerator(const Site& x) const { return values_.value_or_zero(x); }
    scalar_type operator()(const Site& x) const { return A::ratio(numerator(x), scale_); }
    scalar_type total() const { return A::ratio(grid_total(values_), scale_); }

private:
    int n_;
    Grid<value_type> values_;
    value_type scale_;
};

/// Exact iterated convolution. The grid radius is max(n, 0) * support_radius
/// unless a larger radius is requested.
template <class A>
StepKernel<A> n_step_kernel(const IncrementPmf& pmf, int n, int min_radius = 0,
                            std::size_t cell_budget = kDefaultCellBudget);

/// p_{-1}, p_0, ..., p_{nmax} on one common window; element k holds p_{k-1}.
template <class A>
std::vector<StepKernel<A>> kernel_table(const IncrementPmf& pmf, int nmax, int min_radius = 0,
                                        std::size_t cell_budget = kDefaultCellBudget);

/// p_n(x) + p_{n+1}(x), exactly.
mpq_class paired_kernel(const IncrementPmf& pmf, int n, const Site& x);

struct Slack {
    double approx = 0.0;
    std::string text;  ///< reduced rational in exact mode, %.17g in float mode
};

struct ConditionCheck {
    std::string name;
    bool holds = true;
    Slack min_slack;
    int witness_n = 0;
    std::optional<Site> witness_x;  ///< only for the pointwise condition
    std::optional<int> first_failure_n;
};

/// Outcome of checking a pair of monotonicity conditions over -1 <= n <= N
/// (or 0 <= n <= N for the single-kernel variant).
struct ConditionReport {
    std::string family;  ///< "mono" or "moreau"
    std::string arithmetic;
    int horizon = 0;
    ConditionCheck temporal;   ///< the origin value decreases in n
    ConditionCheck pointwise;  ///< the origin dominates every other site
    bool holds() const { return temporal.holds && pointwise.holds; }
};

/// p_{n,n+1}(0) >= p_{n+1,n+2}(0) and p_{n,n+1}(0) >= p_{n,n+1}(x), -1 <= n <= N.
ConditionReport check_mono_conditions(const IncrementPmf& pmf, int horizon, ArithMode mode = ArithMode::Auto,
                                      std::size_t cell_budget = kDefaultCellBudget);

/// p_n(0) >= p_{n+1}(0) and p_n(0) >= p_n(x), 0 <= n <= N.
ConditionReport check_moreau_conditions(const IncrementPmf& pmf, int horizon, ArithMode mode = ArithMode::Auto,
                                        std::size_t cell_budget = kDefaultCellBudget);

/// F_k(z) = sum over |y + z| >= k of p(y), tabulated for z in [z_lo, z_hi]. d = 1 only.
struct TailSum {
    int k = 0;
    int z_lo = 0;
    int z_hi = 0;
    std::vector<mpq_class> values;  ///< values[z - z_lo]
    /// Whether F_k is nondecreasing on the claimed range (z >= 1 for k = 1,
    /// z >= 0 otherwise) intersected with [z_lo, z_hi].
    bool monotone = true;
    std::optional<int> first_decrease;  ///< z with F_k(z+1) < F_k(z)

    const mpq_class& operator()(int z) const { return values.at(static_cast<std::size_t>(z - z_lo)); }
};

TailSum tail_sum(const IncrementPmf& pmf, int k, int z_lo, int z_hi);

/// p_n on the discrete torus (Z/L)^d from powers of the characteristic
/// function, indexed like a Grid of radius L/2 (L odd).
Grid<double> torus_kernel(const IncrementPmf& pmf, int n, int torus_size);

/// Max |torus p_n(x) - exact p_n(x)| over the torus. Requires L > 2 n r + 1.
double fourier_crosscheck(const IncrementPmf& pmf, int n, int torus_size);

}  // namespace rangewalk
