#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rangewalk/arith.hpp"
#include "rangewalk/kernels.hpp"
#include "rangewalk/lattice.hpp"
#include "rangewalk/perturb.hpp"
#include "rangewalk/pmf.hpp"

namespace rangewalk {

/// Two-trap field {phi_n, phi_{n+1}} at time n, or the single-trap field {phi_n}.
enum class TrapModel { TwoTrap, SingleTrap };

std::string to_string(TrapModel m);

/// v_n(x): expected killed particles by time n, one particle per start site,
/// tracked at endpoint x. Values are numerators over scale.
template <class A>
struct SurvivalField {
    using value_type = typename A::value_type;
    int n = 0;
    Grid<value_type> v;
    value_type scale;

    typename A::scalar_type operator()(const Site& x) const { return A::ratio(v.value_or_zero(x), scale); }
};

/// Mass first killed at time `time`, per trap site.
template <class A>
struct KilledMass {
    int time = 0;
    std::vector<Site> sites;
    std::vector<typename A::value_type> mass;  ///< numerators over scale
    typename A::value_type scale;
};

struct EngineOptions {
    TrapModel model = TrapModel::TwoTrap;
    bool keep_fields = true;
    int min_window = 0;
    std::size_t cell_budget = kDefaultCellBudget;
};

template <class A>
struct EngineRun {
    using value_type = typename A::value_type;
    TrapModel model = TrapModel::TwoTrap;
    int horizon = 0;
    int window = 0;
    std::vector<SurvivalField<A>> fields;  ///< all n when kept, else only the last
    std::vector<value_type> hit_numerators;  ///< sum_x v_n(x), over scales[n]
    std::vector<value_type> scales;
    std::vector<KilledMass<A>> killed;
};

/// Window radius N * r + extent(phi_0..phi_{N+1}) + 1; v vanishes beyond it.
int engine_window(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon);

/// Runs the killed-particle recursion up to time N. The trajectory is held at
/// its last site if shorter than the horizon needs. Throws InvariantError if a
/// value leaves [0, 1], mass leaks out of the window, or killed mass does not
/// balance the hit increment.
template <class A>
EngineRun<A> evolve_survival(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon,
                             const EngineOptions& opts = {});

/// Cumulative killed mass W(-1) = 0, W(0), ..., W(N).
template <class A>
struct HitSeries {
    TrapModel model = TrapModel::TwoTrap;
    std::vector<typename A::scalar_type> values;  ///< values[n + 1] = W(n)

    const typename A::scalar_type& at(int n) const { return values.at(static_cast<std::size_t>(n + 1)); }
    int horizon() const { return static_cast<int>(values.size()) - 2; }
};

template <class A>
HitSeries<A> hit_mass(const EngineRun<A>& run);

template <class A>
struct PascalRow {
    int n = 0;
    typename A::scalar_type w_phi, w_zero, margin;
    bool ok = true;
};

template <class A>
struct PascalReport {
    WalkClass walk_class;
    bool unproved_regime = false;  ///< pmf lies outside the three proved classes
    std::vector<PascalRow<A>> rows;
    bool pass = true;
};

/// margin(n) = W~_phi(n) - W~_0(n), 0 <= n <= N.
template <class A>
PascalReport<A> verify_pascal(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon,
                              std::size_t cell_budget = kDefaultCellBudget);

template <class A>
struct DominationReport {
    int n = 0;
    bool pass = true;
    typename A::scalar_type min_slack;
    int witness_k = 0;
    int witness_x0 = 0;
    int k_max = 0;
    int x0_max = 0;
};

/// Checks sum_{|x|>=k} v0(x) <= sum_{|x|>=k} vphi(x0 + x) for 0 <= k <= R and
/// |x0| <= 2R, R the common window radius. d = 1 only.
template <class A>
DominationReport<A> check_sym_domination(const SurvivalField<A>& vphi, const SurvivalField<A>& v0);

/// Domination at every n <= N for phi against the constant trajectory.
template <class A>
std::vector<DominationReport<A>> domination_chain(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon);

template <class A>
struct IdentityRow {
    int n = 0;
    typename A::scalar_type value, target, residual;
};

/// sum_i sum_s h_i(s) (p_{n-1-i} + p_{n-i})(phi_n - s) against its target:
/// 2 for n >= 1, and 1 for n = 0 where only the Z_n = phi_n half exists.
template <class A>
std::vector<IdentityRow<A>> verify_decomposition(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon);

template <class A>
struct RecursionRow {
    int n = 0;
    typename A::scalar_type lhs, rhs, slack;
};

template <class A>
struct RecursionReport {
    bool conditions_hold = true;  ///< false means the unproved regime
    std::vector<RecursionRow<A>> rows;
    bool pass = true;
};

/// Slack of W~_phi(n) - W~_0(n) >= sum_{i<n} (p_{n-i-2,n-i-1}(0) - p_{n-i-1,n-i}(0)) (W~_phi(i) - W~_0(i)).
template <class A>
RecursionReport<A> verify_w_recursion(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon);

/// Single-trap hit series W_phi.
template <class A>
HitSeries<A> moreau_engine(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon);

/// E|R_n(Zbar + f)| as the hit mass of the contracted two-trap problem at
/// time floor(n/2). f must have at least n + 1 entries.
template <class A>
typename A::scalar_type range_via_hits(const IncrementPmf& pmf, const InsertionPath& f, int n);

}  // namespace rangewalk
