#include "rangewalk/engine.hpp"

#include <algorithm>
#include <cmath>

#include "rangewalk/errors.hpp"

namespace rangewalk {

std::string to_string(TrapModel m) { return m == TrapModel::TwoTrap ? "two-trap" : "single-trap"; }

int engine_window(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon) {
    const TrapTrajectory held = phi.held_to(static_cast<std::size_t>(horizon) + 2);
    int extent = 0;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(horizon) + 1; ++i) extent = std::max(extent, sup_norm(held[i]));
    return horizon * pmf.support_radius() + extent + 1;
}

namespace {

std::vector<Site> trap_sites(const TrapTrajectory& phi, int n, TrapModel model) {
    const auto i = static_cast<std::size_t>(n);
    std::vector<Site> s{phi[i]};
    if (model == TrapModel::TwoTrap && phi[i + 1] != phi[i]) s.push_back(phi[i + 1]);
    return s;
}

bool within_unit(const mpz_class& v, const mpz_class& scale) { return sgn(v) >= 0 && v <= scale; }
bool within_unit(double v, double scale) {
    return v >= -FloatArith::tolerance && v <= scale * (1.0 + FloatArith::tolerance);
}

bool balanced(const mpz_class& a, const mpz_class& b) { return a == b; }
bool balanced(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

template <class A>
typename A::value_type to_value(int k) {
    return typename A::value_type(k);
}

}  // namespace

template <class A>
EngineRun<A> evolve_survival(const IncrementPmf& pmf, const TrapTrajectory& phi_in, int horizon,
                             const EngineOptions& opts) {
    using V = typename A::value_type;
    if (horizon < 0) throw ValidationError("horizon must be >= 0");
    if (phi_in.dim() != pmf.dim()) throw ValidationError("trajectory and pmf dimensions differ");

    const TrapTrajectory phi = phi_in.held_to(static_cast<std::size_t>(horizon) + 2);
    const int R = std::max(opts.min_window, engine_window(pmf, phi, horizon));
    if (window_cells(pmf.dim(), R) > opts.cell_budget)
        throw ResourceError("engine window radius " + std::to_string(R) + " exceeds the cell budget");

    const auto w = make_step_weights<A>(pmf);
    EngineRun<A> run;
    run.model = opts.model;
    run.horizon = horizon;
    run.window = R;

    Grid<V> cur(pmf.dim(), R);
    V scale(1);
    {
        KilledMass<A> km{0, {}, {}, scale};
        for (const auto& s : trap_sites(phi, 0, opts.model)) {
            cur.at(s) = scale;
            km.sites.push_back(s);
            km.mass.push_back(scale);
        }
        run.hit_numerators.push_back(to_value<A>(static_cast<int>(km.sites.size())));
        run.killed.push_back(std::move(km));
    }
    run.scales.push_back(scale);
    if (opts.keep_fields) run.fields.push_back({0, cur, scale});

    Grid<V> next(pmf.dim(), R);
    for (int n = 0; n < horizon; ++n) {
        // Off the trap set v_{n+1} is the plain convolution of v_n: the
        // p(x - phi_{n+1}) term is the y = phi_{n+1} summand since v_n = 1 there.
        convolve(cur, w, next);
        const V before = grid_total(cur);
        const V spread = grid_total(next);
        if (!balanced(spread, V(before * w.unit)))
            throw InvariantError("mass leaked out of the engine window at step " + std::to_string(n + 1));

        const V next_scale = scale * w.unit;
        KilledMass<A> km{n + 1, {}, {}, next_scale};
        V killed_total(0);
        for (const auto& s : trap_sites(phi, n + 1, opts.model)) {
            V& cell = next.at(s);
            V h = next_scale - cell;
            if (!within_unit(h, next_scale))
                throw InvariantError("negative killed mass at " + to_string(s) + ", time " + std::to_string(n + 1));
            killed_total += h;
            km.sites.push_back(s);
            km.mass.push_back(std::move(h));
            cell = next_scale;
        }
        for (std::size_t i = 0; i < next.size(); ++i)
            if (!within_unit(next[i], next_scale))
                throw InvariantError("v left [0,1] at " + to_string(next.site(i)) + ", time " + std::to_string(n + 1));

        const V total = grid_total(next);
        if (!balanced(total, V(spread + killed_total)))
            throw InvariantError("killed mass does not balance the hit increment at time " + std::to_string(n + 1));

        run.hit_numerators.push_back(total);
        run.killed.push_back(std::move(km));
        run.scales.push_back(next_scale);
        std::swap(cur, next);
        scale = next_scale;
        if (opts.keep_fields) run.fields.push_back({n + 1, cur, scale});
    }
    if (!opts.keep_fields) run.fields.push_back({horizon, std::move(cur), scale});
    return run;
}

template <class A>
HitSeries<A> hit_mass(const EngineRun<A>& run) {
    HitSeries<A> h;
    h.model = run.model;
    h.values.push_back(typename A::scalar_type(0));
    for (std::size_t n = 0; n < run.hit_numerators.size(); ++n)
        h.values.push_back(A::ratio(run.hit_numerators[n], run.scales[n]));
    return h;
}

template <class A>
PascalReport<A> verify_pascal(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon,
                              std::size_t cell_budget) {
    PascalReport<A> rep;
    rep.walk_class = validate_class(pmf);
    rep.unproved_regime = !rep.walk_class.proved();
    EngineOptions opts;
    opts.keep_fields = false;
    opts.cell_budget = cell_budget;
    const auto wphi = hit_mass(evolve_survival<A>(pmf, phi, horizon, opts));
    const auto wzero = hit_mass(evolve_survival<A>(pmf, TrapTrajectory::zero(pmf.dim(), 1), horizon, opts));
    for (int n = 0; n <= horizon; ++n) {
        PascalRow<A> row;
        row.n = n;
        row.w_phi = wphi.at(n);
        row.w_zero = wzero.at(n);
        row.margin = row.w_phi - row.w_zero;
        row.ok = A::nonneg(row.margin);
        rep.pass = rep.pass && row.ok;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

template <class A>
DominationReport<A> check_sym_domination(const SurvivalField<A>& vphi, const SurvivalField<A>& v0) {
    using V = typename A::value_type;
    if (vphi.v.dim() != 1 || v0.v.dim() != 1) throw DimensionError("symmetric domination is defined for d = 1 only");
    if (vphi.n != v0.n) throw ValidationError("domination check needs fields at the same time");
    if (vphi.v.radius() != v0.v.radius() || vphi.scale != v0.scale)
        throw ValidationError("domination check needs fields on a common window and scale");

    const int R = vphi.v.radius();
    const int side = vphi.v.side();
    auto prefix = [side](const Grid<V>& g) {
        std::vector<V> p(static_cast<std::size_t>(side) + 1, V(0));
        for (int i = 0; i < side; ++i) p[static_cast<std::size_t>(i) + 1] = p[static_cast<std::size_t>(i)] + g[static_cast<std::size_t>(i)];
        return p;
    };
    const auto pphi = prefix(vphi.v);
    const auto p0 = prefix(v0.v);
    auto range_sum = [R](const std::vector<V>& p, int a, int b) -> V {
        a = std::max(a, -R);
        b = std::min(b, R);
        if (a > b) return V(0);
        return p[static_cast<std::size_t>(b + R + 1)] - p[static_cast<std::size_t>(a + R)];
    };
    const V& tphi = pphi.back();
    const V& t0 = p0.back();

    // Both fields vanish outside [-R, R]. For k > R the zero-field tail is 0,
    // and for |x0| > 2R with k <= R the window [x0-k+1, x0+k-1] misses the
    // support of vphi, so its tail is the full total, already compared at
    // k = 0. The finite ranges below therefore cover every (k, x0).
    DominationReport<A> rep;
    rep.n = vphi.n;
    rep.k_max = R;
    rep.x0_max = 2 * R;
    std::optional<V> best;
    for (int k = 0; k <= rep.k_max; ++k) {
        const V tail0 = k == 0 ? t0 : V(t0 - range_sum(p0, -k + 1, k - 1));
        for (int x0 = -rep.x0_max; x0 <= rep.x0_max; ++x0) {
            const V tailphi = k == 0 ? tphi : V(tphi - range_sum(pphi, x0 - k + 1, x0 + k - 1));
            V slack = tailphi - tail0;
            if (!best || slack < *best) {
                best = std::move(slack);
                rep.witness_k = k;
                rep.witness_x0 = x0;
            }
        }
    }
    rep.min_slack = A::ratio(*best, vphi.scale);
    rep.pass = A::nonneg(rep.min_slack);
    return rep;
}

template <class A>
std::vector<DominationReport<A>> domination_chain(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon) {
    if (pmf.dim() != 1) throw DimensionError("symmetric domination is defined for d = 1 only");
    const int R = engine_window(pmf, phi, horizon);
    EngineOptions opts;
    opts.min_window = R;
    const auto rphi = evolve_survival<A>(pmf, phi, horizon, opts);
    const auto rzero = evolve_survival<A>(pmf, TrapTrajectory::zero(1, 1), horizon, opts);
    std::vector<DominationReport<A>> out;
    for (int n = 0; n <= horizon; ++n)
        out.push_back(check_sym_domination<A>(rphi.fields[static_cast<std::size_t>(n)], rzero.fields[static_cast<std::size_t>(n)]));
    return out;
}

template <class A>
std::vector<IdentityRow<A>> verify_decomposition(const IncrementPmf& pmf, const TrapTrajectory& phi_in, int horizon) {
    using V = typename A::value_type;
    using S = typename A::scalar_type;
    EngineOptions opts;
    opts.keep_fields = false;
    const auto run = evolve_survival<A>(pmf, phi_in, horizon, opts);
    const TrapTrajectory phi = phi_in.held_to(static_cast<std::size_t>(horizon) + 2);
    const auto table = kernel_table<A>(pmf, horizon);
    const V D = make_step_weights<A>(pmf).unit;
    auto kernel = [&](int m) -> const StepKernel<A>& { return table[static_cast<std::size_t>(m + 1)]; };

    std::vector<IdentityRow<A>> rows;
    for (int n = 0; n <= horizon; ++n) {
        const Site& target_site = phi[static_cast<std::size_t>(n)];
        // h_i over D^i times (D p_{n-1-i} + p_{n-i}) over D^{n-i}: everything over D^n.
        V acc(0);
        for (int i = 0; i <= n; ++i) {
            const auto& km = run.killed[static_cast<std::size_t>(i)];
            for (std::size_t j = 0; j < km.sites.size(); ++j) {
                const Site x = sub(target_site, km.sites[j]);
                const V pair = D * kernel(n - 1 - i).numerator(x) + kernel(n - i).numerator(x);
                acc += km.mass[j] * pair;
            }
        }
        IdentityRow<A> row;
        row.n = n;
        row.value = A::ratio(acc, run.scales[static_cast<std::size_t>(n)]);
        row.target = S(n == 0 ? 1 : 2);
        row.residual = row.value - row.target;
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class A>
RecursionReport<A> verify_w_recursion(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon) {
    using S = typename A::scalar_type;
    RecursionReport<A> rep;
    rep.conditions_hold = check_mono_conditions(pmf, horizon).holds();

    EngineOptions opts;
    opts.keep_fields = false;
    const auto wphi = hit_mass(evolve_survival<A>(pmf, phi, horizon, opts));
    const auto wzero = hit_mass(evolve_survival<A>(pmf, TrapTrajectory::zero(pmf.dim(), 1), horizon, opts));
    const auto table = kernel_table<A>(pmf, horizon);
    const Site o = origin(pmf.dim());
    // pair0[m + 1] = p_{m,m+1}(0) for -1 <= m <= N - 1.
    std::vector<S> pair0;
    for (int m = -1; m + 1 <= horizon; ++m)
        pair0.push_back(table[static_cast<std::size_t>(m + 1)](o) + table[static_cast<std::size_t>(m + 2)](o));
    auto pair_at = [&](int m) -> const S& { return pair0.at(static_cast<std::size_t>(m + 1)); };

    for (int n = 0; n <= horizon; ++n) {
        RecursionRow<A> row;
        row.n = n;
        row.lhs = wphi.at(n) - wzero.at(n);
        row.rhs = S(0);
        for (int i = 0; i < n; ++i)
            row.rhs += (pair_at(n - i - 2) - pair_at(n - i - 1)) * (wphi.at(i) - wzero.at(i));
        row.slack = row.lhs - row.rhs;
        rep.pass = rep.pass && A::nonneg(row.slack);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

template <class A>
HitSeries<A> moreau_engine(const IncrementPmf& pmf, const TrapTrajectory& phi, int horizon) {
    EngineOptions opts;
    opts.model = TrapModel::SingleTrap;
    opts.keep_fields = false;
    return hit_mass(evolve_survival<A>(pmf, phi, horizon, opts));
}

template <class A>
typename A::scalar_type range_via_hits(const IncrementPmf& pmf, const InsertionPath& f, int n) {
    if (n < 0) throw ValidationError("range horizon must be >= 0");
    if (f.dim() != pmf.dim()) throw ValidationError("insertion path and pmf dimensions differ");
    const TrapTrajectory phi = contract(f.prefix(static_cast<std::size_t>(n)));
    const int m = n / 2;
    EngineOptions opts;
    opts.keep_fields = false;
    return hit_mass(evolve_survival<A>(pmf, phi, m, opts)).at(m);
}

#define RANGEWALK_INSTANTIATE(A)                                                                                   \
    template EngineRun<A> evolve_survival<A>(const IncrementPmf&, const TrapTrajectory&, int, const EngineOptions&); \
    template HitSeries<A> hit_mass<A>(const EngineRun<A>&);                                                         \
    template PascalReport<A> verify_pascal<A>(const IncrementPmf&, const TrapTrajectory&, int, std::size_t);        \
    template DominationReport<A> check_sym_domination<A>(const SurvivalField<A>&, const SurvivalField<A>&);         \
    template std::vector<DominationReport<A>> domination_chain<A>(const IncrementPmf&, const TrapTrajectory&, int); \
    template std::vector<IdentityRow<A>> verify_decomposition<A>(const IncrementPmf&, const TrapTrajectory&, int);  \
    template RecursionReport<A> verify_w_recursion<A>(const IncrementPmf&, const TrapTrajectory&, int);             \
    template HitSeries<A> moreau_engine<A>(const IncrementPmf&, const TrapTrajectory&, int);                        \
    template typename A::scalar_type range_via_hits<A>(const IncrementPmf&, const InsertionPath&, int);

RANGEWALK_INSTANTIATE(ExactArith)
RANGEWALK_INSTANTIATE(FloatArith)

#undef RANGEWALK_INSTANTIATE

}  // namespace rangewalk
