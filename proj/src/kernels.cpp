#include "rangewalk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "rangewalk/errors.hpp"

namespace rangewalk {

namespace {

std::size_t checked_cells(int dim, int radius, std::size_t budget) {
    const std::size_t cells = window_cells(dim, radius);
    if (cells > budget)
        throw ResourceError("window of radius " + std::to_string(radius) + " in d=" + std::to_string(dim) +
                            " needs " + std::to_string(cells) + " cells, budget is " + std::to_string(budget));
    return cells;
}

template <class V>
V power(const V& base, int e) {
    V r(1);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

template <class A>
StepKernel<A> n_step_kernel(const IncrementPmf& pmf, int n, int min_radius, std::size_t cell_budget) {
    using V = typename A::value_type;
    if (n < -1) throw ValidationError("kernel step count must be >= -1");
    const int radius = std::max(min_radius, std::max(n, 0) * pmf.support_radius());
    checked_cells(pmf.dim(), radius, cell_budget);
    const auto w = make_step_weights<A>(pmf);

    Grid<V> cur(pmf.dim(), radius);
    if (n == -1) return StepKernel<A>(-1, std::move(cur), V(1));
    cur.at(origin(pmf.dim())) = V(1);
    Grid<V> next(pmf.dim(), radius);
    for (int k = 0; k < n; ++k) {
        convolve(cur, w, next);
        std::swap(cur, next);
    }
    return StepKernel<A>(n, std::move(cur), power(w.unit, n));
}

template <class A>
std::vector<StepKernel<A>> kernel_table(const IncrementPmf& pmf, int nmax, int min_radius, std::size_t cell_budget) {
    using V = typename A::value_type;
    if (nmax < -1) throw ValidationError("kernel table needs nmax >= -1");
    const int radius = std::max(min_radius, std::max(nmax, 0) * pmf.support_radius());
    const std::size_t cells = checked_cells(pmf.dim(), radius, cell_budget);
    if (cells * static_cast<std::size_t>(nmax + 2) > cell_budget)
        throw ResourceError("kernel table of " + std::to_string(nmax + 2) + " kernels exceeds the cell budget");
    const auto w = make_step_weights<A>(pmf);

    std::vector<StepKernel<A>> table;
    table.reserve(static_cast<std::size_t>(nmax + 2));
    table.emplace_back(-1, Grid<V>(pmf.dim(), radius), V(1));
    if (nmax < 0) return table;
    Grid<V> g(pmf.dim(), radius);
    g.at(origin(pmf.dim())) = V(1);
    V scale(1);
    table.emplace_back(0, g, scale);
    for (int n = 1; n <= nmax; ++n) {
        Grid<V> next(pmf.dim(), radius);
        convolve(table.back().grid(), w, next);
        scale *= w.unit;
        table.emplace_back(n, std::move(next), scale);
    }
    return table;
}

mpq_class paired_kernel(const IncrementPmf& pmf, int n, const Site& x) {
    if (n < -1) throw ValidationError("paired kernel needs n >= -1");
    auto table = kernel_table<ExactArith>(pmf, n + 1);
    return table[static_cast<std::size_t>(n + 1)](x) + table[static_cast<std::size_t>(n + 2)](x);
}

namespace {

template <class A>
Slack make_slack(const typename A::scalar_type& s) {
    return Slack{A::to_double(s), A::to_string(s)};
}

// Tracks the minimum of a slack over a sweep; ties keep the earliest witness.
template <class A>
struct MinTracker {
    std::optional<typename A::scalar_type> best;
    int n = 0;
    std::optional<Site> x;
    std::optional<int> first_failure;

    void offer(const typename A::scalar_type& s, int at_n, const std::optional<Site>& at_x) {
        if (!A::nonneg(s) && !first_failure) first_failure = at_n;
        if (!best || s < *best) {
            best = s;
            n = at_n;
            x = at_x;
        }
    }

    ConditionCheck finish(std::string name) const {
        ConditionCheck c;
        c.name = std::move(name);
        c.holds = !first_failure.has_value();
        c.min_slack = best ? make_slack<A>(*best) : Slack{0.0, "0"};
        c.witness_n = n;
        c.witness_x = x;
        c.first_failure_n = first_failure;
        return c;
    }
};

// Streams kernels p_{-1}, p_0, ... on a fixed window, keeping a small ring.
template <class A>
class KernelStream {
public:
    using V = typename A::value_type;

    KernelStream(const IncrementPmf& pmf, int radius)
        : w_(make_step_weights<A>(pmf)), origin_(origin(pmf.dim())) {
        Grid<V> zero(pmf.dim(), radius);
        ring_.push_back(StepKernel<A>(-1, zero, V(1)));
        zero.at(origin_) = V(1);
        ring_.push_back(StepKernel<A>(0, std::move(zero), V(1)));
    }

    // Kernel p_n for n in [front, front + ring size).
    const StepKernel<A>& get(int n) {
        while (ring_.back().n() < n) {
            const auto& last = ring_.back();
            Grid<V> next(last.grid().dim(), last.grid().radius());
            convolve(last.grid(), w_, next);
            V scale = last.scale() * w_.unit;
            ring_.push_back(StepKernel<A>(last.n() + 1, std::move(next), std::move(scale)));
            if (ring_.size() > 4) ring_.pop_front();
        }
        for (const auto& k : ring_)
            if (k.n() == n) return k;
        throw InvariantError("kernel stream asked to rewind");
    }

    const V& unit() const { return w_.unit; }
    const Site& zero() const { return origin_; }

private:
    StepWeights<V> w_;
    Site origin_;
    std::deque<StepKernel<A>> ring_;  // references stay valid across push_back
};

template <class A>
ConditionReport mono_impl(const IncrementPmf& pmf, int horizon, int radius) {
    using V = typename A::value_type;
    KernelStream<A> ks(pmf, radius);
    const V& D = ks.unit();
    const Site& o = ks.zero();

    // p_{n,n+1} as numerators over D^{n+1}: D * num_n + num_{n+1}.
    auto pair_at_origin = [&](int n) {
        const auto& a = ks.get(n);
        const auto& b = ks.get(n + 1);
        return A::ratio(D * a.numerator(o) + b.numerator(o), b.scale());
    };

    MinTracker<A> temporal, pointwise;
    for (int n = -1; n <= horizon; ++n) {
        temporal.offer(pair_at_origin(n) - pair_at_origin(n + 1), n, std::nullopt);

        const auto& a = ks.get(n);
        const auto& b = ks.get(n + 1);
        const auto& ga = a.grid();
        const auto& gb = b.grid();
        const V top = D * ga.at(o) + gb.at(o);
        std::optional<V> worst;
        std::size_t worst_idx = 0;
        for (std::size_t i = 0; i < gb.size(); ++i) {
            V diff = top - (D * ga[i] + gb[i]);
            if (!worst || diff < *worst) {
                if (gb.site(i) == o) continue;
                worst = std::move(diff);
                worst_idx = i;
            }
        }
        if (worst) pointwise.offer(A::ratio(*worst, b.scale()), n, gb.site(worst_idx));
    }

    ConditionReport r;
    r.family = "mono";
    r.arithmetic = A::name;
    r.horizon = horizon;
    r.temporal = temporal.finish("p_{n,n+1}(0) >= p_{n+1,n+2}(0)");
    r.pointwise = pointwise.finish("p_{n,n+1}(0) >= p_{n,n+1}(x)");
    return r;
}

template <class A>
ConditionReport moreau_impl(const IncrementPmf& pmf, int horizon, int radius) {
    using V = typename A::value_type;
    KernelStream<A> ks(pmf, radius);
    const Site& o = ks.zero();

    MinTracker<A> temporal, pointwise;
    for (int n = 0; n <= horizon; ++n) {
        const auto& a = ks.get(n);
        const auto& b = ks.get(n + 1);
        temporal.offer(a(o) - b(o), n, std::nullopt);

        const auto& ga = a.grid();
        const V top = ga.at(o);
        std::optional<V> worst;
        std::size_t worst_idx = 0;
        for (std::size_t i = 0; i < ga.size(); ++i) {
            V diff = top - ga[i];
            if (!worst || diff < *worst) {
                if (ga.site(i) == o) continue;
                worst = std::move(diff);
                worst_idx = i;
            }
        }
        if (worst) pointwise.offer(A::ratio(*worst, a.scale()), n, ga.site(worst_idx));
    }

    ConditionReport r;
    r.family = "moreau";
    r.arithmetic = A::name;
    r.horizon = horizon;
    r.temporal = temporal.finish("p_n(0) >= p_{n+1}(0)");
    r.pointwise = pointwise.finish("p_n(0) >= p_n(x)");
    return r;
}

}  // namespace

ConditionReport check_mono_conditions(const IncrementPmf& pmf, int horizon, ArithMode mode, std::size_t cell_budget) {
    if (horizon < 0) throw ValidationError("horizon must be >= 0");
    const int radius = std::max(1, (horizon + 2) * pmf.support_radius());
    const std::size_t cells = checked_cells(pmf.dim(), radius, cell_budget);
    return use_exact(mode, pmf.dim(), cells) ? mono_impl<ExactArith>(pmf, horizon, radius)
                                             : mono_impl<FloatArith>(pmf, horizon, radius);
}

ConditionReport check_moreau_conditions(const IncrementPmf& pmf, int horizon, ArithMode mode,
                                        std::size_t cell_budget) {
    if (horizon < 0) throw ValidationError("horizon must be >= 0");
    const int radius = std::max(1, (horizon + 1) * pmf.support_radius());
    const std::size_t cells = checked_cells(pmf.dim(), radius, cell_budget);
    return use_exact(mode, pmf.dim(), cells) ? moreau_impl<ExactArith>(pmf, horizon, radius)
                                             : moreau_impl<FloatArith>(pmf, horizon, radius);
}

TailSum tail_sum(const IncrementPmf& pmf, int k, int z_lo, int z_hi) {
    if (pmf.dim() != 1) throw DimensionError("tail sums are defined for d = 1 only");
    if (k < 0) throw ValidationError("tail sum index k must be >= 0");
    if (z_lo > z_hi) throw ValidationError("empty z range");
    TailSum t;
    t.k = k;
    t.z_lo = z_lo;
    t.z_hi = z_hi;
    for (int z = z_lo; z <= z_hi; ++z) {
        mpq_class s = 0;
        for (const auto& a : pmf.atoms())
            if (std::abs(a.offset[0] + z) >= k) s += a.weight;
        t.values.push_back(s);
    }
    const int from = std::max(z_lo, k == 1 ? 1 : 0);
    for (int z = from; z < z_hi; ++z) {
        if (t(z + 1) < t(z)) {
            t.monotone = false;
            t.first_decrease = z;
            break;
        }
    }
    return t;
}

namespace {
std::mutex fftw_planner_mutex;  // FFTW planning is not thread-safe
}

Grid<double> torus_kernel(const IncrementPmf& pmf, int n, int torus_size) {
    if (n < 0) throw ValidationError("torus kernel needs n >= 0");
    if (torus_size < 1 || torus_size % 2 == 0) throw ValidationError("torus size must be odd");
    const int d = pmf.dim();
    const int L = torus_size;
    const std::size_t total = window_cells(d, L / 2);
    checked_cells(d, L / 2, kDefaultCellBudget);

    // Characteristic function at frequencies 2 pi m / L, m stored in FFT order.
    std::vector<std::complex<double>> buf(total);
    std::vector<int> m(static_cast<std::size_t>(d), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int c = d - 1; c >= 0; --c) {
            m[static_cast<std::size_t>(c)] = static_cast<int>(rem % static_cast<std::size_t>(L));
            rem /= static_cast<std::size_t>(L);
        }
        double psi = 0.0;
        for (const auto& a : pmf.atoms()) {
            double phase = 0.0;
            for (int c = 0; c < d; ++c)
                phase += static_cast<double>(m[static_cast<std::size_t>(c)]) * a.offset[static_cast<std::size_t>(c)];
            psi += a.weight.get_d() * std::cos(2.0 * std::numbers::pi * phase / L);
        }
        buf[idx] = std::pow(psi, n);
    }

    std::vector<int> dims(static_cast<std::size_t>(d), L);
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        plan = fftw_plan_dft(d, dims.data(), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }

    Grid<double> out(d, L / 2);
    const double norm = static_cast<double>(total);
    for (std::size_t i = 0; i < out.size(); ++i) {
        Site x = out.site(i);
        std::size_t idx = 0;
        for (int c = 0; c < d; ++c) {
            const int wrapped = ((x[static_cast<std::size_t>(c)] % L) + L) % L;
            idx = idx * static_cast<std::size_t>(L) + static_cast<std::size_t>(wrapped);
        }
        out[i] = buf[idx].real() / norm;
    }
    return out;
}

double fourier_crosscheck(const IncrementPmf& pmf, int n, int torus_size) {
    if (n < 0) throw ValidationError("fourier cross-check needs n >= 0");
    if (torus_size <= 2 * n * pmf.support_radius() + 1)
        throw ValidationError("torus size " + std::to_string(torus_size) + " aliases a " + std::to_string(n) +
                              "-step kernel; need L > " + std::to_string(2 * n * pmf.support_radius() + 1));
    const Grid<double> torus = torus_kernel(pmf, n, torus_size);
    const auto exact = n_step_kernel<ExactArith>(pmf, n);
    double err = 0.0;
    for (std::size_t i = 0; i < torus.size(); ++i)
        err = std::max(err, std::abs(torus[i] - exact(torus.site(i)).get_d()));
    return err;
}

template StepKernel<ExactArith> n_step_kernel<ExactArith>(const IncrementPmf&, int, int, std::size_t);
template StepKernel<FloatArith> n_step_kernel<FloatArith>(const IncrementPmf&, int, int, std::size_t);
template std::vector<StepKernel<ExactArith>> kernel_table<ExactArith>(const IncrementPmf&, int, int, std::size_t);
template std::vector<StepKernel<FloatArith>> kernel_table<FloatArith>(const IncrementPmf&, int, int, std::size_t);

}  // namespace rangewalk
