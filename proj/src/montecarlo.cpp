#include "rangewalk/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "rangewalk/errors.hpp"

namespace rangewalk {

void Moments::add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void Moments::merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
        *this = o;
        return;
    }
    const double n1 = static_cast<double>(count), n2 = static_cast<double>(o.count);
    const double delta = o.mean - mean;
    const double n = n1 + n2;
    mean += delta * n2 / n;
    m2 += o.m2 + delta * delta * n1 * n2 / n;
    count += o.count;
}

double Moments::stderr_of_mean() const {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

Moments reduce_samples(const std::vector<double>& samples) {
    constexpr std::size_t block = 1024;
    Moments total;
    for (std::size_t b = 0; b < samples.size(); b += block) {
        Moments m;
        for (std::size_t i = b; i < std::min(samples.size(), b + block); ++i) m.add(samples[i]);
        total.merge(m);
    }
    return total;
}

namespace {

void check_path_length(const InsertionPath& f, int n, const IncrementPmf& pmf) {
    if (n < 0) throw ValidationError("range horizon must be >= 0");
    if (f.size() < static_cast<std::size_t>(n) + 1)
        throw ValidationError("insertion path has " + std::to_string(f.size()) + " entries, horizon needs " +
                              std::to_string(n + 1));
    if (f.dim() != pmf.dim()) throw ValidationError("insertion path and pmf dimensions differ");
}

std::size_t count_distinct(std::vector<Site>& pts) {
    std::sort(pts.begin(), pts.end());
    return static_cast<std::size_t>(std::unique(pts.begin(), pts.end()) - pts.begin());
}

}  // namespace

RangeEstimate mc_range(const IncrementPmf& pmf, const InsertionPath& f, int n, std::uint64_t reps,
                       std::uint64_t seed) {
    check_path_length(f, n, pmf);
    if (reps == 0) throw ValidationError("need at least one replica");
    const StepSampler step(pmf);
    std::vector<double> samples(reps);
    const auto nreps = static_cast<std::int64_t>(reps);

#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < nreps; ++r) {
        Engine eng = make_engine(seed, static_cast<std::uint64_t>(r));
        Site z = origin(pmf.dim());
        std::vector<Site> pts;
        pts.reserve(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            if (i > 0 && i % 2 == 0) z = add(z, step(eng));
            pts.push_back(add(z, f[static_cast<std::size_t>(i)]));
        }
        samples[static_cast<std::size_t>(r)] = static_cast<double>(count_distinct(pts));
    }
    const Moments m = reduce_samples(samples);
    return RangeEstimate{m.mean, m.stderr_of_mean(), reps};
}

mpq_class enumerate_range(const IncrementPmf& pmf, const InsertionPath& f, int n, std::uint64_t budget) {
    check_path_length(f, n, pmf);
    const int steps = n / 2;
    const std::size_t support = pmf.support_size();
    std::uint64_t paths = 1;
    for (int k = 0; k < steps; ++k) {
        if (paths > budget / support) throw ResourceError("range enumeration exceeds the path budget");
        paths *= support;
    }

    const auto& offs = pmf.atoms();
    const auto& nums = pmf.numerators();
    mpz_class acc = 0;
    std::vector<Site> walk(static_cast<std::size_t>(steps) + 1, origin(pmf.dim()));
    std::vector<mpz_class> weight(static_cast<std::size_t>(steps) + 1, 1);
    std::vector<Site> pts;

    // Depth-first over step choices; walk[k] = Z_k, weight[k] = product of numerators.
    auto leaf = [&]() {
        pts.clear();
        for (int i = 0; i <= n; ++i) pts.push_back(add(walk[static_cast<std::size_t>(i / 2)], f[static_cast<std::size_t>(i)]));
        acc += weight[static_cast<std::size_t>(steps)] * static_cast<unsigned long>(count_distinct(pts));
    };
    std::vector<std::size_t> choice(static_cast<std::size_t>(steps), 0);
    int depth = 0;
    if (steps == 0) {
        leaf();
    } else {
        while (depth >= 0) {
            const auto ud = static_cast<std::size_t>(depth);
            if (choice[ud] == support) {
                choice[ud] = 0;
                --depth;
                if (depth >= 0) ++choice[static_cast<std::size_t>(depth)];
                continue;
            }
            walk[ud + 1] = add(walk[ud], offs[choice[ud]].offset);
            weight[ud + 1] = weight[ud] * nums[choice[ud]];
            if (depth + 1 == steps) {
                leaf();
                ++choice[ud];
            } else {
                ++depth;
            }
        }
    }
    mpz_class den = 1;
    for (int k = 0; k < steps; ++k) den *= pmf.denominator();
    mpq_class result(acc, den);
    result.canonicalize();
    return result;
}

HoldingLaw HoldingLaw::exponential(double rate) {
    HoldingLaw h;
    h.kind = Kind::Exponential;
    h.rate = rate;
    h.validate();
    return h;
}

HoldingLaw HoldingLaw::pareto(double shape, double scale) {
    HoldingLaw h;
    h.kind = Kind::Pareto;
    h.shape = shape;
    h.scale = scale;
    h.validate();
    return h;
}

HoldingLaw HoldingLaw::deterministic(double period) {
    HoldingLaw h;
    h.kind = Kind::Deterministic;
    h.period = period;
    h.validate();
    return h;
}

void HoldingLaw::validate() const {
    switch (kind) {
        case Kind::Exponential:
            if (!(rate > 0)) throw ValidationError("exponential rate must be positive");
            break;
        case Kind::Pareto:
            if (!(shape > 0) || !(scale > 0)) throw ValidationError("pareto shape and scale must be positive");
            break;
        case Kind::Deterministic:
            if (!(period > 0)) throw ValidationError("deterministic period must be positive");
            break;
    }
}

double HoldingLaw::sample(Engine& eng) const {
    switch (kind) {
        case Kind::Exponential: return -std::log1p(-uniform01(eng)) / rate;
        case Kind::Pareto: return scale * std::pow(1.0 - uniform01(eng), -1.0 / shape);
        case Kind::Deterministic: return period;
    }
    return period;
}

double HoldingLaw::jump_count_bound(double horizon) const {
    switch (kind) {
        case Kind::Exponential: return rate * horizon;
        case Kind::Pareto: return std::floor(horizon / scale);
        case Kind::Deterministic: return std::floor(horizon / period);
    }
    return 0.0;
}

std::string HoldingLaw::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Exponential: os << "exponential(rate=" << rate << ")"; break;
        case Kind::Pareto: os << "pareto(shape=" << shape << ", scale=" << scale << ")"; break;
        case Kind::Deterministic: os << "deterministic(period=" << period << ")"; break;
    }
    return os.str();
}

int ParticlePath::extent() const {
    int e = sup_norm(start);
    for (const auto& [t, s] : jumps) e = std::max(e, sup_norm(s));
    return e;
}

void ParticlePath::validate() const {
    if (start.empty()) throw ValidationError("particle path has no start site");
    double last = 0.0;
    for (const auto& [t, s] : jumps) {
        if (s.size() != start.size()) throw ValidationError("particle path mixes dimensions");
        if (!(t > last)) throw ValidationError("particle jump times must be strictly increasing and positive");
        last = t;
    }
}

ParticlePath read_particle_path(std::istream& in) {
    ParticlePath p;
    std::string line;
    bool first = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double t = 0;
        if (!(ls >> t)) continue;
        Site s;
        for (int v; ls >> v;) s.push_back(v);
        if (!ls.eof() || s.empty()) throw ValidationError("particle file line " + std::to_string(lineno) + " is malformed");
        if (first) {
            if (t != 0.0) throw ValidationError("particle file must start at time 0");
            p.start = std::move(s);
            first = false;
        } else {
            p.jumps.emplace_back(t, std::move(s));
        }
    }
    if (first) throw ValidationError("particle file is empty");
    p.validate();
    return p;
}

ParticlePath load_particle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open particle file " + path);
    return read_particle_path(in);
}

void TrapSimConfig::validate() const {
    if (dim != pmf.dim()) throw ValidationError("config dim does not match the pmf");
    if (particle.dim() != dim) throw ValidationError("particle dimension does not match config dim");
    if (window < 1) throw ValidationError("window radius L must be >= 1");
    if (!(horizon >= 0)) throw ValidationError("horizon t must be >= 0");
    if (!(intensity >= 0)) throw ValidationError("trap intensity must be >= 0");
    if (reps < 1) throw ValidationError("need at least one replica");
    holding.validate();
    particle.validate();
}

int default_window(const TrapSimConfig& cfg) {
    const double reach = cfg.holding.jump_count_bound(cfg.horizon) * cfg.pmf.support_radius() + cfg.particle.extent();
    return std::max(1, static_cast<int>(std::ceil(4.0 * reach)));
}

double first_meeting(const PiecewisePath& trap, const PiecewisePath& particle, double horizon, std::uint64_t* ties) {
    std::size_t a = 0, b = 0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    double now = 0.0;
    while (true) {
        if (trap.sites[a] == particle.sites[b]) return now;
        const double ta = a + 1 < trap.times.size() ? trap.times[a + 1] : inf;
        const double tb = b + 1 < particle.times.size() ? particle.times[b + 1] : inf;
        now = std::min(ta, tb);
        if (now > horizon) return inf;
        // Equal timestamps: the trap jump is applied first, then the particle's;
        // right-continuity means only the state after both is observed.
        if (ta == tb) {
            if (ties) ++*ties;
            ++a;
            ++b;
        } else if (ta < tb) {
            ++a;
        } else {
            ++b;
        }
    }
}

namespace {

PiecewisePath particle_as_path(const ParticlePath& p) {
    PiecewisePath out{{0.0}, {p.start}};
    for (const auto& [t, s] : p.jumps) {
        out.times.push_back(t);
        out.sites.push_back(s);
    }
    return out;
}

void simulate_trap(const Site& from, const StepSampler& step, const HoldingLaw& hold, double horizon, Engine& eng,
                   PiecewisePath& out) {
    out.times.assign(1, 0.0);
    out.sites.assign(1, from);
    double t = 0.0;
    while (true) {
        t += hold.sample(eng);
        if (t > horizon) break;
        out.times.push_back(t);
        out.sites.push_back(add(out.sites.back(), step(eng)));
    }
}

// Poisson by inversion; portable given the uniform stream.
std::uint64_t sample_poisson(double mean, Engine& eng) {
    if (mean <= 0) return 0;
    const double u = uniform01(eng);
    double p = std::exp(-mean), cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf && k < 10000) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

struct Window {
    Grid<char> grid;
    int shell_from = 0;  ///< sites with |y|_inf >= shell_from form the truncation band
};

Window make_window(const TrapSimConfig& cfg) {
    Window w{Grid<char>(cfg.dim, cfg.window, 0), 0};
    w.shell_from = cfg.window - std::max(1, cfg.window / 4) + 1;
    return w;
}

SurvivalEstimate make_estimate(const Moments& m, std::string method) {
    return SurvivalEstimate{m.mean, m.stderr_of_mean(), m.count, std::move(method)};
}

}  // namespace

TrapComparison simulate_trap_field(const TrapSimConfig& cfg) {
    cfg.validate();
    constexpr double inf = std::numeric_limits<double>::infinity();
    const Window win = make_window(cfg);
    const StepSampler step(cfg.pmf);
    const PiecewisePath xpath = particle_as_path(cfg.particle);
    const PiecewisePath zpath = particle_as_path(ParticlePath::constant(origin(cfg.dim)));

    std::vector<double> kill_x(cfg.reps, inf), kill_0(cfg.reps, inf);
    std::uint64_t trunc = 0, ties = 0;
    const auto nreps = static_cast<std::int64_t>(cfg.reps);

#pragma omp parallel for schedule(static) reduction(+ : trunc, ties)
    for (std::int64_t r = 0; r < nreps; ++r) {
        Engine eng = make_engine(cfg.seed, static_cast<std::uint64_t>(r));
        PiecewisePath trap;
        double kx = inf, k0 = inf;
        for (std::size_t i = 0; i < win.grid.size(); ++i) {
            const std::uint64_t count = sample_poisson(cfg.intensity, eng);
            if (count == 0) continue;
            const Site y = win.grid.site(i);
            for (std::uint64_t j = 0; j < count; ++j) {
                simulate_trap(y, step, cfg.holding, cfg.horizon, eng, trap);
                std::uint64_t local_ties = 0;
                const double mx = first_meeting(trap, xpath, cfg.horizon, &local_ties);
                const double m0 = first_meeting(trap, zpath, cfg.horizon);
                ties += local_ties;
                if ((mx < inf || m0 < inf) && sup_norm(y) >= win.shell_from) ++trunc;
                kx = std::min(kx, mx);
                k0 = std::min(k0, m0);
            }
        }
        kill_x[static_cast<std::size_t>(r)] = kx;
        kill_0[static_cast<std::size_t>(r)] = k0;
    }

    TrapComparison out;
    std::vector<double> sx(cfg.reps), s0(cfg.reps), diff(cfg.reps);
    for (std::size_t r = 0; r < cfg.reps; ++r) {
        sx[r] = kill_x[r] > cfg.horizon ? 1.0 : 0.0;
        s0[r] = kill_0[r] > cfg.horizon ? 1.0 : 0.0;
        diff[r] = sx[r] - s0[r];
    }
    out.moving = make_estimate(reduce_samples(sx), "direct-field");
    out.constant = make_estimate(reduce_samples(s0), "direct-field");
    out.diff_stderr = reduce_samples(diff).stderr_of_mean();
    out.combined_stderr = std::hypot(out.moving.stderr_of_mean, out.constant.stderr_of_mean);
    out.truncation_events = trunc;
    out.tie_events = ties;
    out.window_below_default = cfg.window < default_window(cfg);
    out.within_hypotheses = cfg.holding.continuous() && validate_class(cfg.pmf).proved();

    if (cfg.curve_points > 0) {
        for (int j = 0; j <= cfg.curve_points; ++j) {
            const double t = cfg.horizon * j / cfg.curve_points;
            const auto alive = [t](const std::vector<double>& k) {
                return static_cast<double>(std::count_if(k.begin(), k.end(), [t](double v) { return v > t; })) /
                       static_cast<double>(k.size());
            };
            out.curve_times.push_back(t);
            out.curve_moving.push_back(alive(kill_x));
            out.curve_constant.push_back(alive(kill_0));
        }
    }
    return out;
}

TrapComparison survival_via_identity(const TrapSimConfig& cfg) {
    cfg.validate();
    constexpr double inf = std::numeric_limits<double>::infinity();
    const Window win = make_window(cfg);
    const StepSampler step(cfg.pmf);
    const PiecewisePath xpath = particle_as_path(cfg.particle);
    const PiecewisePath zpath = particle_as_path(ParticlePath::constant(origin(cfg.dim)));

    const std::size_t nsites = win.grid.size();
    std::vector<double> hx(nsites, 0.0), h0(nsites, 0.0), hdiff_var(nsites, 0.0);
    std::uint64_t trunc = 0, ties = 0;
    const auto ns = static_cast<std::int64_t>(nsites);
    const double reps = static_cast<double>(cfg.reps);

#pragma omp parallel for schedule(dynamic, 4) reduction(+ : trunc, ties)
    for (std::int64_t i = 0; i < ns; ++i) {
        const Site y = win.grid.site(static_cast<std::size_t>(i));
        const std::uint64_t site_seed = stream_seed(cfg.seed, 0x517e0000ULL + static_cast<std::uint64_t>(i));
        PiecewisePath trap;
        std::uint64_t cx = 0, c0 = 0, both = 0;
        for (std::uint64_t r = 0; r < cfg.reps; ++r) {
            Engine eng = make_engine(site_seed, r);
            simulate_trap(y, step, cfg.holding, cfg.horizon, eng, trap);
            std::uint64_t local_ties = 0;
            const bool mx = first_meeting(trap, xpath, cfg.horizon, &local_ties) < inf;
            const bool m0 = first_meeting(trap, zpath, cfg.horizon) < inf;
            ties += local_ties;
            cx += mx;
            c0 += m0;
            both += mx && m0;
            if ((mx || m0) && sup_norm(y) >= win.shell_from) ++trunc;
        }
        const auto u = static_cast<std::size_t>(i);
        hx[u] = static_cast<double>(cx) / reps;
        h0[u] = static_cast<double>(c0) / reps;
        // Var of the paired indicator difference, per trap.
        const double exy = static_cast<double>(both) / reps;
        hdiff_var[u] = (hx[u] * (1 - hx[u]) + h0[u] * (1 - h0[u]) - 2 * (exy - hx[u] * h0[u])) / reps;
    }

    double sum_x = 0, sum_0 = 0, var_x = 0, var_0 = 0, var_d = 0;
    for (std::size_t i = 0; i < nsites; ++i) {
        sum_x += hx[i];
        sum_0 += h0[i];
        var_x += hx[i] * (1 - hx[i]) / reps;
        var_0 += h0[i] * (1 - h0[i]) / reps;
        var_d += std::max(0.0, hdiff_var[i]);
    }
    const double lam = cfg.intensity;
    TrapComparison out;
    const double sx = std::exp(-lam * sum_x), s0 = std::exp(-lam * sum_0);
    // Delta method: se(exp(-lam H)) = exp(-lam H) * lam * se(H).
    out.moving = SurvivalEstimate{sx, sx * lam * std::sqrt(var_x), cfg.reps, "exp-identity"};
    out.constant = SurvivalEstimate{s0, s0 * lam * std::sqrt(var_0), cfg.reps, "exp-identity"};
    out.diff_stderr = std::max(sx, s0) * lam * std::sqrt(var_d);
    out.combined_stderr = std::hypot(out.moving.stderr_of_mean, out.constant.stderr_of_mean);
    out.truncation_events = trunc;
    out.tie_events = ties;
    out.window_below_default = cfg.window < default_window(cfg);
    out.within_hypotheses = cfg.holding.continuous() && validate_class(cfg.pmf).proved();
    return out;
}

CounterexampleReport counterexample_ratio(int n, std::uint64_t reps, std::uint64_t seed) {
    if (n < 0) throw ValidationError("counterexample horizon must be >= 0");
    if (reps == 0) throw ValidationError("need at least one replica");
    CounterexampleReport rep;
    rep.n = n;
    rep.reps = reps;
    std::vector<double> ratios(reps);
    std::vector<std::int64_t> odd(reps, 0);
    std::vector<char> has_odd(reps, 0);
    const auto nreps = static_cast<std::int64_t>(reps);
    const std::int64_t offset = static_cast<std::int64_t>(n) + 2;
    const std::size_t width = static_cast<std::size_t>(2 * offset + 1);

#pragma omp parallel
    {
        std::vector<char> seen_z(width), seen_p(width);
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < nreps; ++r) {
            Engine eng = make_engine(seed, static_cast<std::uint64_t>(r));
            std::fill(seen_z.begin(), seen_z.end(), 0);
            std::fill(seen_p.begin(), seen_p.end(), 0);
            std::int64_t z = 0;
            std::size_t rz = 0, rp = 0;
            for (int i = 0; i <= n; ++i) {
                if (i > 0) z += (eng() >> 63) ? 1 : -1;
                const std::int64_t shifted = z - (i % 2);
                if (shifted % 2 != 0 && !has_odd[static_cast<std::size_t>(r)]) {
                    has_odd[static_cast<std::size_t>(r)] = 1;
                    odd[static_cast<std::size_t>(r)] = shifted;
                }
                char& a = seen_z[static_cast<std::size_t>(z + offset)];
                if (!a) { a = 1; ++rz; }
                char& b = seen_p[static_cast<std::size_t>(shifted + offset)];
                if (!b) { b = 1; ++rp; }
            }
            ratios[static_cast<std::size_t>(r)] = static_cast<double>(rp) / static_cast<double>(rz);
        }
    }
    for (std::size_t r = 0; r < reps; ++r)
        if (has_odd[r]) {
            rep.all_even = false;
            rep.odd_site = odd[r];
            break;
        }
    const Moments m = reduce_samples(ratios);
    rep.mean_ratio = m.mean;
    rep.stderr_of_mean = m.stderr_of_mean();
    return rep;
}

}  // namespace rangewalk
