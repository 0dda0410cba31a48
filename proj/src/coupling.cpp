#include "rangewalk/coupling.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "rangewalk/errors.hpp"
#include "rangewalk/kernels.hpp"
#include "rangewalk/pmf.hpp"
#include "rangewalk/rng.hpp"

namespace rangewalk {

NormalizedStart normalize_start(const Site& raw) {
    if (raw.empty()) throw ValidationError("coupling start has no coordinates");
    if (l1_norm(raw) % 2 == 0)
        throw ValidationError("coupling start " + to_string(raw) + " has even |x|_1");
    const int d = static_cast<int>(raw.size());
    NormalizedStart ns;
    ns.signs.resize(raw.size());
    for (int i = 0; i < d; ++i) ns.signs[static_cast<std::size_t>(i)] = raw[static_cast<std::size_t>(i)] < 0 ? -1 : 1;
    for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < d; ++i)
            if ((std::abs(raw[static_cast<std::size_t>(i)]) % 2 == 1) == (pass == 0)) ns.permutation.push_back(i);
    for (int i : ns.permutation) ns.x.push_back(std::abs(raw[static_cast<std::size_t>(i)]));
    const auto odd = std::count_if(ns.x.begin(), ns.x.end(), [](int v) { return v % 2 == 1; });
    ns.m = static_cast<int>((odd + 1) / 2);
    return ns;
}

std::string to_string(CouplingRule r) {
    switch (r) {
        case CouplingRule::Glued: return "a";
        case CouplingRule::Mirror: return "b";
        case CouplingRule::Swap: return "c";
    }
    return "?";
}

namespace {

bool same_parity(int a, int b) { return ((a - b) % 2) == 0; }

std::string describe(const CoupledState& s) {
    std::ostringstream os;
    os << "k=" << s.k << " X=" << to_string(s.X) << " Y=" << to_string(s.Y) << " m=" << s.m;
    return os.str();
}

}  // namespace

CoupledState CoupledState::start(const Site& x, int m) {
    CoupledState s;
    s.m = m;
    s.X = x;
    s.Y = unit_vector(static_cast<int>(x.size()), 0);
    s.glued.resize(x.size());
    s.parity_matched.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        s.glued[i] = s.X[i] == s.Y[i];
        s.parity_matched[i] = same_parity(s.X[i], s.Y[i]);
    }
    return s;
}

int CoupledState::partner(int axis) const {
    if (axis < 1 || axis > 2 * m - 2) return -1;
    return axis % 2 == 1 ? axis + 1 : axis - 1;
}

std::string CoupledState::violation() const {
    const int d = dim();
    for (int i = 0; i < d; ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (std::abs(X[u]) < std::abs(Y[u])) return "(1) |X_" + std::to_string(i + 1) + "| < |Y_" + std::to_string(i + 1) + "|";
        if (partner(i) < 0 && !same_parity(X[u], Y[u]))
            return "unpaired coordinate " + std::to_string(i + 1) + " has mismatched parity";
    }
    for (int a = 1; a + 1 <= 2 * m - 2; a += 2) {
        const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(a + 1);
        if (!same_parity(X[ua] + Y[ua], X[ub] + Y[ub]))
            return "(4) pair (" + std::to_string(a + 1) + "," + std::to_string(a + 2) + ") parity sums differ";
    }
    return {};
}

CoupledStep coupled_step(const CoupledState& s, int axis, int sign) {
    if (axis < 0 || axis >= s.dim() || (sign != 1 && sign != -1))
        throw ValidationError("coupled step must be a signed unit vector");
    const auto ua = static_cast<std::size_t>(axis);
    CoupledStep out{s, CouplingRule::Glued, axis, sign};
    CoupledState& t = out.state;

    if (s.X[ua] == s.Y[ua]) {
        out.rule = CouplingRule::Glued;
    } else if (same_parity(s.X[ua], s.Y[ua])) {
        out.rule = CouplingRule::Mirror;
        out.y_sign = -sign;
    } else {
        const int p = s.partner(axis);
        if (p < 0 || same_parity(s.X[static_cast<std::size_t>(p)], s.Y[static_cast<std::size_t>(p)]))
            throw InvariantError("swap rule has no partner with mismatched parity: " + describe(s) +
                                 " axis=" + std::to_string(axis + 1));
        out.rule = CouplingRule::Swap;
        out.y_axis = p;
    }
    t.X[ua] += sign;
    t.Y[static_cast<std::size_t>(out.y_axis)] += out.y_sign;
    t.k = s.k + 1;

    std::string bad = t.violation();
    for (std::size_t i = 0; bad.empty() && i < t.X.size(); ++i) {
        if (s.glued[i] && t.X[i] != t.Y[i]) bad = "(2) glued coordinate " + std::to_string(i + 1) + " separated";
        if (s.parity_matched[i] && !same_parity(t.X[i], t.Y[i]))
            bad = "(3) parity of coordinate " + std::to_string(i + 1) + " unmatched";
    }
    if (!bad.empty())
        throw InvariantError("coupling invariant " + bad + " after rule (" + to_string(out.rule) + "): before " +
                             describe(s) + ", after " + describe(t));
    for (std::size_t i = 0; i < t.X.size(); ++i) {
        t.glued[i] = t.glued[i] || t.X[i] == t.Y[i];
        t.parity_matched[i] = t.parity_matched[i] || same_parity(t.X[i], t.Y[i]);
    }
    return out;
}

CouplingRunReport run_coupling(const Site& x, int n, std::uint64_t reps, std::uint64_t seed) {
    if (n < 1 || n % 2 == 0) throw ValidationError("coupling horizon must be odd");
    if (reps == 0) throw ValidationError("coupling needs at least one replica");
    CouplingRunReport rep;
    rep.start = normalize_start(x);
    rep.n = n;
    rep.reps = reps;
    const int d = static_cast<int>(x.size());
    const auto start = CoupledState::start(rep.start.x, rep.start.m);
    if (auto v = start.violation(); !v.empty()) throw InvariantError("coupling start state invalid: " + v);

    const std::size_t ndir = static_cast<std::size_t>(2 * d);
    std::vector<std::uint64_t> incr(ndir, 0);
    std::uint64_t xz = 0, yz = 0;
    std::string failure;
    const auto nreps = static_cast<std::int64_t>(reps);

#pragma omp parallel
    {
        std::vector<std::uint64_t> local(ndir, 0);
#pragma omp for schedule(static) reduction(+ : xz, yz)
        for (std::int64_t r = 0; r < nreps; ++r) {
            try {
                Engine eng = make_engine(seed, static_cast<std::uint64_t>(r));
                CoupledState s = start;
                for (int k = 0; k < n; ++k) {
                    const auto q = static_cast<int>(uniform01(eng) * static_cast<double>(ndir));
                    auto step = coupled_step(s, q / 2, q % 2 == 0 ? 1 : -1);
                    ++local[static_cast<std::size_t>(2 * step.y_axis + (step.y_sign < 0 ? 1 : 0))];
                    s = std::move(step.state);
                }
                const bool x0 = s.X == origin(d);
                const bool y0 = s.Y == origin(d);
                if (x0 && !y0) throw InvariantError("X_n = 0 but Y_n = " + to_string(s.Y) + " in replica " + std::to_string(r));
                xz += x0;
                yz += y0;
            } catch (const std::exception& e) {
#pragma omp critical(rangewalk_coupling_failure)
                if (failure.empty()) failure = e.what();
            }
        }
#pragma omp critical(rangewalk_coupling_merge)
        for (std::size_t i = 0; i < ndir; ++i) incr[i] += local[i];
    }
    if (!failure.empty()) throw InvariantError(failure);
    rep.x_zero = xz;
    rep.y_zero = yz;
    rep.y_increments = std::move(incr);
    return rep;
}

CouplingOracleReport exhaustive_coupling_oracle(const Site& x, int n, std::uint64_t budget) {
    if (n < 0) throw ValidationError("oracle horizon must be >= 0");
    CouplingOracleReport rep;
    rep.start = normalize_start(x);
    rep.n = n;
    const int d = static_cast<int>(x.size());
    const std::uint64_t ndir = static_cast<std::uint64_t>(2 * d);
    std::uint64_t total = 1;
    for (int k = 0; k < n; ++k) {
        if (total > budget / ndir) throw ResourceError("coupling oracle exceeds the path budget");
        total *= ndir;
    }
    rep.paths = total;
    const auto start = CoupledState::start(rep.start.x, rep.start.m);
    if (auto v = start.violation(); !v.empty()) {
        rep.invariants_hold = false;
        rep.first_failure = "start: " + v;
        return rep;
    }

    std::vector<std::uint64_t> ymap(total);
    std::uint64_t xz = 0, yz = 0;
    bool inv_ok = true, impl_ok = true;
    std::string failure;
    const auto ntotal = static_cast<std::int64_t>(total);

    // Driving sequences are base-2d numerals, first step most significant.
#pragma omp parallel for schedule(static) reduction(+ : xz, yz) reduction(&& : inv_ok, impl_ok)
    for (std::int64_t code = 0; code < ntotal; ++code) {
        std::uint64_t place = total;
        std::uint64_t ycode = 0;
        CoupledState s = start;
        try {
            for (int k = 0; k < n; ++k) {
                place /= ndir;
                const auto q = static_cast<int>((static_cast<std::uint64_t>(code) / place) % ndir);
                auto step = coupled_step(s, q / 2, q % 2 == 0 ? 1 : -1);
                ycode = ycode * ndir + static_cast<std::uint64_t>(2 * step.y_axis + (step.y_sign < 0 ? 1 : 0));
                s = std::move(step.state);
            }
        } catch (const InvariantError& e) {
            inv_ok = false;
#pragma omp critical(rangewalk_oracle_failure)
            if (failure.empty()) failure = e.what();
            continue;
        }
        ymap[static_cast<std::size_t>(code)] = ycode;
        const bool x0 = s.X == origin(d);
        const bool y0 = s.Y == origin(d);
        if (x0 && !y0) {
            impl_ok = false;
#pragma omp critical(rangewalk_oracle_failure)
            if (failure.empty()) failure = "X_n = 0 but Y_n = " + to_string(s.Y) + " on sequence " + std::to_string(code);
        }
        xz += x0;
        yz += y0;
    }
    rep.invariants_hold = inv_ok;
    rep.implication_holds = impl_ok;
    rep.x_zero = xz;
    rep.y_zero = yz;
    rep.first_failure = failure;

    if (inv_ok) {
        std::vector<char> seen(total, 0);
        for (std::uint64_t c : ymap) {
            if (seen[static_cast<std::size_t>(c)]) {
                rep.y_uniform = false;
                if (rep.first_failure.empty()) rep.first_failure = "Y driving sequence " + std::to_string(c) + " realized twice";
                break;
            }
            seen[static_cast<std::size_t>(c)] = 1;
        }
    } else {
        rep.y_uniform = false;
    }
    return rep;
}

OddSiteReport verify_pnxodd_exact(int dim, int n, int radius) {
    if (n < 1 || n % 2 == 0) throw ValidationError("pnxodd check needs odd n");
    if (radius < 0) throw ValidationError("radius must be >= 0");
    const auto kernel = n_step_kernel<ExactArith>(simple_symmetric(dim), n, radius);
    OddSiteReport rep;
    rep.dim = dim;
    rep.n = n;
    rep.radius = radius;
    rep.reference = kernel(unit_vector(dim, 0));
    rep.worst = -1;
    Grid<int> window(dim, radius, 0);
    for (std::size_t i = 0; i < window.size(); ++i) {
        const Site x = window.site(i);
        if (l1_norm(x) % 2 == 0) continue;
        ++rep.checked;
        const mpq_class v = kernel(x);
        if (v > rep.worst) {
            rep.worst = v;
            rep.worst_site = x;
        }
        if (v > rep.reference) rep.pass = false;
    }
    return rep;
}

}  // namespace rangewalk
