#pragma once

// Independent reference computations used by the tests. Deliberately naive:
// sparse maps keyed by site, explicit path enumeration, no shared code with
// the library beyond the pmf and site types.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "rangewalk/lattice.hpp"
#include "rangewalk/pmf.hpp"

namespace oracle {

using rangewalk::Site;
using Law = std::map<Site, mpq_class>;

inline Law law_of(const rangewalk::IncrementPmf& pmf) {
    Law out;
    for (const auto& a : pmf.atoms()) out[a.offset] = a.weight;
    return out;
}

inline Site plus(const Site& a, const Site& b) {
    Site s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
    return s;
}

inline Site minus(const Site& a, const Site& b) {
    Site s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] - b[i];
    return s;
}

/// Calls visit(path, weight) for every n-step path from the origin;
/// path[k] is the position after k steps.
inline void for_each_path(const Law& law, int dim, int n,
                          const std::function<void(const std::vector<Site>&, const mpq_class&)>& visit) {
    std::vector<Site> path{Site(static_cast<std::size_t>(dim), 0)};
    std::function<void(const mpq_class&)> rec = [&](const mpq_class& w) {
        if (static_cast<int>(path.size()) == n + 1) {
            visit(path, w);
            return;
        }
        for (const auto& [step, p] : law) {
            path.push_back(plus(path.back(), step));
            rec(w * p);
            path.pop_back();
        }
    };
    rec(mpq_class(1));
}

/// p_n by summing path weights.
inline Law kernel_by_paths(const Law& law, int dim, int n) {
    Law out;
    if (n < 0) return out;
    for_each_path(law, dim, n, [&](const std::vector<Site>& p, const mpq_class& w) { out[p.back()] += w; });
    return out;
}

/// Sparse convolution of two laws.
inline Law convolve(const Law& a, const Law& b) {
    Law out;
    for (const auto& [x, p] : a)
        for (const auto& [y, q] : b) out[plus(x, y)] += p * q;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

inline mpq_class value(const Law& l, const Site& x) {
    auto it = l.find(x);
    return it == l.end() ? mpq_class(0) : it->second;
}

/// E |union_{i<=n} (T_i - S_i)| over all walk paths S: the expected number of
/// start sites whose particle meets the trap field by time n.
inline mpq_class killed_sites(const Law& law, int dim, const std::vector<std::vector<Site>>& traps, int n) {
    mpq_class total = 0;
    for_each_path(law, dim, n, [&](const std::vector<Site>& p, const mpq_class& w) {
        std::set<Site> hit;
        for (int i = 0; i <= n; ++i)
            for (const Site& t : traps[static_cast<std::size_t>(i)]) hit.insert(minus(t, p[static_cast<std::size_t>(i)]));
        total += w * static_cast<unsigned long>(hit.size());
    });
    return total;
}

/// Trap sets {phi_i, phi_{i+1}} (two-trap) or {phi_i} (single), holding phi
/// at its last entry when needed.
inline std::vector<std::vector<Site>> trap_sets(const std::vector<Site>& phi, int n, bool two_trap) {
    auto at = [&](int i) { return phi[static_cast<std::size_t>(std::min<int>(i, static_cast<int>(phi.size()) - 1))]; };
    std::vector<std::vector<Site>> out;
    for (int i = 0; i <= n; ++i) {
        out.push_back({at(i)});
        if (two_trap) out.back().push_back(at(i + 1));
    }
    return out;
}

/// E |{Zbar_i + f_i : i <= n}| where Zbar steps at even times.
inline mpq_class insertion_range(const Law& law, int dim, const std::vector<Site>& f, int n) {
    mpq_class total = 0;
    for_each_path(law, dim, n / 2, [&](const std::vector<Site>& z, const mpq_class& w) {
        std::set<Site> seen;
        for (int i = 0; i <= n; ++i) seen.insert(plus(z[static_cast<std::size_t>(i / 2)], f[static_cast<std::size_t>(i)]));
        total += w * static_cast<unsigned long>(seen.size());
    });
    return total;
}

}  // namespace oracle
