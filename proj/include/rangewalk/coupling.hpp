#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rangewalk/lattice.hpp"

namespace rangewalk {

/// Start point reduced by coordinate sign flips and a permutation so that all
/// coordinates are nonnegative and the 2m - 1 odd ones come first.
struct NormalizedStart {
    Site x;
    std::vector<int> permutation;  ///< x[i] = signs[permutation[i]] * raw[permutation[i]]
    std::vector<int> signs;
    int m = 1;
};

/// Requires |x|_1 odd.
NormalizedStart normalize_start(const Site& raw);

enum class CouplingRule { Glued, Mirror, Swap };

std::string to_string(CouplingRule r);

/// Pair of simple random walks X (from the normalized start) and Y (from e_1),
/// with the bookkeeping needed to monitor the coupling invariants:
/// (1) |X_i| >= |Y_i|; (2) equal coordinates stay equal; (3) matched parities
/// stay matched; (4) within each pair (2j, 2j+1), X+Y has equal parity.
/// Coordinates are 0-based here, so the pairs are (1,2), (3,4), ..., (2m-3, 2m-2).
struct CoupledState {
    int k = 0;
    int m = 1;
    Site X;
    Site Y;
    std::vector<char> glued;
    std::vector<char> parity_matched;

    static CoupledState start(const Site& normalized_x, int m);

    int dim() const { return static_cast<int>(X.size()); }
    /// Partner coordinate within its pair, or -1 for unpaired coordinates.
    int partner(int axis) const;
    /// Empty when all invariants hold for this state on its own.
    std::string violation() const;
};

struct CoupledStep {
    CoupledState state;
    CouplingRule rule = CouplingRule::Glued;
    int y_axis = 0;
    int y_sign = 1;
};

/// Advances X by sign * e_axis and Y by the matching rule. Throws
/// InvariantError (with the before/after states) if any invariant breaks.
CoupledStep coupled_step(const CoupledState& s, int axis, int sign);

struct CouplingRunReport {
    NormalizedStart start;
    int n = 0;
    std::uint64_t reps = 0;
    std::uint64_t x_zero = 0;  ///< replicas with X_n = 0
    std::uint64_t y_zero = 0;
    std::uint64_t violations = 0;
    std::vector<std::uint64_t> y_increments;  ///< counts per direction 2*axis + (sign < 0)
    double p_hat_x() const { return static_cast<double>(x_zero) / static_cast<double>(reps); }
    double p_hat_y() const { return static_cast<double>(y_zero) / static_cast<double>(reps); }
};

/// Simulates reps coupled paths of odd length n; throws InvariantError on any
/// invariant breach or a path with X_n = 0 but Y_n != 0.
CouplingRunReport run_coupling(const Site& x, int n, std::uint64_t reps, std::uint64_t seed);

struct CouplingOracleReport {
    NormalizedStart start;
    int n = 0;
    std::uint64_t paths = 0;
    bool invariants_hold = true;
    bool implication_holds = true;
    bool y_uniform = true;  ///< every Y driving sequence realized exactly once
    std::uint64_t x_zero = 0;
    std::uint64_t y_zero = 0;
    std::string first_failure;
    bool pass() const { return invariants_hold && implication_holds && y_uniform; }
};

inline constexpr std::uint64_t kOraclePathBudget = 10'000'000;

/// Enumerates all (2d)^n X driving sequences. Throws ResourceError above budget.
CouplingOracleReport exhaustive_coupling_oracle(const Site& x, int n, std::uint64_t budget = kOraclePathBudget);

struct OddSiteReport {
    int dim = 1;
    int n = 1;
    int radius = 0;
    bool pass = true;
    std::size_t checked = 0;
    mpq_class reference;  ///< p_n(e_1)
    mpq_class worst;      ///< max p_n(x) over odd |x|_1, x != e_1 up to symmetry
    Site worst_site;
};

/// p_n(x) <= p_n(e_1) for every x with |x|_1 odd and |x|_inf <= radius, n odd.
OddSiteReport verify_pnxodd_exact(int dim, int n, int radius);

}  // namespace rangewalk
