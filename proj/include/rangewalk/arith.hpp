#pragma once

#include <cmath>
#include <string>

#include <gmpxx.h>

namespace rangewalk {

/// Exact mode. Cell values are integer numerators over an implicit common
/// denominator D^n, where D is the pmf's common denominator and n the number
/// of convolution steps taken; reported values are reduced rationals.
struct ExactArith {
    using value_type = mpz_class;
    using scalar_type = mpq_class;
    static constexpr bool exact = true;
    static constexpr const char* name = "exact";

    static scalar_type ratio(const value_type& num, const value_type& den) {
        scalar_type q(num, den);
        q.canonicalize();
        return q;
    }
    static bool nonneg(const scalar_type& s) { return sgn(s) >= 0; }
    static bool is_zero(const scalar_type& s) { return sgn(s) == 0; }
    static double to_double(const scalar_type& s) { return s.get_d(); }
    static std::string to_string(const scalar_type& s) { return s.get_str(); }
};

/// Floating fallback for windows too large for exact arithmetic. Cell values are
/// probabilities directly (the implicit denominator is 1).
struct FloatArith {
    using value_type = double;
    using scalar_type = double;
    static constexpr bool exact = false;
    static constexpr const char* name = "float";
    static constexpr double tolerance = 1e-12;

    static scalar_type ratio(double num, double den) { return num / den; }
    static bool nonneg(double s) { return s >= -tolerance; }
    static bool is_zero(double s) { return std::abs(s) <= tolerance; }
    static double to_double(double s) { return s; }
    static std::string to_string(double s);
};

enum class ArithMode { Auto, Exact, Float };

/// Windows up to this many cells run exact under ArithMode::Auto (always in d <= 2).
inline constexpr std::size_t kExactCellBudget = 100000;

bool use_exact(ArithMode mode, int dim, std::size_t cells);

}  // namespace rangewalk
