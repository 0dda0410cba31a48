#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "rangewalk/lattice.hpp"

namespace rangewalk {

/// Finite-support symmetric increment law on Z^d with exact rational weights.
/// Construction validates: positive weights, exact normalization, p(x) = p(-x).
class IncrementPmf {
public:
    struct Atom {
        Site offset;
        mpq_class weight;
    };

    IncrementPmf(int dim, std::vector<Atom> atoms);

    int dim() const { return dim_; }
    int support_radius() const { return support_radius_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t support_size() const { return atoms_.size(); }

    /// p(x); zero off the support.
    mpq_class weight(const Site& x) const;
    /// Least common denominator of all weights.
    const mpz_class& denominator() const { return denominator_; }
    /// Integer numerators over denominator(), aligned with atoms().
    const std::vector<mpz_class>& numerators() const { return numerators_; }

    std::string describe() const;

private:
    int dim_;
    int support_radius_ = 0;
    std::vector<Atom> atoms_;
    mpz_class denominator_ = 1;
    std::vector<mpz_class> numerators_;
};

/// Parses "x_1 ... x_d num/den" lines; blank lines and '#' comments skipped.
IncrementPmf parse_pmf(std::istream& in);
IncrementPmf load_pmf_file(const std::string& path);

IncrementPmf simple_symmetric(int dim);
/// Weight 1/2 at the origin, 1/(4d) on each signed unit vector.
IncrementPmf lazy_half(int dim);
/// Uniform on {-1, 0, 1}^d.
IncrementPmf uniform_cube(int dim);
IncrementPmf point_mass(int dim);

/// Resolves "srw:d", "lazy:d", "uniform3:d", "point:d" or "file:PATH".
IncrementPmf pmf_from_spec(std::string_view spec);

enum class ClassTag { SimpleSymmetric, ClassI, LazyHalf, Unclassified };

struct WalkClass {
    ClassTag tag = ClassTag::Unclassified;
    std::vector<ClassTag> satisfied;
    int dim = 1;

    bool proved() const { return tag != ClassTag::Unclassified; }
    bool has(ClassTag t) const;
};

std::string to_string(ClassTag tag);

/// Most specific class, precedence SimpleSymmetric > ClassI > LazyHalf.
/// ClassI is tested only in d = 1: p(k) >= p(k+1) for k >= 1 and p(0) >= p(3).
WalkClass validate_class(const IncrementPmf& pmf);

}  // namespace rangewalk
