#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rangewalk/lattice.hpp"
#include "rangewalk/pmf.hpp"

namespace rangewalk {

/// Deterministic path f_0, ..., f_N inserted between walk steps.
/// Invariant: f_{2k-1} = f_{2k} for every k >= 1 with 2k <= N.
class InsertionPath {
public:
    explicit InsertionPath(std::vector<Site> values);

    std::size_t size() const { return values_.size(); }
    int dim() const { return static_cast<int>(values_.front().size()); }
    const Site& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Site>& values() const { return values_; }

    /// Prefix f_0..f_n.
    InsertionPath prefix(std::size_t n) const;

    static InsertionPath zero(int dim, std::size_t length);

private:
    std::vector<Site> values_;
};

/// Trap trajectory phi_0, ..., phi_M stored as absolute sites.
class TrapTrajectory {
public:
    explicit TrapTrajectory(std::vector<Site> values);

    std::size_t size() const { return values_.size(); }
    int dim() const { return static_cast<int>(values_.front().size()); }
    const Site& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Site>& values() const { return values_; }

    /// Max sup-norm over the stored sites.
    int extent() const;
    /// Copy extended to `length` entries by holding the last site.
    TrapTrajectory held_to(std::size_t length) const;

    static TrapTrajectory zero(int dim, std::size_t length);

private:
    std::vector<Site> values_;
};

/// phi_i = -f_{2i}. An f of even length is first extended by repeating its
/// last value, so the result has floor(len/2) + 1 entries.
TrapTrajectory contract(const InsertionPath& f);

/// Active trap sites at each time 0..n: {phi_i, phi_{i+1}}, deduplicated.
std::vector<std::vector<Site>> trap_field(const TrapTrajectory& phi, int n);

/// phi_i = i mod 2 in d = 1, i = 0..n.
TrapTrajectory alternating_phi(int n);

/// phi_0 = 0 with i.i.d. increments from step_law; n + 1 entries.
TrapTrajectory random_phi(std::uint64_t seed, int n, const IncrementPmf& step_law);

/// f_0 = 0; at each odd index a jump drawn from step_law, held at the following
/// even index. n + 1 entries.
InsertionPath random_insertion(std::uint64_t seed, int n, const IncrementPmf& step_law);

/// One line per entry, d integers per line.
std::vector<Site> read_sites(std::istream& in);
std::vector<Site> load_sites_file(const std::string& path);
void write_sites(std::ostream& out, const std::vector<Site>& sites);

/// "alternating:N", "random:SEED:N" (uniform3 steps in the given dimension),
/// "zero:N", or "file:PATH".
TrapTrajectory phi_from_spec(std::string_view spec, int dim);

}  // namespace rangewalk
