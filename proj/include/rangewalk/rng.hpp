#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rangewalk/pmf.hpp"

namespace rangewalk {

/// Per-stream seed: splitmix64 applied to the master seed, then to the stream
/// index xor'ed in. Replica r of a run always draws from stream_seed(master, r),
/// so results do not depend on how replicas are scheduled across threads.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream);

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, std::uint64_t stream) {
    return Engine(stream_seed(master, stream));
}

/// Draws increments of a pmf by inverse CDF over its atoms (floating weights).
class StepSampler {
public:
    explicit StepSampler(const IncrementPmf& pmf);

    const Site& operator()(Engine& eng) const;
    std::size_t index(Engine& eng) const;
    const std::vector<Site>& offsets() const { return offsets_; }

private:
    std::vector<Site> offsets_;
    std::vector<double> cdf_;
};

/// Uniform double in [0, 1) with 53 random bits; portable across standard libraries.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

}  // namespace rangewalk
