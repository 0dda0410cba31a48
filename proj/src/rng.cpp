#include "rangewalk/rng.hpp"

#include <algorithm>

namespace rangewalk {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

StepSampler::StepSampler(const IncrementPmf& pmf) {
    double acc = 0.0;
    for (const auto& a : pmf.atoms()) {
        offsets_.push_back(a.offset);
        acc += a.weight.get_d();
        cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;
}

std::size_t StepSampler::index(Engine& eng) const {
    const double u = uniform01(eng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                              static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

const Site& StepSampler::operator()(Engine& eng) const { return offsets_[index(eng)]; }

}  // namespace rangewalk
