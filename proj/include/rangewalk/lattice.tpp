#pragma once

#include <cstdlib>

#include "rangewalk/errors.hpp"

namespace rangewalk {

template <class V>
Grid<V>::Grid(int dim, int radius, const V& fill)
    : dim_(dim), radius_(radius), side_(2 * radius + 1), strides_(static_cast<std::size_t>(dim)) {
    if (dim < 1 || radius < 0)
        throw ValidationError("grid needs dim >= 1 and radius >= 0");
    std::ptrdiff_t stride = 1;
    for (int c = dim - 1; c >= 0; --c) {
        strides_[static_cast<std::size_t>(c)] = stride;
        stride *= side_;
    }
    data_.assign(static_cast<std::size_t>(stride), fill);
}

template <class V>
bool Grid<V>::contains(const Site& x) const {
    if (static_cast<int>(x.size()) != dim_) return false;
    for (int v : x)
        if (v < -radius_ || v > radius_) return false;
    return true;
}

template <class V>
std::size_t Grid<V>::index(const Site& x) const {
    std::ptrdiff_t idx = 0;
    for (std::size_t c = 0; c < x.size(); ++c) idx += (x[c] + radius_) * strides_[c];
    return static_cast<std::size_t>(idx);
}

template <class V>
Site Grid<V>::site(std::size_t idx) const {
    Site x(static_cast<std::size_t>(dim_));
    for (int c = dim_ - 1; c >= 0; --c) {
        x[static_cast<std::size_t>(c)] = static_cast<int>(idx % static_cast<std::size_t>(side_)) - radius_;
        idx /= static_cast<std::size_t>(side_);
    }
    return x;
}

}  // namespace rangewalk
