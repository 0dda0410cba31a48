#include "rangewalk/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace rangewalk {

int sup_norm(const Site& x) {
    int m = 0;
    for (int v : x) m = std::max(m, std::abs(v));
    return m;
}

int l1_norm(const Site& x) {
    int s = 0;
    for (int v : x) s += std::abs(v);
    return s;
}

Site negate(Site x) {
    for (int& v : x) v = -v;
    return x;
}

Site add(const Site& a, const Site& b) {
    Site r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Site sub(const Site& a, const Site& b) {
    Site r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Site origin(int dim) { return Site(static_cast<std::size_t>(dim), 0); }

Site unit_vector(int dim, int axis, int sign) {
    Site e = origin(dim);
    e[static_cast<std::size_t>(axis)] = sign;
    return e;
}

std::string to_string(const Site& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(x[i]);
    }
    return s + ")";
}

std::size_t window_cells(int dim, int radius) {
    const std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
    std::size_t cells = 1;
    for (int c = 0; c < dim; ++c) {
        if (cells > std::numeric_limits<std::size_t>::max() / side)
            return std::numeric_limits<std::size_t>::max();
        cells *= side;
    }
    return cells;
}

}  // namespace rangewalk
