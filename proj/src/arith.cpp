#include "rangewalk/arith.hpp"

#include <cstdio>

namespace rangewalk {

std::string FloatArith::to_string(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", s);
    return buf;
}

bool use_exact(ArithMode mode, int dim, std::size_t cells) {
    switch (mode) {
        case ArithMode::Exact: return true;
        case ArithMode::Float: return false;
        case ArithMode::Auto: break;
    }
    return dim <= 2 || cells <= kExactCellBudget;
}

}  // namespace rangewalk
