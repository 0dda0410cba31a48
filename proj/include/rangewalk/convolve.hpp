#pragma once

#include <cstddef>
#include <vector>

#include "rangewalk/arith.hpp"
#include "rangewalk/lattice.hpp"
#include "rangewalk/pmf.hpp"

namespace rangewalk {

/// One step of the increment law in the representation of an arithmetic mode.
/// Exact: integer numerators with unit = common denominator D. Float: unit = 1.
template <class V>
struct StepWeights {
    int dim = 1;
    int radius = 0;
    std::vector<Site> offsets;
    std::vector<V> weights;
    V unit = V(1);
};

template <class A>
StepWeights<typename A::value_type> make_step_weights(const IncrementPmf& pmf);

/// out(x) = sum_j w_j * in(x - s_j), reading zero outside the window.
/// Straightforward per-cell reference; kept for testing the parallel path.
template <class V>
void convolve_serial(const Grid<V>& in, const StepWeights<V>& w, Grid<V>& out);

/// Same result as convolve_serial, bit for bit: identical per-cell summation
/// order, parallelized over slabs of the leading coordinate.
template <class V>
void convolve(const Grid<V>& in, const StepWeights<V>& w, Grid<V>& out);

/// Sum of all cells.
template <class V>
V grid_total(const Grid<V>& g);

}  // namespace rangewalk
