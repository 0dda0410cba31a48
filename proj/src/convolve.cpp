#include "rangewalk/convolve.hpp"

#include <cstdlib>

#include "rangewalk/errors.hpp"

namespace rangewalk {

template <>
StepWeights<mpz_class> make_step_weights<ExactArith>(const IncrementPmf& pmf) {
    StepWeights<mpz_class> w;
    w.dim = pmf.dim();
    w.radius = pmf.support_radius();
    for (const auto& a : pmf.atoms()) w.offsets.push_back(a.offset);
    w.weights = pmf.numerators();
    w.unit = pmf.denominator();
    return w;
}

template <>
StepWeights<double> make_step_weights<FloatArith>(const IncrementPmf& pmf) {
    StepWeights<double> w;
    w.dim = pmf.dim();
    w.radius = pmf.support_radius();
    for (const auto& a : pmf.atoms()) {
        w.offsets.push_back(a.offset);
        w.weights.push_back(a.weight.get_d());
    }
    w.unit = 1.0;
    return w;
}

namespace {

template <class V>
void check_shapes(const Grid<V>& in, const StepWeights<V>& w, const Grid<V>& out) {
    if (in.dim() != w.dim || out.dim() != in.dim() || out.radius() != in.radius())
        throw ValidationError("convolve: grid and step shapes disagree");
}

inline void accumulate(mpz_class& acc, const mpz_class& w, const mpz_class& v) {
    if (sgn(v) != 0) mpz_addmul(acc.get_mpz_t(), w.get_mpz_t(), v.get_mpz_t());
}

inline void accumulate(double& acc, double w, double v) { acc += w * v; }

}  // namespace

template <class V>
void convolve_serial(const Grid<V>& in, const StepWeights<V>& w, Grid<V>& out) {
    check_shapes(in, w, out);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Site x = out.site(i);
        V acc(0);
        for (std::size_t j = 0; j < w.offsets.size(); ++j) {
            const Site y = sub(x, w.offsets[j]);
            if (in.contains(y)) accumulate(acc, w.weights[j], in.at(y));
        }
        out[i] = acc;
    }
}

template <class V>
void convolve(const Grid<V>& in, const StepWeights<V>& w, Grid<V>& out) {
    check_shapes(in, w, out);
    const int dim = in.dim();
    const int R = in.radius();
    const int side = in.side();
    const auto& strides = in.strides();
    const std::size_t nsteps = w.offsets.size();

    std::vector<std::ptrdiff_t> lin(nsteps, 0);
    for (std::size_t j = 0; j < nsteps; ++j)
        for (int c = 0; c < dim; ++c)
            lin[j] += w.offsets[j][static_cast<std::size_t>(c)] * strides[static_cast<std::size_t>(c)];

    const std::size_t slab = in.size() / static_cast<std::size_t>(side);
    const int r = w.radius;

#pragma omp parallel for schedule(static)
    for (int lead = 0; lead < side; ++lead) {
        std::vector<int> coord(static_cast<std::size_t>(dim), -R);
        coord[0] = lead - R;
        const std::size_t base = static_cast<std::size_t>(lead) * slab;
        for (std::size_t k = 0; k < slab; ++k) {
            const std::size_t i = base + k;
            bool interior = true;
            for (int c = 0; c < dim; ++c) {
                const int v = coord[static_cast<std::size_t>(c)];
                if (v < -R + r || v > R - r) { interior = false; break; }
            }
            V acc(0);
            for (std::size_t j = 0; j < nsteps; ++j) {
                if (!interior) {
                    bool inside = true;
                    for (int c = 0; c < dim; ++c) {
                        const int y = coord[static_cast<std::size_t>(c)] - w.offsets[j][static_cast<std::size_t>(c)];
                        if (y < -R || y > R) { inside = false; break; }
                    }
                    if (!inside) continue;
                }
                accumulate(acc, w.weights[j], in[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) - lin[j])]);
            }
            out[i] = std::move(acc);
            for (int c = dim - 1; c >= 1; --c) {
                if (++coord[static_cast<std::size_t>(c)] <= R) break;
                coord[static_cast<std::size_t>(c)] = -R;
            }
        }
    }
}

template <class V>
V grid_total(const Grid<V>& g) {
    V s(0);
    for (const auto& v : g.data()) s += v;
    return s;
}

template void convolve_serial<mpz_class>(const Grid<mpz_class>&, const StepWeights<mpz_class>&, Grid<mpz_class>&);
template void convolve_serial<double>(const Grid<double>&, const StepWeights<double>&, Grid<double>&);
template void convolve<mpz_class>(const Grid<mpz_class>&, const StepWeights<mpz_class>&, Grid<mpz_class>&);
template void convolve<double>(const Grid<double>&, const StepWeights<double>&, Grid<double>&);
template mpz_class grid_total<mpz_class>(const Grid<mpz_class>&);
template double grid_total<double>(const Grid<double>&);

}  // namespace rangewalk
