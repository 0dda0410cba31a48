#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rangewalk {

/// A point of Z^d. The dimension is the vector length.
using Site = std::vector<int>;

int sup_norm(const Site& x);
int l1_norm(const Site& x);
Site negate(Site x);
Site add(const Site& a, const Site& b);
Site sub(const Site& a, const Site& b);
Site origin(int dim);
Site unit_vector(int dim, int axis, int sign = 1);
std::string to_string(const Site& x);

/// Dense storage over the hypercube [-radius, radius]^dim, row-major with the
/// last coordinate fastest.
template <class V>
class Grid {
public:
    Grid() = default;
    Grid(int dim, int radius, const V& fill = V(0));

    int dim() const { return dim_; }
    int radius() const { return radius_; }
    int side() const { return side_; }
    std::size_t size() const { return data_.size(); }

    bool contains(const Site& x) const;
    std::size_t index(const Site& x) const;
    Site site(std::size_t idx) const;

    V& operator[](std::size_t idx) { return data_[idx]; }
    const V& operator[](std::size_t idx) const { return data_[idx]; }

    V& at(const Site& x) { return data_[index(x)]; }
    const V& at(const Site& x) const { return data_[index(x)]; }

    /// Value at x, or zero outside the window.
    V value_or_zero(const Site& x) const { return contains(x) ? data_[index(x)] : V(0); }

    std::vector<V>& data() { return data_; }
    const std::vector<V>& data() const { return data_; }
    const std::vector<std::ptrdiff_t>& strides() const { return strides_; }

private:
    int dim_ = 0;
    int radius_ = 0;
    int side_ = 1;
    std::vector<std::ptrdiff_t> strides_;
    std::vector<V> data_;
};

/// Number of cells in a window, or SIZE_MAX on overflow.
std::size_t window_cells(int dim, int radius);

}  // namespace rangewalk

#include "rangewalk/lattice.tpp"
