#pragma once
#include <span>
#include <vector>

#include "roughpath/control.hpp"
#include "roughpath/path.hpp"
#include "roughpath/tensor.hpp"

namespace roughpath {

// Grid-indexed family of tensor increments satisfying Chen's identity:
// X_{t_i,t_k} = X_{t_i,t_j} (x) X_{t_j,t_k} holds by construction since
// every increment is chained from the stored adjacent ones.
class MultiplicativeFunctional {
public:
    MultiplicativeFunctional(std::vector<double> grid, std::vector<TruncatedTensor> adjacent);

    static MultiplicativeFunctional from_path(const PiecewiseLinearPath& path,
                                              std::span<const double> grid, int degree);
    // lift of the piecewise-linear path through the given node values;
    // values laid out as values[i*dim + c]
    static MultiplicativeFunctional from_values(std::span<const double> grid,
                                                std::span<const double> values, int dim,
                                                int degree);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    std::size_t intervals() const { return adjacent_.size(); }
    const std::vector<double>& grid() const { return grid_; }
    const TruncatedTensor& adjacent(std::size_t i) const { return adjacent_[i]; }
    TruncatedTensor& adjacent_mutable(std::size_t i) { return adjacent_[i]; }

    TruncatedTensor increment(std::size_t i, std::size_t j) const;  // chained product

    // prefix signatures S_{t_0, t_i}; index 0 is the identity
    const std::vector<TruncatedTensor>& prefixes() const;

private:
    std::vector<double> grid_;
    std::vector<TruncatedTensor> adjacent_;
    int dim_;
    int degree_;
    mutable std::vector<TruncatedTensor> prefixes_;  // built on demand
};

// Multiplicative extension by one degree. Each adjacent increment is
// completed to exp(log(.)) in one degree higher, which reproduces the exact
// signature for increments that are lifts of single linear segments; larger
// increments follow by Chen products.
MultiplicativeFunctional lyons_extend(const MultiplicativeFunctional& mf);

// Defect of removing interior point j from the dissection D (indices into
// the grid of mf): the level-(N+1) block of
//   sum_{n=1..N} X^n_{u_{j-1},u_j} (x) X^{N+1-n}_{u_j,u_{j+1}}.
// Returned as a tensor of degree N+1 whose lower levels are zero.
TruncatedTensor point_drop_defect(const MultiplicativeFunctional& mf,
                                  std::span<const std::size_t> dissection, std::size_t j);

// Product of the zero-extended (hatted) increments over consecutive points
// of the dissection, one degree above mf.
TruncatedTensor hatted_product(const MultiplicativeFunctional& mf,
                               std::span<const std::size_t> dissection);

// Index j in 1..L of an interior point with omega(u_{j-1},u_{j+1}) minimal
// (ties to the smallest j); the minimum satisfies the (2/L) omega(s,t) bound.
std::size_t select_drop_point(const Control& omega, std::span<const std::size_t> dissection);

}  // namespace roughpath
