#pragma once
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "roughpath/control.hpp"
#include "roughpath/functional.hpp"

namespace roughpath {

// Two-parameter grid function f(s_i, t_j), e.g. a covariance on a grid.
class CovarianceGrid {
public:
    CovarianceGrid(std::vector<double> s_grid, std::vector<double> t_grid,
                   std::vector<double> values);  // row-major (s index major)

    const std::vector<double>& s_grid() const { return s_grid_; }
    const std::vector<double>& t_grid() const { return t_grid_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * t_grid_.size() + j]; }

    // rectangular increment over [s_a, s_b] x [t_c, t_d] (node indices)
    double rect(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const;

    bool square() const;  // s_grid == t_grid

private:
    std::vector<double> s_grid_, t_grid_;
    std::vector<double> values_;
};

// inclusive node-index ranges; defaults to the full grid
struct GridRect {
    std::size_t s_lo = 0, s_hi = 0, t_lo = 0, t_hi = 0;
    bool full = true;
};

struct Variation2DResult {
    double value = 0.0;
    bool exact = true;      // exhaustive enumeration was feasible
    bool converged = true;  // coordinate ascent reached a fixed point
    int iterations = 0;
};

// sup of |f(A)| over sub-rectangles of the range
double v_infinity_2d(const CovarianceGrid& f, const GridRect& r = {});

// sup over product dissections of (sum |f(cell)|^rho)^{1/rho}; exhaustive for
// <= 8 interior points per axis, coordinate-ascent lower bound otherwise
Variation2DResult variation_2d(const CovarianceGrid& f, double rho, const GridRect& r = {});

// both sides of the interpolation inequality
// V_{p'} <= V_inf^{1-p/p'} V_p^{p/p'}; returns {lhs, rhs}
std::pair<double, double> interpolation_bound(const CovarianceGrid& f, double p, double p_prime,
                                              const GridRect& r = {});

// omega(s,t) := V_{rho'}(f; [s,t]^2)^{rho'} on every grid pair (square grids)
Control build_control_from_2dvar(const CovarianceGrid& f, double rho, double rho_prime);

// exact supremum over grid partitions of sum |X^n_{t_i,t_{i+1}}|^{p/n},
// raised to n/p; dynamic programming over all O(L^2) pair increments
double p_variation_level(const MultiplicativeFunctional& mf, int n, double p);

// max_{n<=N} sup_P (sum |X^n - Y^n|^{sigma/n})^{n/sigma} on a common grid
double rho_pvar_distance(const MultiplicativeFunctional& X, const MultiplicativeFunctional& Y,
                         int N, double sigma);
// per-level parts of the max (diagnostics / experiments)
std::vector<double> rho_pvar_distance_levels(const MultiplicativeFunctional& X,
                                             const MultiplicativeFunctional& Y, int N,
                                             double sigma);

// reference implementations enumerating all 2^(L-1) partitions; grids are
// limited to 16 points (oracle use only)
double p_variation_level_exhaustive(const MultiplicativeFunctional& mf, int n, double p);
double rho_pvar_distance_exhaustive(const MultiplicativeFunctional& X,
                                    const MultiplicativeFunctional& Y, int N, double sigma);

// max over grid pairs s<t of |X^n_{s,t}| / (t-s)^exponent
double holder_ratio(const MultiplicativeFunctional& mf, int n, double exponent);

struct KolmogorovBound {
    double chain_sum = 0.0;   // 2 sum_k K_k / |D_k|^{n beta'}
    double holder_sup = 0.0;  // sup over dyadic pairs of |X^n| / (t-s)^{n beta'}
    std::vector<double> level_max;  // K_k for k = 1..depth
};

// requires a uniform dyadic grid on [0,1] (2^depth cells)
KolmogorovBound kolmogorov_chain_bound(const MultiplicativeFunctional& mf, int n,
                                       double beta_prime);

// chaining decomposition of [lo, hi] (grid indices, grid of 2^depth cells)
// into dyadic cells, at most two per dyadic level; returns the breakpoints
std::vector<std::size_t> dyadic_chain_partition(std::size_t lo, std::size_t hi, int depth);

}  // namespace roughpath
