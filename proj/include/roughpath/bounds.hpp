#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "roughpath/control.hpp"
#include "roughpath/functional.hpp"
#include "roughpath/gaussian.hpp"
#include "roughpath/variation.hpp"

namespace roughpath {

// Exponent bookkeeping: from (rho, gamma, eta) the derived parameters
//   rho' = (1+eta) rho,  p = 2(1+2 eta) rho,
//   gamma' = (1+eta) gamma,  gamma'' = (1+2 eta) gamma.
struct BoundParameters {
    double rho = 1.0;
    double gamma = 1.0;
    double eta = 0.1;
    double sigma_metric = 0.0;  // 0 = unset
    double delta = 0.0;
    double epsilon = 0.0;
    int levels = 3;

    double rho_prime = 0.0, p = 0.0, gamma_prime = 0.0, gamma_dprime = 0.0;

    static BoundParameters make(double rho, double gamma, double eta, double sigma_metric = 0.0,
                                int levels = 3, double delta = 0.0, double epsilon = 0.0);

    double frac_p() const;                 // {p} = p - floor(p)
    double theta_n(int n) const;           // n (1/p - 1/(2 gamma'')) - (1-{p})/p
    bool case2_regime() const;             // 1/(2 gamma) + 1/rho <= 1
    double inv_p_of_level(int n) const;    // 1/p(n) = 1/(2 gamma') + (n-1)/p
};

enum class YoungEvaluation { lower_left, corner_average };

// discrete 2D Young sum: sum over grid cells of f(eval point) * g(cell
// rectangular increment); both grids must share axes
double young_2d_sum(const CovarianceGrid& f, const CovarianceGrid& g, const GridRect& r = {},
                    YoungEvaluation eval = YoungEvaluation::lower_left);

// Exact L2 norms of the level-2 difference between the lifts of the coupled
// grid processes (X, Y): diagonal components via Gaussian fourth moments,
// off-diagonal via exact 2D sums of the bilinear grid covariances.
struct SecondLevelL2 {
    double diag = 0.0;      // |X^{2,(i,i)} - Y^{2,(i,i)}|_{L2}
    double off_diag = 0.0;  // |X^{2,(i,j)} - Y^{2,(i,j)}|_{L2}, i != j

    double tensor_norm(int dim) const;  // Frobenius norm of the d x d block
};

SecondLevelL2 second_level_l2_exact(const PiecewiseLinearCoupling& pair,
                                    std::span<const double> grid, double s, double t);

// scaling skeleton of the level-1/2 estimates:
// eps_raw^{1-rho/gamma} * omega_st^{1/(2 gamma) + (n-1)/(2 rho)}
double level12_bound_rhs(const BoundParameters& params, double omega_st, double eps_raw, int n);

struct ThirdLevelBound {
    int case_id = 0;  // 1, 2, 3 by the sign of 1/(2 gamma') + 2/p - 1
    double value = 0.0;
    bool assumption_42 = false;     // eps < omega_st^{1/p - 1/(2 gamma')}
    double raw_two_sum = 0.0;       // two-sum form, 0 when assumption 4.2 fails
    long long raw_integer = 0;      // the integer N of the split
};

ThirdLevelBound third_level_bound(const BoundParameters& params, double omega_st, double omega_0T,
                                  double eps);

struct LevelNBound {
    int case_id = 0;
    double value = 0.0;
    bool assumption_42 = false;
};

LevelNBound level_n_bound(const BoundParameters& params, double omega_st, double omega_0T,
                          double eps, int n);

struct MainTheoremExponent {
    int case_id = 0;
    double zeta = 0.0;
};

MainTheoremExponent main_theorem_exponent(double rho, double gamma, double delta);

double wong_zakai_rate_predicted(double rho, double delta);

// random-control construction from the level-1/2 p-variation functionals:
// omega(s,t) = sum_{n=1,2} [pvar_X^n + pvar_Y^n + eps^{-p(n)} pvar_{X-Y}^n]
Control build_random_control(const MultiplicativeFunctional& X,
                             const MultiplicativeFunctional& Y, const BoundParameters& params);

}  // namespace roughpath
