#pragma once
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "roughpath/variation.hpp"

namespace roughpath {

// Closed-form covariance kernels R(s,t) for one scalar component; a process
// in R^d uses d independent copies.
class CovarianceModel {
public:
    enum class Kind {
        brownian,
        wiener_integral,  // X_t = int_0^t f dB with polynomial f
        ou_stationary,
        ou_zero_start,
        bridge,       // base minus (t/T) * base(T)
        time_change,  // base at phi(s), phi(t)
        fbm,
    };

    static CovarianceModel brownian(double horizon = 1.0);
    static CovarianceModel wiener_integral(std::vector<double> poly_coeffs, double horizon = 1.0);
    static CovarianceModel ou_stationary(double theta, double sigma, double horizon = 1.0);
    static CovarianceModel ou_zero_start(double theta, double sigma, double horizon = 1.0);
    static CovarianceModel bridge(CovarianceModel base);
    static CovarianceModel time_change_power(CovarianceModel base, double exponent);
    static CovarianceModel fbm(double hurst, double horizon = 1.0);

    Kind kind() const { return kind_; }
    double horizon() const { return horizon_; }
    double hurst() const { return hurst_; }

    double operator()(double s, double t) const;  // evaluate_covariance

    // covariance rho-variation regime: 1/(2H) for fbm, 1 otherwise
    double rho() const;

    std::string name() const;

private:
    CovarianceModel() = default;
    Kind kind_ = Kind::brownian;
    double horizon_ = 1.0;
    double theta_ = 1.0, sigma_ = 1.0, hurst_ = 0.5, power_ = 1.0;
    std::vector<double> poly_;
    std::shared_ptr<const CovarianceModel> base_;
};

double evaluate_covariance(const CovarianceModel& model, double s, double t);

CovarianceGrid covariance_grid(const CovarianceModel& model, std::span<const double> grid);

// Joint law of (X, Y) with Y = X^{(k)}, the piecewise-linear interpolation of
// X at k uniform mesh cells. All blocks follow from R_X by interpolation.
class PiecewiseLinearCoupling {
public:
    PiecewiseLinearCoupling(CovarianceModel model, int mesh_cells);

    const CovarianceModel& model() const { return model_; }
    int mesh_cells() const { return k_; }
    const std::vector<double>& mesh() const { return mesh_; }
    double horizon() const { return model_.horizon(); }

    double rx(double s, double t) const;   // E[X_s X_t]
    double rxy(double s, double t) const;  // E[X_s Y_t]
    double ryy(double s, double t) const;  // E[Y_s Y_t]
    double mean_square_gap(double t) const;  // E[(X_t - Y_t)^2], clamped at -1e-12

private:
    CovarianceModel model_;
    int k_;
    std::vector<double> mesh_;
};

PiecewiseLinearCoupling couple_piecewise_linear(const CovarianceModel& model, int mesh_cells);

// max over the grid, refined by mesh mid-cell points, of |X_t - Y_t|_{L2}
double sup_l2_distance(const PiecewiseLinearCoupling& pair, std::span<const double> grid);

struct SampleBatch {
    int n_samples = 0;
    int dim = 0;
    int points = 0;
    std::vector<double> data;  // [sample][point][component]

    double at(int sample, int point, int component) const {
        return data[(static_cast<std::size_t>(sample) * points + point) * dim + component];
    }
};

struct FactorizationInfo {
    int jitter_steps = 0;        // ladder steps actually used
    bool eigen_clipped = false;  // fell back to eigenvalue clipping
    double min_eigenvalue = 0.0;
};

// Exact joint Gaussian samples on the grid via a symmetric factorization of
// the Gram matrix (relative jitter ladder 1e-14 -> 1e-8, then eigenvalue
// clipping). Per-sample streams derive from (seed, sample, component).
SampleBatch sample_paths(const CovarianceModel& model, std::span<const double> grid, int dim,
                         int n_samples, std::uint64_t seed, FactorizationInfo* info = nullptr);

struct CoupledSamples {
    SampleBatch x;
    SampleBatch y;  // piecewise-linear interpolation of x at the mesh
};

CoupledSamples sample_paths(const PiecewiseLinearCoupling& pair, std::span<const double> grid,
                            int dim, int n_samples, std::uint64_t seed,
                            FactorizationInfo* info = nullptr);

}  // namespace roughpath
