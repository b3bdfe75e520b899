#pragma once
#include <cstdint>
#include <span>
#include <vector>

namespace roughpath {

// Stationary solution of d psi = (d_xx - 1) psi dt + sigma dW on [0, 2pi],
// represented through its Fourier modes (independent stationary OU processes).
struct HeatFieldModel {
    double sigma = 1.0;
    int k_max = 512;     // Fourier truncation |k| <= k_max
    int components = 1;  // value dimension d

    // bound on the dropped series tail at equal times
    double tail_bound() const;
};

struct HeatCovarianceValue {
    double series = 0.0;            // truncated series value
    double closed_form = 0.0;       // K(x-y), meaningful when s == t
    double discrepancy = 0.0;       // |series - closed_form| when s == t
    bool equal_time = false;
};

// covariance E[psi_s(x) psi_t(y)] = scalar x I_d
HeatCovarianceValue heat_covariance(const HeatFieldModel& model, double x, double y, double s,
                                    double t);

// equal-time kernel K(z) = sigma^2 cosh(|z| - pi) / (4 sinh pi), 2pi-periodic
double heat_equal_time_kernel(const HeatFieldModel& model, double z);

struct HeatFieldSamples {
    int n_samples = 0;
    int n_times = 0;
    int points = 0;
    int dim = 0;
    std::vector<double> data;  // [sample][time][point][component]

    double at(int sample, int time, int point, int component) const {
        return data[((static_cast<std::size_t>(sample) * n_times + time) * points + point) * dim +
                    component];
    }
};

// exact sampling of the stationary field at the listed times: every mode
// follows its OU transition exactly, then the Fourier series is summed on
// the space grid
HeatFieldSamples sample_heat_field(const HeatFieldModel& model, std::span<const double> space_grid,
                                   std::span<const double> times, int n_samples,
                                   std::uint64_t seed, int threads = 0);

}  // namespace roughpath
