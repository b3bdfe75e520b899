#include "roughpath/heat.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "roughpath/rng.hpp"

namespace roughpath {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double HeatFieldModel::tail_bound() const {
    return sigma * sigma / (4.0 * std::numbers::pi) * 2.0 / k_max;
}

double heat_equal_time_kernel(const HeatFieldModel& model, double z) {
    double d = std::fmod(std::abs(z), two_pi);
    d = std::min(d, two_pi - d);  // wrap into [0, pi]
    return model.sigma * model.sigma * std::cosh(d - std::numbers::pi) /
           (4.0 * std::sinh(std::numbers::pi));
}

HeatCovarianceValue heat_covariance(const HeatFieldModel& model, double x, double y, double s,
                                    double t) {
    if (x < 0.0 || x > two_pi || y < 0.0 || y > two_pi)
        throw std::invalid_argument("heat_covariance: space points must lie in [0, 2pi]");
    const double tau = std::abs(t - s);
    double acc = std::exp(-tau);  // k = 0 term
    for (int k = 1; k <= model.k_max; ++k) {
        const double lam = 1.0 + static_cast<double>(k) * k;
        acc += 2.0 * std::cos(k * (x - y)) / lam * std::exp(-lam * tau);
    }
    HeatCovarianceValue out;
    out.series = model.sigma * model.sigma / (4.0 * std::numbers::pi) * acc;
    out.equal_time = (s == t);
    if (out.equal_time) {
        out.closed_form = heat_equal_time_kernel(model, x - y);
        out.discrepancy = std::abs(out.series - out.closed_form);
    }
    return out;
}

HeatFieldSamples sample_heat_field(const HeatFieldModel& model, std::span<const double> space_grid,
                                   std::span<const double> times, int n_samples,
                                   std::uint64_t seed, int threads) {
    if (n_samples < 1) throw std::invalid_argument("sample_heat_field: n_samples >= 1");
    if (times.empty() || space_grid.empty())
        throw std::invalid_argument("sample_heat_field: empty grid");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("sample_heat_field: times must be increasing");
    for (double x : space_grid)
        if (x < 0.0 || x > two_pi)
            throw std::invalid_argument("sample_heat_field: space grid must lie in [0, 2pi]");

    const int K = model.k_max;
    const int n_modes = 2 * K + 1;
    const int npts = static_cast<int>(space_grid.size());
    const int ntimes = static_cast<int>(times.size());
    const int d = model.components;

    // basis table e_k(x), modes ordered k = -K..K
    std::vector<double> basis(static_cast<std::size_t>(n_modes) * npts);
    for (int mi = 0; mi < n_modes; ++mi) {
        const int k = mi - K;
        for (int p = 0; p < npts; ++p) {
            double v;
            if (k > 0)
                v = std::sin(k * space_grid[p]) / std::sqrt(std::numbers::pi);
            else if (k == 0)
                v = 1.0 / std::sqrt(two_pi);
            else
                v = std::cos(k * space_grid[p]) / std::sqrt(std::numbers::pi);
            basis[static_cast<std::size_t>(mi) * npts + p] = v;
        }
    }

    HeatFieldSamples out;
    out.n_samples = n_samples;
    out.n_times = ntimes;
    out.points = npts;
    out.dim = d;
    out.data.assign(static_cast<std::size_t>(n_samples) * ntimes * npts * d, 0.0);

    auto run_sample = [&](int s) {
        std::vector<double> modes(ntimes);
        for (int c = 0; c < d; ++c) {
            for (int mi = 0; mi < n_modes; ++mi) {
                const int k = mi - K;
                const double lam = 1.0 + static_cast<double>(k) * k;
                const double stat_sd = model.sigma / std::sqrt(2.0 * lam);
                auto rng = substream(seed, s, c, static_cast<std::uint64_t>(mi));
                std::normal_distribution<double> normal;
                double prev_t = times[0];
                modes[0] = stat_sd * normal(rng);
                for (int ti = 1; ti < ntimes; ++ti) {
                    const double a = std::exp(-lam * (times[ti] - prev_t));
                    const double csd = stat_sd * std::sqrt(1.0 - a * a);
                    modes[ti] = a * modes[ti - 1] + csd * normal(rng);
                    prev_t = times[ti];
                }
                const double* bs = basis.data() + static_cast<std::size_t>(mi) * npts;
                for (int ti = 0; ti < ntimes; ++ti) {
                    double* dst =
                        out.data.data() +
                        ((static_cast<std::size_t>(s) * ntimes + ti) * npts) * d + c;
                    const double mv = modes[ti];
                    for (int p = 0; p < npts; ++p) dst[static_cast<std::size_t>(p) * d] += mv * bs[p];
                }
            }
        }
    };

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads <= 1 || n_samples == 1) {
        for (int s = 0; s < n_samples; ++s) run_sample(s);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] {
                for (int s = t; s < n_samples; s += nthreads) run_sample(s);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace roughpath
