#include "roughpath/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughpath {

PiecewiseLinearPath::PiecewiseLinearPath(std::vector<double> times,
                                         std::vector<std::vector<double>> points)
    : times_(std::move(times)), points_(std::move(points)) {
    if (times_.size() < 2) throw std::invalid_argument("PiecewiseLinearPath: need >= 2 nodes");
    if (times_.size() != points_.size())
        throw std::invalid_argument("PiecewiseLinearPath: times/points length mismatch");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("PiecewiseLinearPath: times must be strictly increasing");
    dim_ = static_cast<int>(points_.front().size());
    if (dim_ < 1) throw std::invalid_argument("PiecewiseLinearPath: dim must be >= 1");
    for (const auto& p : points_)
        if (static_cast<int>(p.size()) != dim_)
            throw std::invalid_argument("PiecewiseLinearPath: inconsistent point dimension");
}

std::vector<double> PiecewiseLinearPath::value(double t) const {
    if (t < t0() || t > t1()) throw std::invalid_argument("PiecewiseLinearPath: time out of range");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t hi = std::min<std::size_t>(times_.size() - 1, it - times_.begin());
    if (hi == 0) hi = 1;
    std::size_t lo = hi - 1;
    double lam = (t - times_[lo]) / (times_[hi] - times_[lo]);
    std::vector<double> out(dim_);
    for (int c = 0; c < dim_; ++c)
        out[c] = (1.0 - lam) * points_[lo][c] + lam * points_[hi][c];
    return out;
}

namespace {

void check_interval(const PiecewiseLinearPath& path, double s, double t) {
    if (!(s < t)) throw std::invalid_argument("signature: need s < t");
    if (s < path.t0() || t > path.t1())
        throw std::invalid_argument("signature: [s,t] outside path domain");
}

// node times of the path strictly inside (s, t), plus s and t
std::vector<double> clipped_breakpoints(const PiecewiseLinearPath& path, double s, double t) {
    std::vector<double> ts{s};
    for (double u : path.times())
        if (u > s && u < t) ts.push_back(u);
    ts.push_back(t);
    return ts;
}

}  // namespace

TruncatedTensor signature_of_path(const PiecewiseLinearPath& path, double s, double t,
                                  int degree) {
    check_interval(path, s, t);
    auto ts = clipped_breakpoints(path, s, t);
    TruncatedTensor sig = TruncatedTensor::identity(path.dim(), degree);
    std::vector<double> prev = path.value(ts[0]);
    std::vector<double> delta(path.dim());
    for (std::size_t i = 1; i < ts.size(); ++i) {
        std::vector<double> cur = path.value(ts[i]);
        for (int c = 0; c < path.dim(); ++c) delta[c] = cur[c] - prev[c];
        sig = tensor_mul(sig, segment_exp(delta, degree));
        prev = std::move(cur);
    }
    return sig;
}

TruncatedTensor riemann_signature_oracle(const PiecewiseLinearPath& path, double s, double t,
                                         int degree, int substeps, RiemannScheme scheme) {
    check_interval(path, s, t);
    if (substeps < 1) throw std::invalid_argument("riemann_signature_oracle: substeps >= 1");
    const int d = path.dim();
    auto ts = clipped_breakpoints(path, s, t);

    // running prefix approximations P[n] ~ X^n_{s, u}; update across one substep:
    //   left:      P[n] += P[n-1] (x) dx
    //   trapezoid: P[n] += (P[n-1] + P'[n-1])/2 (x) dx  with P' the updated prefix
    std::vector<std::vector<double>> P(degree + 1);
    P[0] = {1.0};
    for (int n = 1; n <= degree; ++n) P[n].assign(level_size(d, n), 0.0);

    std::vector<std::vector<double>> Pnew = P;
    std::vector<double> dx(d);
    for (std::size_t seg = 0; seg + 1 < ts.size(); ++seg) {
        std::vector<double> a = path.value(ts[seg]);
        std::vector<double> b = path.value(ts[seg + 1]);
        for (int c = 0; c < d; ++c) dx[c] = (b[c] - a[c]) / substeps;
        for (int step = 0; step < substeps; ++step) {
            if (scheme == RiemannScheme::left_point) {
                for (int n = degree; n >= 1; --n) {
                    const auto& lower = P[n - 1];
                    auto& cur = P[n];
                    for (std::size_t i = 0; i < lower.size(); ++i) {
                        const double li = lower[i];
                        for (int c = 0; c < d; ++c) cur[i * d + c] += li * dx[c];
                    }
                }
            } else {
                // build updated prefix level by level so each level uses the
                // trapezoid average of the one below
                for (int n = 1; n <= degree; ++n) {
                    const auto& lo_old = P[n - 1];
                    const auto& lo_new = Pnew[n - 1];
                    auto& cur = Pnew[n];
                    cur = P[n];
                    for (std::size_t i = 0; i < lo_old.size(); ++i) {
                        const double li = 0.5 * (lo_old[i] + lo_new[i]);
                        for (int c = 0; c < d; ++c) cur[i * d + c] += li * dx[c];
                    }
                }
                for (int n = 1; n <= degree; ++n) P[n] = Pnew[n];
            }
        }
    }

    TruncatedTensor out = TruncatedTensor::identity(d, degree);
    for (int n = 1; n <= degree; ++n) out.level(n) = std::move(P[n]);
    return out;
}

}  // namespace roughpath
