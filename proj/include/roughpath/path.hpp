#pragma once
#include <span>
#include <vector>

#include "roughpath/tensor.hpp"

namespace roughpath {

// Continuous piecewise-linear path in R^d given by node times and values.
class PiecewiseLinearPath {
public:
    PiecewiseLinearPath(std::vector<double> times, std::vector<std::vector<double>> points);

    int dim() const { return dim_; }
    std::size_t nodes() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<std::vector<double>>& points() const { return points_; }
    double t0() const { return times_.front(); }
    double t1() const { return times_.back(); }

    std::vector<double> value(double t) const;  // linear interpolation, t in [t0, t1]

private:
    std::vector<double> times_;
    std::vector<std::vector<double>> points_;
    int dim_;
};

// Chen product of segment exponentials over [s, t]; clipped node values are
// interpolated linearly.
TruncatedTensor signature_of_path(const PiecewiseLinearPath& path, double s, double t,
                                  int degree);

enum class RiemannScheme {
    left_point,  // strictly nested left sums, O(1/substeps)
    trapezoid,   // averaged endpoint sums, O(1/substeps^2)
};

// Independent nested Riemann-sum approximation of the iterated integrals over
// [s, t]. substeps counts subdivisions per path segment; no Chen machinery.
TruncatedTensor riemann_signature_oracle(const PiecewiseLinearPath& path, double s, double t,
                                         int degree, int substeps,
                                         RiemannScheme scheme = RiemannScheme::left_point);

}  // namespace roughpath
