#pragma once
#include <cstddef>
#include <span>
#include <vector>

namespace roughpath {

// Element of the truncated tensor algebra T^N(R^d): one dense row-major
// block per degree 0..N, block n holding d^n entries.
class TruncatedTensor {
public:
    TruncatedTensor(int dim, int degree);

    static TruncatedTensor identity(int dim, int degree);

    int dim() const { return dim_; }
    int degree() const { return degree_; }

    std::vector<double>& level(int n);
    const std::vector<double>& level(int n) const;

    double scalar() const { return levels_[0][0]; }
    double& scalar() { return levels_[0][0]; }

    bool is_group_like(double tol = 1e-9) const;  // level 0 == 1

    // same dim, levels copied up to min(degree, new_degree), zero-filled above
    TruncatedTensor truncated(int new_degree) const;

private:
    int dim_;
    int degree_;
    std::vector<std::vector<double>> levels_;
};

std::size_t level_size(int dim, int n);

TruncatedTensor tensor_mul(const TruncatedTensor& a, const TruncatedTensor& b);
TruncatedTensor tensor_inv(const TruncatedTensor& a);
TruncatedTensor tensor_add(const TruncatedTensor& a, const TruncatedTensor& b);
TruncatedTensor tensor_scale(const TruncatedTensor& a, double c);

// signature of a single linear segment: level n = v^{(x)n} / n!
TruncatedTensor segment_exp(std::span<const double> v, int degree);

double level_norm(const TruncatedTensor& a, int n);

// log of a group-like element (level 0 == 1), scalar part of the result is 0
TruncatedTensor tensor_log(const TruncatedTensor& a);
// exp of an element with scalar part 0
TruncatedTensor tensor_exp(const TruncatedTensor& a);

}  // namespace roughpath
