#include "roughpath/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roughpath {

std::size_t level_size(int dim, int n) {
    std::size_t s = 1;
    for (int i = 0; i < n; ++i) s *= static_cast<std::size_t>(dim);
    return s;
}

TruncatedTensor::TruncatedTensor(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 1) throw std::invalid_argument("TruncatedTensor: dim must be >= 1");
    if (degree < 0) throw std::invalid_argument("TruncatedTensor: degree must be >= 0");
    levels_.resize(degree + 1);
    for (int n = 0; n <= degree; ++n) levels_[n].assign(level_size(dim, n), 0.0);
}

TruncatedTensor TruncatedTensor::identity(int dim, int degree) {
    TruncatedTensor t(dim, degree);
    t.scalar() = 1.0;
    return t;
}

std::vector<double>& TruncatedTensor::level(int n) {
    if (n < 0 || n > degree_) throw std::out_of_range("TruncatedTensor::level: n out of range");
    return levels_[n];
}

const std::vector<double>& TruncatedTensor::level(int n) const {
    if (n < 0 || n > degree_) throw std::out_of_range("TruncatedTensor::level: n out of range");
    return levels_[n];
}

bool TruncatedTensor::is_group_like(double tol) const {
    return std::abs(scalar() - 1.0) <= tol;
}

TruncatedTensor TruncatedTensor::truncated(int new_degree) const {
    TruncatedTensor out(dim_, new_degree);
    int upto = std::min(new_degree, degree_);
    for (int n = 0; n <= upto; ++n) out.level(n) = levels_[n];
    return out;
}

namespace {

void check_compatible(const TruncatedTensor& a, const TruncatedTensor& b, const char* op) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
    if (a.degree() != b.degree())
        throw std::invalid_argument(std::string(op) + ": degree mismatch");
}

// out[n] += a[k] (x) b[n-k], row-major concatenation of multi-indices
void accumulate_outer(std::span<const double> a, std::span<const double> b,
                      std::span<double> out) {
    const std::size_t nb = b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        double* o = out.data() + i * nb;
        for (std::size_t j = 0; j < nb; ++j) o[j] += ai * b[j];
    }
}

}  // namespace

TruncatedTensor tensor_mul(const TruncatedTensor& a, const TruncatedTensor& b) {
    check_compatible(a, b, "tensor_mul");
    TruncatedTensor out(a.dim(), a.degree());
    for (int n = 0; n <= a.degree(); ++n) {
        auto& on = out.level(n);
        for (int k = 0; k <= n; ++k) {
            const auto& ak = a.level(k);
            const auto& bk = b.level(n - k);
            if (k == 0) {
                const double s = ak[0];
                if (s != 0.0)
                    for (std::size_t j = 0; j < on.size(); ++j) on[j] += s * bk[j];
            } else if (k == n) {
                const double s = bk[0];
                if (s != 0.0)
                    for (std::size_t j = 0; j < on.size(); ++j) on[j] += s * ak[j];
            } else {
                accumulate_outer(ak, bk, on);
            }
        }
    }
    return out;
}

TruncatedTensor tensor_add(const TruncatedTensor& a, const TruncatedTensor& b) {
    check_compatible(a, b, "tensor_add");
    TruncatedTensor out = a;
    for (int n = 0; n <= a.degree(); ++n) {
        auto& on = out.level(n);
        const auto& bn = b.level(n);
        for (std::size_t j = 0; j < on.size(); ++j) on[j] += bn[j];
    }
    return out;
}

TruncatedTensor tensor_scale(const TruncatedTensor& a, double c) {
    TruncatedTensor out = a;
    for (int n = 0; n <= a.degree(); ++n)
        for (auto& v : out.level(n)) v *= c;
    return out;
}

TruncatedTensor tensor_inv(const TruncatedTensor& a) {
    if (std::abs(a.scalar() - 1.0) > 1e-9)
        throw std::invalid_argument("tensor_inv: not a group element (level 0 != 1)");
    // a = 1 + x, inverse = sum_k (-x)^{(x)k}, truncated Neumann series
    TruncatedTensor x = a;
    x.scalar() = 0.0;
    TruncatedTensor out = TruncatedTensor::identity(a.dim(), a.degree());
    TruncatedTensor pow = TruncatedTensor::identity(a.dim(), a.degree());
    for (int k = 1; k <= a.degree(); ++k) {
        pow = tensor_mul(pow, x);
        out = tensor_add(out, tensor_scale(pow, (k % 2 == 0) ? 1.0 : -1.0));
    }
    return out;
}

TruncatedTensor segment_exp(std::span<const double> v, int degree) {
    const int d = static_cast<int>(v.size());
    TruncatedTensor out = TruncatedTensor::identity(d, degree);
    if (degree >= 1) out.level(1).assign(v.begin(), v.end());
    double factorial = 1.0;
    for (int n = 2; n <= degree; ++n) {
        factorial *= n;
        const auto& prev = out.level(n - 1);
        auto& cur = out.level(n);
        // v^{(x)n} built from v^{(x)(n-1)}, then divide by n at the end
        for (std::size_t i = 0; i < prev.size(); ++i)
            for (int j = 0; j < d; ++j) cur[i * d + j] = prev[i] * v[j];
        const double c = static_cast<double>(n - 1) + 1.0;  // prev already holds /(n-1)!
        for (auto& e : cur) e /= c;
    }
    return out;
}

double level_norm(const TruncatedTensor& a, int n) {
    const auto& lv = a.level(n);  // throws if out of range
    double s = 0.0;
    for (double v : lv) s += v * v;
    return std::sqrt(s);
}

TruncatedTensor tensor_log(const TruncatedTensor& a) {
    if (std::abs(a.scalar() - 1.0) > 1e-9)
        throw std::invalid_argument("tensor_log: not a group element (level 0 != 1)");
    TruncatedTensor x = a;
    x.scalar() = 0.0;
    TruncatedTensor out(a.dim(), a.degree());
    TruncatedTensor pow = TruncatedTensor::identity(a.dim(), a.degree());
    for (int k = 1; k <= a.degree(); ++k) {
        pow = tensor_mul(pow, x);
        const double c = ((k % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(k);
        out = tensor_add(out, tensor_scale(pow, c));
    }
    return out;
}

TruncatedTensor tensor_exp(const TruncatedTensor& a) {
    if (a.scalar() != 0.0)
        throw std::invalid_argument("tensor_exp: scalar part must be 0");
    TruncatedTensor out = TruncatedTensor::identity(a.dim(), a.degree());
    TruncatedTensor pow = TruncatedTensor::identity(a.dim(), a.degree());
    double factorial = 1.0;
    for (int k = 1; k <= a.degree(); ++k) {
        pow = tensor_mul(pow, a);
        factorial *= k;
        out = tensor_add(out, tensor_scale(pow, 1.0 / factorial));
    }
    return out;
}

}  // namespace roughpath
