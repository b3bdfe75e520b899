#include "roughpath/gaussian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughpath/rng.hpp"

namespace roughpath {

CovarianceModel CovarianceModel::brownian(double horizon) {
    CovarianceModel m;
    m.kind_ = Kind::brownian;
    m.horizon_ = horizon;
    return m;
}

CovarianceModel CovarianceModel::wiener_integral(std::vector<double> poly, double horizon) {
    CovarianceModel m;
    m.kind_ = Kind::wiener_integral;
    m.horizon_ = horizon;
    m.poly_ = std::move(poly);
    if (m.poly_.empty()) throw std::invalid_argument("wiener_integral: empty integrand");
    return m;
}

CovarianceModel CovarianceModel::ou_stationary(double theta, double sigma, double horizon) {
    if (theta <= 0.0 || sigma <= 0.0) throw std::invalid_argument("ou: theta, sigma > 0 required");
    CovarianceModel m;
    m.kind_ = Kind::ou_stationary;
    m.horizon_ = horizon;
    m.theta_ = theta;
    m.sigma_ = sigma;
    return m;
}

CovarianceModel CovarianceModel::ou_zero_start(double theta, double sigma, double horizon) {
    CovarianceModel m = ou_stationary(theta, sigma, horizon);
    m.kind_ = Kind::ou_zero_start;
    return m;
}

CovarianceModel CovarianceModel::bridge(CovarianceModel base) {
    CovarianceModel m;
    m.kind_ = Kind::bridge;
    m.horizon_ = base.horizon();
    m.base_ = std::make_shared<const CovarianceModel>(std::move(base));
    return m;
}

CovarianceModel CovarianceModel::time_change_power(CovarianceModel base, double exponent) {
    if (exponent <= 0.0) throw std::invalid_argument("time_change: exponent must be positive");
    CovarianceModel m;
    m.kind_ = Kind::time_change;
    m.horizon_ = base.horizon();
    m.power_ = exponent;
    m.base_ = std::make_shared<const CovarianceModel>(std::move(base));
    return m;
}

CovarianceModel CovarianceModel::fbm(double hurst, double horizon) {
    if (hurst <= 0.0 || hurst >= 1.0) throw std::invalid_argument("fbm: hurst in (0,1) required");
    CovarianceModel m;
    m.kind_ = Kind::fbm;
    m.horizon_ = horizon;
    m.hurst_ = hurst;
    return m;
}

namespace {

// int_0^u f(r)^2 dr for polynomial f
double poly_square_integral(const std::vector<double>& f, double u) {
    // square the polynomial, then integrate term by term
    std::vector<double> sq(2 * f.size() - 1, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < f.size(); ++j) sq[i + j] += f[i] * f[j];
    double acc = 0.0, up = u;
    for (std::size_t k = 0; k < sq.size(); ++k) {
        acc += sq[k] * up / static_cast<double>(k + 1);
        up *= u;
    }
    return acc;
}

}  // namespace

double CovarianceModel::operator()(double s, double t) const {
    if (s < 0.0 || t < 0.0 || s > horizon_ * (1 + 1e-12) || t > horizon_ * (1 + 1e-12))
        throw std::invalid_argument("CovarianceModel: time out of [0, T]");
    switch (kind_) {
        case Kind::brownian:
            return std::min(s, t);
        case Kind::wiener_integral:
            return poly_square_integral(poly_, std::min(s, t));
        case Kind::ou_stationary:
            return sigma_ * sigma_ / (2.0 * theta_) * std::exp(-theta_ * std::abs(t - s));
        case Kind::ou_zero_start:
            return sigma_ * sigma_ / (2.0 * theta_) *
                   (std::exp(-theta_ * std::abs(t - s)) - std::exp(-theta_ * (s + t)));
        case Kind::bridge: {
            const auto& R = *base_;
            const double T = horizon_;
            return R(s, t) - (t / T) * R(s, T) - (s / T) * R(T, t) +
                   (s * t / (T * T)) * R(T, T);
        }
        case Kind::time_change: {
            // phi(u) = T (u/T)^power, continuous and non-decreasing on [0, T]
            const double T = horizon_;
            auto phi = [&](double u) { return T * std::pow(u / T, power_); };
            return (*base_)(phi(s), phi(t));
        }
        case Kind::fbm:
            return 0.5 * (std::pow(s, 2 * hurst_) + std::pow(t, 2 * hurst_) -
                          std::pow(std::abs(t - s), 2 * hurst_));
    }
    return 0.0;
}

double CovarianceModel::rho() const {
    if (kind_ == Kind::fbm) return 1.0 / (2.0 * hurst_);
    if (kind_ == Kind::bridge || kind_ == Kind::time_change) return base_->rho();
    return 1.0;
}

std::string CovarianceModel::name() const {
    switch (kind_) {
        case Kind::brownian: return "brownian";
        case Kind::wiener_integral: return "wiener_integral";
        case Kind::ou_stationary: return "ou_stationary";
        case Kind::ou_zero_start: return "ou_zero_start";
        case Kind::bridge: return "bridge(" + base_->name() + ")";
        case Kind::time_change: return "time_change(" + base_->name() + ")";
        case Kind::fbm: return "fbm";
    }
    return "?";
}

double evaluate_covariance(const CovarianceModel& model, double s, double t) {
    return model(s, t);
}

CovarianceGrid covariance_grid(const CovarianceModel& model, std::span<const double> grid) {
    std::vector<double> g(grid.begin(), grid.end());
    std::vector<double> vals(g.size() * g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) vals[i * g.size() + j] = model(g[i], g[j]);
    return CovarianceGrid(g, g, std::move(vals));
}

PiecewiseLinearCoupling::PiecewiseLinearCoupling(CovarianceModel model, int mesh_cells)
    : model_(std::move(model)), k_(mesh_cells) {
    if (k_ < 1) throw std::invalid_argument("PiecewiseLinearCoupling: mesh cells >= 1");
    mesh_.resize(k_ + 1);
    for (int i = 0; i <= k_; ++i) mesh_[i] = model_.horizon() * i / k_;
}

PiecewiseLinearCoupling couple_piecewise_linear(const CovarianceModel& model, int mesh_cells) {
    return PiecewiseLinearCoupling(model, mesh_cells);
}

double PiecewiseLinearCoupling::rx(double s, double t) const { return model_(s, t); }

double PiecewiseLinearCoupling::rxy(double s, double t) const {
    // linear interpolation of R_X(s, .) at the mesh nodes around t
    const double T = model_.horizon();
    double pos = std::clamp(t / T, 0.0, 1.0) * k_;
    std::size_t cell = std::min<std::size_t>(static_cast<std::size_t>(pos), k_ - 1);
    double lam = pos - cell;
    return (1.0 - lam) * model_(s, mesh_[cell]) + lam * model_(s, mesh_[cell + 1]);
}

double PiecewiseLinearCoupling::ryy(double s, double t) const {
    const double T = model_.horizon();
    double ps = std::clamp(s / T, 0.0, 1.0) * k_;
    std::size_t cs = std::min<std::size_t>(static_cast<std::size_t>(ps), k_ - 1);
    double ls = ps - cs;
    double pt = std::clamp(t / T, 0.0, 1.0) * k_;
    std::size_t ct = std::min<std::size_t>(static_cast<std::size_t>(pt), k_ - 1);
    double lt = pt - ct;
    return (1.0 - ls) * (1.0 - lt) * model_(mesh_[cs], mesh_[ct]) +
           (1.0 - ls) * lt * model_(mesh_[cs], mesh_[ct + 1]) +
           ls * (1.0 - lt) * model_(mesh_[cs + 1], mesh_[ct]) +
           ls * lt * model_(mesh_[cs + 1], mesh_[ct + 1]);
}

double PiecewiseLinearCoupling::mean_square_gap(double t) const {
    double v = rx(t, t) - 2.0 * rxy(t, t) + ryy(t, t);
    if (v < -1e-12) throw std::runtime_error("mean_square_gap: negative variance");
    return std::max(v, 0.0);
}

double sup_l2_distance(const PiecewiseLinearCoupling& pair, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("sup_l2_distance: empty grid");
    double worst = 0.0;
    for (double t : grid) worst = std::max(worst, pair.mean_square_gap(t));
    for (int i = 0; i < pair.mesh_cells(); ++i) {
        double mid = 0.5 * (pair.mesh()[i] + pair.mesh()[i + 1]);
        worst = std::max(worst, pair.mean_square_gap(mid));
    }
    return std::sqrt(worst);
}

namespace {

// lower-triangular factor of the Gram matrix with the jitter ladder,
// falling over to eigenvalue clipping
Eigen::MatrixXd factor_gram(Eigen::MatrixXd gram, FactorizationInfo* info) {
    const auto m = gram.rows();
    double scale = gram.diagonal().cwiseAbs().maxCoeff();
    if (scale == 0.0) scale = 1.0;
    FactorizationInfo local;
    for (double jitter = 1e-14; jitter <= 1e-8; jitter *= 100.0) {
        Eigen::MatrixXd g = gram;
        g.diagonal().array() += jitter * scale;
        Eigen::LLT<Eigen::MatrixXd> llt(g);
        ++local.jitter_steps;
        if (llt.info() == Eigen::Success) {
            if (info) *info = local;
            return llt.matrixL();
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sample_paths: eigenvalue factorization failed");
    local.eigen_clipped = true;
    local.min_eigenvalue = es.eigenvalues().minCoeff();
    if (local.min_eigenvalue < -1e-6 * scale)
        throw std::runtime_error("sample_paths: Gram matrix not PSD, min eigenvalue " +
                                 std::to_string(local.min_eigenvalue));
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    if (info) *info = local;
    return es.eigenvectors() * lam.asDiagonal();
}

}  // namespace

SampleBatch sample_paths(const CovarianceModel& model, std::span<const double> grid, int dim,
                         int n_samples, std::uint64_t seed, FactorizationInfo* info) {
    if (n_samples < 1) throw std::invalid_argument("sample_paths: n_samples >= 1");
    if (dim < 1) throw std::invalid_argument("sample_paths: dim >= 1");
    const int m = static_cast<int>(grid.size());
    Eigen::MatrixXd gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) gram(i, j) = model(grid[i], grid[j]);
    Eigen::MatrixXd F = factor_gram(std::move(gram), info);

    SampleBatch out;
    out.n_samples = n_samples;
    out.dim = dim;
    out.points = m;
    out.data.resize(static_cast<std::size_t>(n_samples) * m * dim);
    Eigen::VectorXd z(F.cols()), x(m);
    for (int s = 0; s < n_samples; ++s)
        for (int c = 0; c < dim; ++c) {
            auto rng = substream(seed, s, c);
            std::normal_distribution<double> normal;
            for (int i = 0; i < F.cols(); ++i) z(i) = normal(rng);
            x = F * z;
            for (int i = 0; i < m; ++i)
                out.data[(static_cast<std::size_t>(s) * m + i) * dim + c] = x(i);
        }
    return out;
}

CoupledSamples sample_paths(const PiecewiseLinearCoupling& pair, std::span<const double> grid,
                            int dim, int n_samples, std::uint64_t seed, FactorizationInfo* info) {
    CoupledSamples out;
    out.x = sample_paths(pair.model(), grid, dim, n_samples, seed, info);
    out.y = out.x;
    // Y is the piecewise-linear interpolation of the same sample at the mesh:
    // identical Gaussian coordinates, so X and Y coincide at mesh nodes.
    const auto& mesh = pair.mesh();
    const int m = static_cast<int>(grid.size());
    const double T = pair.horizon();
    const int k = pair.mesh_cells();
    // indices of the grid points nearest to each mesh node
    std::vector<int> node_idx(mesh.size());
    for (std::size_t a = 0; a < mesh.size(); ++a) {
        int best = 0;
        for (int i = 1; i < m; ++i)
            if (std::abs(grid[i] - mesh[a]) < std::abs(grid[best] - mesh[a])) best = i;
        node_idx[a] = best;
    }
    for (int s = 0; s < n_samples; ++s)
        for (int i = 0; i < m; ++i) {
            double pos = std::clamp(grid[i] / T, 0.0, 1.0) * k;
            std::size_t cell = std::min<std::size_t>(static_cast<std::size_t>(pos), k - 1);
            double lam = pos - cell;
            for (int c = 0; c < dim; ++c) {
                double lo = out.x.at(s, node_idx[cell], c);
                double hi = out.x.at(s, node_idx[cell + 1], c);
                out.y.data[(static_cast<std::size_t>(s) * m + i) * dim + c] =
                    (1.0 - lam) * lo + lam * hi;
            }
        }
    return out;
}

}  // namespace roughpath
