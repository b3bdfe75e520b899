#include "roughpath/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughpath {

BoundParameters BoundParameters::make(double rho, double gamma, double eta, double sigma_metric,
                                      int levels, double delta, double epsilon) {
    if (rho < 1.0 || rho >= 1.5)
        throw std::invalid_argument("BoundParameters: rho must lie in [1, 3/2)");
    if (gamma < rho) throw std::invalid_argument("BoundParameters: gamma >= rho required");
    if (1.0 / gamma + 1.0 / rho <= 1.0)
        throw std::invalid_argument("BoundParameters: 1/gamma + 1/rho > 1 required");
    if (eta <= 0.0) throw std::invalid_argument("BoundParameters: eta must be positive");
    if (levels < 1) throw std::invalid_argument("BoundParameters: levels >= 1");
    BoundParameters b;
    b.rho = rho;
    b.gamma = gamma;
    b.eta = eta;
    b.sigma_metric = sigma_metric;
    b.delta = delta;
    b.epsilon = epsilon;
    b.levels = levels;
    b.rho_prime = (1.0 + eta) * rho;
    b.p = 2.0 * (1.0 + 2.0 * eta) * rho;
    b.gamma_prime = (1.0 + eta) * gamma;
    b.gamma_dprime = (1.0 + 2.0 * eta) * gamma;
    if (sigma_metric > 0.0 && sigma_metric < 2.0 * b.gamma_dprime)
        throw std::invalid_argument("BoundParameters: sigma >= 2 gamma'' required");
    if (b.case2_regime())
        for (int n = 1; n <= levels; ++n)
            if (b.theta_n(n) <= 0.0)
                throw std::invalid_argument("BoundParameters: theta_n must stay positive");
    return b;
}

double BoundParameters::frac_p() const { return p - std::floor(p); }

double BoundParameters::theta_n(int n) const {
    return n * (1.0 / p - 1.0 / (2.0 * gamma_dprime)) - (1.0 - frac_p()) / p;
}

bool BoundParameters::case2_regime() const { return 1.0 / (2.0 * gamma) + 1.0 / rho <= 1.0; }

double BoundParameters::inv_p_of_level(int n) const {
    return 1.0 / (2.0 * gamma_prime) + (n - 1.0) / p;
}

double young_2d_sum(const CovarianceGrid& f, const CovarianceGrid& g, const GridRect& rect,
                    YoungEvaluation eval) {
    if (f.s_grid().size() != g.s_grid().size() || f.t_grid().size() != g.t_grid().size())
        throw std::invalid_argument("young_2d_sum: grid mismatch");
    for (std::size_t i = 0; i < f.s_grid().size(); ++i)
        if (f.s_grid()[i] != g.s_grid()[i])
            throw std::invalid_argument("young_2d_sum: grid mismatch");
    GridRect r = rect;
    if (r.full) {
        r = GridRect{0, f.s_grid().size() - 1, 0, f.t_grid().size() - 1, false};
    }
    double acc = 0.0;
    for (std::size_t i = r.s_lo; i < r.s_hi; ++i)
        for (std::size_t j = r.t_lo; j < r.t_hi; ++j) {
            double fv;
            if (eval == YoungEvaluation::lower_left)
                fv = f(i, j);
            else
                fv = 0.25 * (f(i, j) + f(i + 1, j) + f(i, j + 1) + f(i + 1, j + 1));
            acc += fv * g.rect(i, i + 1, j, j + 1);
        }
    return acc;
}

double SecondLevelL2::tensor_norm(int dim) const {
    return std::sqrt(dim * diag * diag + dim * (dim - 1.0) * off_diag * off_diag);
}

namespace {

// E[ int_s^t A_{s,u} dB_u int_s^t C_{s,v} dD_v ] for jointly Gaussian
// piecewise-linear grid processes with (A,C) independent of (B,D):
//   sum_{cells} E[A_{s,mid_i} C_{s,mid_j}] * E[dB_i dD_j],
// exact because the covariance blocks are bilinear per cell.
double pairing_sum(std::span<const double> g, const std::vector<double>& rac,
                   const std::vector<double>& rbd) {
    const std::size_t m = g.size();
    auto R = [&](const std::vector<double>& tab, std::size_t i, std::size_t j) {
        return tab[i * m + j];
    };
    // F(u,v) = E[A_{s,u} C_{s,v}] = rac(u,v) - rac(u,s) - rac(s,v) + rac(s,s)
    auto F = [&](std::size_t i, std::size_t j) {
        return R(rac, i, j) - R(rac, i, 0) - R(rac, 0, j) + R(rac, 0, 0);
    };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = 0; j + 1 < m; ++j) {
            const double fmid = 0.25 * (F(i, j) + F(i + 1, j) + F(i, j + 1) + F(i + 1, j + 1));
            const double ginc =
                R(rbd, i + 1, j + 1) - R(rbd, i, j + 1) - R(rbd, i + 1, j) + R(rbd, i, j);
            acc += fmid * ginc;
        }
    return acc;
}

}  // namespace

SecondLevelL2 second_level_l2_exact(const PiecewiseLinearCoupling& pair,
                                    std::span<const double> grid, double s, double t) {
    if (!(s < t)) throw std::invalid_argument("second_level_l2_exact: need s < t");
    std::vector<double> g;
    for (double u : grid)
        if (u >= s - 1e-12 && u <= t + 1e-12) g.push_back(u);
    if (g.size() < 2 || std::abs(g.front() - s) > 1e-9 || std::abs(g.back() - t) > 1e-9)
        throw std::invalid_argument("second_level_l2_exact: s and t must be grid points");

    const std::size_t m = g.size();
    std::vector<double> rxx(m * m), rxy(m * m), ryy(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            rxx[i * m + j] = pair.rx(g[i], g[j]);
            rxy[i * m + j] = pair.rxy(g[i], g[j]);
            ryy[i * m + j] = pair.ryy(g[i], g[j]);
        }
    auto combine = [&](double cx, double cxy, double cyx, double cy) {
        std::vector<double> out(m * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                out[i * m + j] = cx * rxx[i * m + j] + cxy * rxy[i * m + j] +
                                 cyx * rxy[j * m + i] + cy * ryy[i * m + j];
        return out;
    };
    std::vector<double> rzz = combine(1, -1, -1, 1);   // E[Z_u Z_v]
    std::vector<double> rzy = combine(0, 1, 0, -1);    // E[Z_u Y_v]
    std::vector<double> rxz = combine(1, -1, 0, 0);    // E[X_u Z_v]

    // off-diagonal (i != j): D = int Z^i dX^j + int Y^i dZ^j, the two factors
    // of each pairing independent across components
    double ms = pairing_sum(g, rzz, rxx) + 2.0 * pairing_sum(g, rzy, rxz) +
                pairing_sum(g, ryy, rzz);

    SecondLevelL2 out;
    out.off_diag = std::sqrt(std::max(ms, 0.0));

    // diagonal: |((X_{s,t})^2 - (Y_{s,t})^2)/2|_{L2} via fourth moments
    auto rect_of = [&](const std::vector<double>& tab) {
        return tab[0] + tab[(m - 1) * m + (m - 1)] - tab[m - 1] - tab[(m - 1) * m];
    };
    const double va = rect_of(rxx);
    const double vb = rect_of(ryy);
    const double c = rect_of(rxy);
    const double fourth = 3.0 * va * va + 3.0 * vb * vb - 2.0 * (va * vb + 2.0 * c * c);
    out.diag = 0.5 * std::sqrt(std::max(fourth, 0.0));
    return out;
}

double level12_bound_rhs(const BoundParameters& params, double omega_st, double eps_raw, int n) {
    if (n != 1 && n != 2) throw std::invalid_argument("level12_bound_rhs: n must be 1 or 2");
    const double e = 1.0 - params.rho / params.gamma;
    return std::pow(eps_raw, e) *
           std::pow(omega_st, 1.0 / (2.0 * params.gamma) + (n - 1.0) / (2.0 * params.rho));
}

namespace {

// sum_{L=1}^{N} L^{-s}; direct up to 10^5 terms, Euler-Maclaurin remainder
double partial_zeta(double s, long long N) {
    if (N <= 0) return 0.0;
    const long long direct = std::min<long long>(N, 100000);
    double acc = 0.0;
    for (long long L = 1; L <= direct; ++L) acc += std::pow(static_cast<double>(L), -s);
    if (direct < N) {
        auto tail_from = [&](double M) {
            // sum_{L>M} L^{-s} for the infinite tail
            return std::pow(M, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(M, -s) -
                   s / 12.0 * std::pow(M, -s - 1.0);
        };
        acc += tail_from(static_cast<double>(direct)) - tail_from(static_cast<double>(N));
    }
    return acc;
}

double zeta_tail(double s, long long from_exclusive) {
    // sum_{L > from} L^{-s}, s > 1
    const long long direct_until = from_exclusive + 20000;
    double acc = 0.0;
    for (long long L = from_exclusive + 1; L <= direct_until; ++L)
        acc += std::pow(static_cast<double>(L), -s);
    const double M = static_cast<double>(direct_until);
    acc += std::pow(M, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(M, -s) -
           s / 12.0 * std::pow(M, -s - 1.0);
    return acc;
}

double log_plus(double x) { return std::max(std::log(x), 0.0); }

}  // namespace

ThirdLevelBound third_level_bound(const BoundParameters& params, double omega_st, double omega_0T,
                                  double eps) {
    const double p = params.p;
    const double gp = params.gamma_prime;
    if (p <= 2.0 * params.rho || p >= 3.0)
        throw std::invalid_argument("third_level_bound: p must lie in (2 rho, 3)");
    if (eps < 0.0 || omega_st < 0.0) throw std::invalid_argument("third_level_bound: negative input");

    ThirdLevelBound out;
    const double b = 1.0 / (2.0 * gp) + 2.0 / p;
    const double a = 1.0 / p - 1.0 / (2.0 * gp);
    if (b > 1.0 + 1e-12)
        out.case_id = 1;
    else if (b >= 1.0 - 1e-12)
        out.case_id = 2;
    else
        out.case_id = 3;

    if (out.case_id == 1) {
        out.value = eps * std::pow(omega_st, b);
    } else if (out.case_id == 2) {
        const double arg = (eps > 0.0) ? omega_0T / std::pow(eps, 1.0 - p / (2.0 * gp)) : 0.0;
        out.value = (eps > 0.0) ? eps * (1.0 + log_plus(arg)) * omega_st : 0.0;
    } else {
        out.value = std::pow(eps, (3.0 - p) / (1.0 - p / (2.0 * gp))) * omega_st;
        if (eps == 0.0) out.value = 0.0;
    }

    out.assumption_42 = (a > 0.0) && eps > 0.0 && omega_st > 0.0 && eps < std::pow(omega_st, a);
    if (out.assumption_42) {
        const long long N =
            std::max<long long>(1, static_cast<long long>(
                                       std::ceil(omega_st * std::pow(eps, -1.0 / a))) -
                                       1);
        out.raw_integer = N;
        out.raw_two_sum = eps * std::pow(omega_st, b) * partial_zeta(b, N) +
                          std::pow(omega_st, 3.0 / p) * zeta_tail(3.0 / p, N);
    }
    return out;
}

LevelNBound level_n_bound(const BoundParameters& params, double omega_st, double omega_0T,
                          double eps, int n) {
    if (n < 1) throw std::invalid_argument("level_n_bound: n >= 1");
    if (eps < 0.0 || omega_st < 0.0) throw std::invalid_argument("level_n_bound: negative input");
    const double p = params.p;
    const double gp = params.gamma_prime;
    LevelNBound out;
    const double b = 1.0 / (2.0 * gp) + 2.0 / p;
    const double a = 1.0 / p - 1.0 / (2.0 * gp);
    if (b > 1.0 + 1e-12)
        out.case_id = 1;
    else if (b >= 1.0 - 1e-12)
        out.case_id = 2;
    else
        out.case_id = 3;
    out.assumption_42 = (a > 0.0) && eps > 0.0 && omega_st > 0.0 && eps < std::pow(omega_st, a);

    const double shape = 1.0 / (2.0 * gp) + (n - 1.0) / p;
    if (eps == 0.0) {
        out.value = 0.0;
        return out;
    }
    if (out.case_id == 1) {
        out.value = eps * std::pow(omega_st, shape);
    } else if (out.case_id == 2) {
        const double arg = omega_0T / std::pow(eps, 1.0 - p / (2.0 * gp));
        out.value = eps * (1.0 + log_plus(arg)) * std::pow(omega_st, shape);
    } else {
        out.value = std::pow(eps, (3.0 - p) / (1.0 - p / (2.0 * gp))) *
                    std::pow(omega_st, (n - 1.0 + params.frac_p()) / p);
    }
    return out;
}

MainTheoremExponent main_theorem_exponent(double rho, double gamma, double delta) {
    if (rho < 1.0 || rho >= 1.5)
        throw std::invalid_argument("main_theorem_exponent: rho must lie in [1, 3/2)");
    if (gamma < rho) throw std::invalid_argument("main_theorem_exponent: gamma >= rho required");
    if (1.0 / gamma + 1.0 / rho <= 1.0)
        throw std::invalid_argument("main_theorem_exponent: 1/gamma + 1/rho > 1 required");
    if (delta < 0.0) throw std::invalid_argument("main_theorem_exponent: delta >= 0 required");
    MainTheoremExponent out;
    if (1.0 / (2.0 * gamma) + 1.0 / rho > 1.0) {
        out.case_id = 1;
        out.zeta = 1.0 - rho / gamma;
    } else {
        out.case_id = 2;
        out.zeta = 3.0 - 2.0 * rho - delta;
    }
    return out;
}

double wong_zakai_rate_predicted(double rho, double delta) {
    if (rho < 1.0 || rho >= 1.5)
        throw std::invalid_argument("wong_zakai_rate_predicted: rho must lie in [1, 3/2)");
    const double cap = 3.0 / (2.0 * rho) - 1.0;
    if (delta <= 0.0 || delta >= cap)
        throw std::invalid_argument("wong_zakai_rate_predicted: delta must lie in (0, 3/(2 rho) - 1)");
    return cap - delta;
}

Control build_random_control(const MultiplicativeFunctional& X,
                             const MultiplicativeFunctional& Y, const BoundParameters& params) {
    if (X.grid().size() != Y.grid().size())
        throw std::invalid_argument("build_random_control: grid mismatch");
    const auto& g = X.grid();
    const std::size_t m = g.size();
    if (m > 257) throw std::invalid_argument("build_random_control: grid too large (O(L^3) cost)");
    if (params.epsilon <= 0.0)
        throw std::invalid_argument("build_random_control: params.epsilon must be positive");

    // pair-increment level norms via prefix inverses, O(L^2) products
    const auto& px = X.prefixes();
    const auto& py = Y.prefixes();
    std::vector<TruncatedTensor> ix, iy;
    ix.reserve(m);
    iy.reserve(m);
    for (std::size_t u = 0; u < m; ++u) {
        ix.push_back(tensor_inv(px[u]));
        iy.push_back(tensor_inv(py[u]));
    }
    std::vector<std::vector<double>> wx(3), wy(3), wd(3);  // weights per level 1..2
    for (int n = 1; n <= 2; ++n) {
        wx[n].assign(m * m, 0.0);
        wy[n].assign(m * m, 0.0);
        wd[n].assign(m * m, 0.0);
    }
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t j = u + 1; j < m; ++j) {
            TruncatedTensor xi = tensor_mul(ix[u], px[j]);
            TruncatedTensor yi = tensor_mul(iy[u], py[j]);
            for (int n = 1; n <= 2; ++n) {
                const double qx = params.p / n;
                const double qd = 1.0 / params.inv_p_of_level(n);
                double nd2 = 0.0;
                const auto& a = xi.level(n);
                const auto& b = yi.level(n);
                for (std::size_t e = 0; e < a.size(); ++e) nd2 += (a[e] - b[e]) * (a[e] - b[e]);
                wx[n][u * m + j] = std::pow(level_norm(xi, n), qx);
                wy[n][u * m + j] = std::pow(level_norm(yi, n), qx);
                wd[n][u * m + j] = std::pow(std::sqrt(nd2), qd);
            }
        }

    // one DP sweep per start index and level
    std::vector<double> table(m * m, 0.0);
    std::vector<double> bx(m), by(m), bd(m);
    for (int n = 1; n <= 2; ++n) {
        const double weight = std::pow(params.epsilon, -1.0 / params.inv_p_of_level(n));
        for (std::size_t i = 0; i + 1 < m; ++i) {
            bx[i] = by[i] = bd[i] = 0.0;
            for (std::size_t j = i + 1; j < m; ++j) {
                double bestx = 0.0, besty = 0.0, bestd = 0.0;
                bool first = true;
                for (std::size_t u = i; u < j; ++u) {
                    const double cx = bx[u] + wx[n][u * m + j];
                    const double cy = by[u] + wy[n][u * m + j];
                    const double cd = bd[u] + wd[n][u * m + j];
                    if (first || cx > bestx) bestx = cx;
                    if (first || cy > besty) besty = cy;
                    if (first || cd > bestd) bestd = cd;
                    first = false;
                }
                bx[j] = bestx;
                by[j] = besty;
                bd[j] = bestd;
                table[i * m + j] += bestx + besty + weight * bestd;
            }
        }
    }
    return Control(std::vector<double>(g), std::move(table));
}

}  // namespace roughpath
