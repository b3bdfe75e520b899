#include "roughpath/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace roughpath {

CovarianceGrid::CovarianceGrid(std::vector<double> s_grid, std::vector<double> t_grid,
                               std::vector<double> values)
    : s_grid_(std::move(s_grid)), t_grid_(std::move(t_grid)), values_(std::move(values)) {
    if (s_grid_.size() < 2 || t_grid_.size() < 2)
        throw std::invalid_argument("CovarianceGrid: need >= 2 points per axis");
    if (values_.size() != s_grid_.size() * t_grid_.size())
        throw std::invalid_argument("CovarianceGrid: values size mismatch");
    for (std::size_t i = 1; i < s_grid_.size(); ++i)
        if (!(s_grid_[i] > s_grid_[i - 1]))
            throw std::invalid_argument("CovarianceGrid: s_grid not increasing");
    for (std::size_t j = 1; j < t_grid_.size(); ++j)
        if (!(t_grid_[j] > t_grid_[j - 1]))
            throw std::invalid_argument("CovarianceGrid: t_grid not increasing");
}

double CovarianceGrid::rect(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return (*this)(b, d) - (*this)(a, d) - (*this)(b, c) + (*this)(a, c);
}

bool CovarianceGrid::square() const {
    if (s_grid_.size() != t_grid_.size()) return false;
    for (std::size_t i = 0; i < s_grid_.size(); ++i)
        if (s_grid_[i] != t_grid_[i]) return false;
    return true;
}

namespace {

GridRect resolve(const CovarianceGrid& f, const GridRect& r) {
    GridRect out = r;
    if (r.full) {
        out.s_lo = 0;
        out.s_hi = f.s_grid().size() - 1;
        out.t_lo = 0;
        out.t_hi = f.t_grid().size() - 1;
        out.full = false;
    }
    if (out.s_hi >= f.s_grid().size() || out.t_hi >= f.t_grid().size() ||
        out.s_lo >= out.s_hi || out.t_lo >= out.t_hi)
        throw std::invalid_argument("GridRect: empty or out-of-bounds rectangle");
    return out;
}

// all dissections of [lo, hi] as sorted index lists (endpoints always kept)
std::vector<std::vector<std::size_t>> all_dissections(std::size_t lo, std::size_t hi) {
    const std::size_t interior = hi - lo - 1;
    std::vector<std::vector<std::size_t>> out;
    out.reserve(std::size_t(1) << interior);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << interior); ++mask) {
        std::vector<std::size_t> dis{lo};
        for (std::size_t b = 0; b < interior; ++b)
            if (mask & (std::uint64_t(1) << b)) dis.push_back(lo + 1 + b);
        dis.push_back(hi);
        out.push_back(std::move(dis));
    }
    return out;
}

double dissection_sum(const CovarianceGrid& f, const std::vector<std::size_t>& ds,
                      const std::vector<std::size_t>& dt, double rho) {
    double s = 0.0;
    for (std::size_t a = 0; a + 1 < ds.size(); ++a)
        for (std::size_t c = 0; c + 1 < dt.size(); ++c)
            s += std::pow(std::abs(f.rect(ds[a], ds[a + 1], dt[c], dt[c + 1])), rho);
    return s;
}

// best dissection of one axis by DP, the other held fixed
double axis_dp(const CovarianceGrid& f, double rho, const GridRect& r, bool s_axis,
               const std::vector<std::size_t>& other, std::vector<std::size_t>& best_out) {
    const std::size_t lo = s_axis ? r.s_lo : r.t_lo;
    const std::size_t hi = s_axis ? r.s_hi : r.t_hi;
    const std::size_t m = hi - lo + 1;
    std::vector<double> best(m, -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> from(m, 0);
    best[0] = 0.0;
    for (std::size_t b = 1; b < m; ++b) {
        for (std::size_t a = 0; a < b; ++a) {
            double cost = 0.0;
            for (std::size_t c = 0; c + 1 < other.size(); ++c) {
                double v = s_axis ? f.rect(lo + a, lo + b, other[c], other[c + 1])
                                  : f.rect(other[c], other[c + 1], lo + a, lo + b);
                cost += std::pow(std::abs(v), rho);
            }
            if (best[a] + cost > best[b]) {
                best[b] = best[a] + cost;
                from[b] = a;
            }
        }
    }
    best_out.clear();
    for (std::size_t b = m - 1; b != 0; b = from[b]) best_out.push_back(lo + b);
    best_out.push_back(lo);
    std::reverse(best_out.begin(), best_out.end());
    return best[m - 1];
}

}  // namespace

double v_infinity_2d(const CovarianceGrid& f, const GridRect& rect) {
    GridRect r = resolve(f, rect);
    double worst = 0.0;
    for (std::size_t a = r.s_lo; a <= r.s_hi; ++a)
        for (std::size_t b = a + 1; b <= r.s_hi; ++b) {
            double mn = std::numeric_limits<double>::infinity(), mx = -mn;
            for (std::size_t y = r.t_lo; y <= r.t_hi; ++y) {
                double g = f(b, y) - f(a, y);
                mn = std::min(mn, g);
                mx = std::max(mx, g);
            }
            worst = std::max(worst, mx - mn);
        }
    return worst;
}

Variation2DResult variation_2d(const CovarianceGrid& f, double rho, const GridRect& rect) {
    if (rho < 1.0) throw std::invalid_argument("variation_2d: rho must be >= 1");
    GridRect r = resolve(f, rect);
    const std::size_t si = r.s_hi - r.s_lo - 1;
    const std::size_t ti = r.t_hi - r.t_lo - 1;
    Variation2DResult out;
    if (si <= 8 && ti <= 8) {
        auto ds = all_dissections(r.s_lo, r.s_hi);
        auto dt = all_dissections(r.t_lo, r.t_hi);
        double best = 0.0;
        for (const auto& a : ds)
            for (const auto& b : dt) best = std::max(best, dissection_sum(f, a, b, rho));
        out.value = std::pow(best, 1.0 / rho);
        out.exact = true;
        return out;
    }
    // alternating coordinate ascent from two starts: full grid and coarsest
    out.exact = false;
    double best = 0.0;
    bool converged = false;
    int iterations = 0;
    for (int start = 0; start < 2; ++start) {
        std::vector<std::size_t> taxis;
        if (start == 0)
            for (std::size_t y = r.t_lo; y <= r.t_hi; ++y) taxis.push_back(y);
        else
            taxis = {r.t_lo, r.t_hi};
        std::vector<std::size_t> saxis;
        double cur = 0.0;
        for (int it = 0; it < 50; ++it) {
            ++iterations;
            double v1 = axis_dp(f, rho, r, true, taxis, saxis);
            double v2 = axis_dp(f, rho, r, false, saxis, taxis);
            if (v2 <= cur * (1.0 + 1e-12)) {
                cur = std::max(cur, std::max(v1, v2));
                converged = true;
                break;
            }
            cur = v2;
        }
        best = std::max(best, cur);
    }
    out.value = std::pow(best, 1.0 / rho);
    out.converged = converged;
    out.iterations = iterations;
    return out;
}

std::pair<double, double> interpolation_bound(const CovarianceGrid& f, double p, double p_prime,
                                              const GridRect& rect) {
    if (p > p_prime) throw std::invalid_argument("interpolation_bound: need p <= p'");
    double vp = variation_2d(f, p, rect).value;
    if (p == p_prime) return {vp, vp};
    double lhs = variation_2d(f, p_prime, rect).value;
    double vinf = v_infinity_2d(f, rect);
    double rhs = std::pow(vinf, 1.0 - p / p_prime) * std::pow(vp, p / p_prime);
    return {lhs, rhs};
}

Control build_control_from_2dvar(const CovarianceGrid& f, double rho, double rho_prime) {
    if (rho < 1.0) throw std::invalid_argument("build_control_from_2dvar: rho >= 1 required");
    if (rho_prime < rho)
        throw std::invalid_argument("build_control_from_2dvar: rho' >= rho required");
    if (rho_prime == rho && rho > 1.0)
        throw std::invalid_argument("build_control_from_2dvar: rho' > rho required for rho > 1");
    if (!f.square()) throw std::invalid_argument("build_control_from_2dvar: square grid required");
    const std::size_t m = f.s_grid().size();
    std::vector<double> table(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            GridRect r{i, j, i, j, false};
            table[i * m + j] = std::pow(variation_2d(f, rho_prime, r).value, rho_prime);
        }
    return Control(f.s_grid(), std::move(table));
}

namespace {

// flattened prefix levels of a functional: lev[n] is (L+1) x d^n row-major
struct FlatPrefixes {
    std::vector<std::vector<double>> lev;
    int dim = 0;
    int maxlevel = 0;

    FlatPrefixes(const MultiplicativeFunctional& mf, int maxlevel_)
        : dim(mf.dim()), maxlevel(maxlevel_) {
        const auto& pre = mf.prefixes();
        lev.resize(maxlevel + 1);
        for (int n = 1; n <= maxlevel; ++n) {
            const std::size_t sz = level_size(dim, n);
            lev[n].resize(pre.size() * sz);
            for (std::size_t i = 0; i < pre.size(); ++i) {
                const auto& src = pre[i].level(n);
                std::copy(src.begin(), src.end(), lev[n].begin() + i * sz);
            }
        }
    }

    const double* at(int n, std::size_t i) const {
        return lev[n].data() + i * level_size(dim, n);
    }
};

// increments X^n_{ij} = A^n_j - A^n_i - sum_{k=1}^{n-1} A^k_i (x) X^{n-k}_{ij}
// written into work[n]; work must have level_size(dim, n) room per level
void pair_increment(const FlatPrefixes& P, std::size_t i, std::size_t j, int maxlevel,
                    std::vector<std::vector<double>>& work) {
    const int d = P.dim;
    for (int n = 1; n <= maxlevel; ++n) {
        const std::size_t sz = level_size(d, n);
        const double* aj = P.at(n, j);
        const double* ai = P.at(n, i);
        auto& out = work[n];
        for (std::size_t e = 0; e < sz; ++e) out[e] = aj[e] - ai[e];
        for (int k = 1; k < n; ++k) {
            const double* ak = P.at(k, i);
            const auto& low = work[n - k];
            const std::size_t nb = level_size(d, n - k);
            const std::size_t na = level_size(d, k);
            for (std::size_t a = 0; a < na; ++a) {
                const double c = ak[a];
                if (c == 0.0) continue;
                double* o = out.data() + a * nb;
                for (std::size_t b = 0; b < nb; ++b) o[b] -= c * low[b];
            }
        }
    }
}

std::vector<std::vector<double>> make_work(int dim, int maxlevel) {
    std::vector<std::vector<double>> w(maxlevel + 1);
    for (int n = 1; n <= maxlevel; ++n) w[n].resize(level_size(dim, n));
    return w;
}

// DP sups of sum_i w_n over partitions, one value per level 1..maxlevel;
// weight w_n(i,j) = |X^n_{ij} - Y^n_{ij}|^{q_n} (Y omitted when null)
std::vector<double> dp_sup_sums(const MultiplicativeFunctional& X,
                                const MultiplicativeFunctional* Y, int maxlevel,
                                std::span<const double> q) {
    const std::size_t L = X.intervals();
    FlatPrefixes PX(X, maxlevel);
    std::vector<FlatPrefixes> PYv;
    if (Y) PYv.emplace_back(*Y, maxlevel);
    auto wx = make_work(X.dim(), maxlevel);
    auto wy = make_work(X.dim(), maxlevel);

    std::vector<std::vector<double>> best(maxlevel + 1, std::vector<double>(L + 1, 0.0));
    for (std::size_t j = 1; j <= L; ++j) {
        for (int n = 1; n <= maxlevel; ++n) best[n][j] = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < j; ++i) {
            pair_increment(PX, i, j, maxlevel, wx);
            if (Y) pair_increment(PYv[0], i, j, maxlevel, wy);
            for (int n = 1; n <= maxlevel; ++n) {
                double s2 = 0.0;
                const auto& a = wx[n];
                if (Y) {
                    const auto& b = wy[n];
                    for (std::size_t e = 0; e < a.size(); ++e) {
                        const double dfe = a[e] - b[e];
                        s2 += dfe * dfe;
                    }
                } else {
                    for (double v : a) s2 += v * v;
                }
                const double w = (s2 == 0.0) ? 0.0 : std::pow(s2, 0.5 * q[n]);
                if (best[n][i] + w > best[n][j]) best[n][j] = best[n][i] + w;
            }
        }
    }
    std::vector<double> out(maxlevel + 1, 0.0);
    for (int n = 1; n <= maxlevel; ++n) out[n] = best[n][L];
    return out;
}

}  // namespace

double p_variation_level(const MultiplicativeFunctional& mf, int n, double p) {
    if (n < 1 || n > mf.degree()) throw std::invalid_argument("p_variation_level: level out of range");
    if (p < 1.0) throw std::invalid_argument("p_variation_level: p must be >= 1");
    std::vector<double> q(n + 1, 0.0);
    q[n] = p / n;
    auto sums = dp_sup_sums(mf, nullptr, n, q);
    return std::pow(sums[n], static_cast<double>(n) / p);
}

std::vector<double> rho_pvar_distance_levels(const MultiplicativeFunctional& X,
                                             const MultiplicativeFunctional& Y, int N,
                                             double sigma) {
    if (sigma < 1.0) throw std::invalid_argument("rho_pvar_distance: sigma must be >= 1");
    if (N < 1 || N > X.degree() || N > Y.degree())
        throw std::invalid_argument("rho_pvar_distance: level count out of range");
    if (X.dim() != Y.dim()) throw std::invalid_argument("rho_pvar_distance: dim mismatch");
    if (X.grid().size() != Y.grid().size())
        throw std::invalid_argument("rho_pvar_distance: grid mismatch");
    for (std::size_t i = 0; i < X.grid().size(); ++i)
        if (X.grid()[i] != Y.grid()[i])
            throw std::invalid_argument("rho_pvar_distance: grid mismatch");
    std::vector<double> q(N + 1, 0.0);
    for (int n = 1; n <= N; ++n) q[n] = sigma / n;
    auto sums = dp_sup_sums(X, &Y, N, q);
    std::vector<double> parts(N + 1, 0.0);
    for (int n = 1; n <= N; ++n) parts[n] = std::pow(sums[n], n / sigma);
    return parts;
}

double rho_pvar_distance(const MultiplicativeFunctional& X, const MultiplicativeFunctional& Y,
                         int N, double sigma) {
    auto parts = rho_pvar_distance_levels(X, Y, N, sigma);
    return *std::max_element(parts.begin(), parts.end());
}

namespace {

double diff_norm_level(const TruncatedTensor& a, const TruncatedTensor* b, int n) {
    double s2 = 0.0;
    const auto& av = a.level(n);
    if (b) {
        const auto& bv = b->level(n);
        for (std::size_t e = 0; e < av.size(); ++e) s2 += (av[e] - bv[e]) * (av[e] - bv[e]);
    } else {
        for (double v : av) s2 += v * v;
    }
    return std::sqrt(s2);
}

double exhaustive_sup(const MultiplicativeFunctional& X, const MultiplicativeFunctional* Y,
                      int n, double q) {
    const std::size_t L = X.intervals();
    if (L > 15) throw std::invalid_argument("exhaustive oracle: grid too large");
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << (L - 1)); ++mask) {
        std::vector<std::size_t> pts{0};
        for (std::size_t b = 0; b + 1 < L; ++b)
            if (mask & (std::uint64_t(1) << b)) pts.push_back(b + 1);
        pts.push_back(L);
        double acc = 0.0;
        for (std::size_t a = 0; a + 1 < pts.size(); ++a) {
            TruncatedTensor xi = X.increment(pts[a], pts[a + 1]);
            if (Y) {
                TruncatedTensor yi = Y->increment(pts[a], pts[a + 1]);
                acc += std::pow(diff_norm_level(xi, &yi, n), q);
            } else {
                acc += std::pow(diff_norm_level(xi, nullptr, n), q);
            }
        }
        best = std::max(best, acc);
    }
    return best;
}

}  // namespace

double p_variation_level_exhaustive(const MultiplicativeFunctional& mf, int n, double p) {
    if (n < 1 || n > mf.degree()) throw std::invalid_argument("p_variation: level out of range");
    if (p < 1.0) throw std::invalid_argument("p_variation: p must be >= 1");
    return std::pow(exhaustive_sup(mf, nullptr, n, p / n), n / p);
}

double rho_pvar_distance_exhaustive(const MultiplicativeFunctional& X,
                                    const MultiplicativeFunctional& Y, int N, double sigma) {
    double best = 0.0;
    for (int n = 1; n <= N; ++n)
        best = std::max(best, std::pow(exhaustive_sup(X, &Y, n, sigma / n), n / sigma));
    return best;
}

double holder_ratio(const MultiplicativeFunctional& mf, int n, double exponent) {
    if (exponent <= 0.0) throw std::invalid_argument("holder_ratio: exponent must be positive");
    if (n < 1 || n > mf.degree()) throw std::invalid_argument("holder_ratio: level out of range");
    FlatPrefixes P(mf, n);
    auto w = make_work(mf.dim(), n);
    const auto& g = mf.grid();
    double worst = 0.0;
    for (std::size_t j = 1; j < g.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) {
            pair_increment(P, i, j, n, w);
            double s2 = 0.0;
            for (double v : w[n]) s2 += v * v;
            worst = std::max(worst, std::sqrt(s2) / std::pow(g[j] - g[i], exponent));
        }
    return worst;
}

namespace {

int dyadic_depth_of(const MultiplicativeFunctional& mf) {
    const auto& g = mf.grid();
    const std::size_t L = g.size() - 1;
    if ((L & (L - 1)) != 0) throw std::invalid_argument("kolmogorov_chain_bound: grid not dyadic");
    int depth = 0;
    while ((std::size_t(1) << depth) < L) ++depth;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g[i] - static_cast<double>(i) / L) > 1e-12)
            throw std::invalid_argument("kolmogorov_chain_bound: grid must be uniform dyadic on [0,1]");
    return depth;
}

}  // namespace

KolmogorovBound kolmogorov_chain_bound(const MultiplicativeFunctional& mf, int n,
                                       double beta_prime) {
    if (n < 1 || n > mf.degree())
        throw std::invalid_argument("kolmogorov_chain_bound: level out of range");
    const int m = dyadic_depth_of(mf);
    const std::size_t L = std::size_t(1) << m;
    FlatPrefixes P(mf, n);
    auto w = make_work(mf.dim(), n);

    KolmogorovBound out;
    out.level_max.assign(m + 1, 0.0);
    for (int k = 1; k <= m; ++k) {
        const std::size_t cell = L >> k;
        double mx = 0.0;
        for (std::size_t c = 0; c < (std::size_t(1) << k); ++c) {
            pair_increment(P, c * cell, (c + 1) * cell, n, w);
            double s2 = 0.0;
            for (double v : w[n]) s2 += v * v;
            mx = std::max(mx, std::sqrt(s2));
        }
        out.level_max[k] = mx;
        out.chain_sum += 2.0 * mx * std::pow(2.0, k * n * beta_prime);
    }
    const auto& g = mf.grid();
    for (std::size_t j = 1; j <= L; ++j)
        for (std::size_t i = 0; i < j; ++i) {
            pair_increment(P, i, j, n, w);
            double s2 = 0.0;
            for (double v : w[n]) s2 += v * v;
            out.holder_sup =
                std::max(out.holder_sup, std::sqrt(s2) / std::pow(g[j] - g[i], n * beta_prime));
        }
    return out;
}

std::vector<std::size_t> dyadic_chain_partition(std::size_t lo, std::size_t hi, int depth) {
    const std::size_t L = std::size_t(1) << depth;
    if (!(lo < hi) || hi > L) throw std::invalid_argument("dyadic_chain_partition: bad interval");
    // cells of D_k have index length L >> k; pick m' with
    // |D_{m'+1}| < hi-lo <= |D_{m'}| (index units)
    const std::size_t len = hi - lo;
    int mprime = 0;
    while (mprime + 1 <= depth && (L >> (mprime + 1)) >= len) ++mprime;
    const std::size_t unit = (mprime + 1 <= depth) ? (L >> (mprime + 1)) : 1;
    const std::size_t A = ((lo + unit - 1) / unit) * unit;  // first D_{m'+1} point >= lo
    const std::size_t B = (hi / unit) * unit;               // last D_{m'+1} point <= hi

    std::vector<std::size_t> pts{lo};
    // [lo, A): peel from A downward, largest cells first; each level used once
    std::vector<std::size_t> rev;
    std::size_t cur = A;
    for (int k = mprime + 2; k <= depth && cur > lo; ++k) {
        const std::size_t cell = L >> k;
        if ((cur - lo) & cell) {
            cur -= cell;
            if (cur > lo) rev.push_back(cur);
        }
    }
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) pts.push_back(*it);
    // middle [A, B): at most two D_{m'+1} cells
    for (std::size_t q = A; q <= B; q += unit)
        if (q > pts.back() && q < hi) pts.push_back(q);
    // [B, hi): ascend from B, largest cells first
    cur = B;
    for (int k = mprime + 2; k <= depth && cur < hi; ++k) {
        const std::size_t cell = L >> k;
        if ((hi - cur) & cell) {
            cur += cell;
            if (cur < hi) pts.push_back(cur);
        }
    }
    pts.push_back(hi);
    return pts;
}

}  // namespace roughpath
