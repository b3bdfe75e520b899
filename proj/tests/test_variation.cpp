#include <doctest.h>

#include <cmath>
#include <random>

#include "roughpath/rng.hpp"
#include "roughpath/variation.hpp"

using namespace roughpath;

namespace {

MultiplicativeFunctional functional_1d(const std::vector<double>& values, int degree) {
    std::vector<double> grid(values.size());
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i);
    return MultiplicativeFunctional::from_values(grid, values, 1, degree);
}

MultiplicativeFunctional random_functional(std::mt19937_64& rng, int d, int N, int cells) {
    std::normal_distribution<double> g;
    std::vector<double> grid(cells + 1);
    for (int i = 0; i <= cells; ++i) grid[i] = static_cast<double>(i) / cells;
    std::vector<TruncatedTensor> adj;
    for (int i = 0; i < cells; ++i) {
        TruncatedTensor a = TruncatedTensor::identity(d, N);
        for (int n = 1; n <= N; ++n)
            for (auto& v : a.level(n)) v = g(rng) / n;
        adj.push_back(std::move(a));
    }
    return MultiplicativeFunctional(std::move(grid), std::move(adj));
}

}  // namespace

TEST_CASE("p-variation of monotone and zig-zag 1d paths") {
    auto mono = functional_1d({0.0, 0.5, 1.2, 1.3, 2.0}, 1);
    CHECK(p_variation_level(mono, 1, 1.0) == doctest::Approx(2.0).epsilon(1e-14));

    auto zig = functional_1d({0.0, 1.0, 0.0}, 1);
    CHECK(p_variation_level(zig, 1, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    CHECK_THROWS_AS(p_variation_level(mono, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(p_variation_level(mono, 1, 0.5), std::invalid_argument);
}

TEST_CASE("dp p-variation equals exhaustive enumeration") {
    auto rng = substream(20, 0);
    std::uniform_real_distribution<double> up(1.0, 4.0);
    for (int t = 0; t < 60; ++t) {
        auto mf = random_functional(rng, 2, 3, 7);
        for (int n = 1; n <= 3; ++n) {
            double p = up(rng);
            CHECK(p_variation_level(mf, n, p) ==
                  doctest::Approx(p_variation_level_exhaustive(mf, n, p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rho distance: coincidence, two-point grid, exhaustive") {
    auto rng = substream(21, 0);
    auto X = random_functional(rng, 2, 3, 6);
    CHECK(rho_pvar_distance(X, X, 3, 2.5) == 0.0);

    auto A = random_functional(rng, 2, 2, 1);
    auto B = random_functional(rng, 2, 2, 1);
    double expected = 0.0;
    for (int n = 1; n <= 2; ++n) {
        double s2 = 0.0;
        const auto& a = A.adjacent(0).level(n);
        const auto& b = B.adjacent(0).level(n);
        for (std::size_t e = 0; e < a.size(); ++e) s2 += (a[e] - b[e]) * (a[e] - b[e]);
        expected = std::max(expected, std::sqrt(s2));
    }
    CHECK(rho_pvar_distance(A, B, 2, 2.5) == doctest::Approx(expected).epsilon(1e-14));

    for (int t = 0; t < 40; ++t) {
        auto U = random_functional(rng, 2, 3, 6);
        auto V = random_functional(rng, 2, 3, 6);
        CHECK(rho_pvar_distance(U, V, 2, 2.5) ==
              doctest::Approx(rho_pvar_distance_exhaustive(U, V, 2, 2.5)).epsilon(1e-12));
    }

    auto W = random_functional(rng, 2, 3, 5);
    CHECK_THROWS_AS(rho_pvar_distance(X, W, 2, 2.5), std::invalid_argument);
}

TEST_CASE("v_infinity on the brownian covariance grid") {
    std::vector<double> g{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> vals(25);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) vals[i * 5 + j] = std::min(g[i], g[j]);
    CovarianceGrid f(g, g, vals);
    CHECK(v_infinity_2d(f) == doctest::Approx(1.0).epsilon(1e-14));

    std::vector<double> cvals(25, 3.7);
    CovarianceGrid c(g, g, cvals);
    CHECK(v_infinity_2d(c) == 0.0);
    CHECK_THROWS_AS(v_infinity_2d(f, GridRect{2, 2, 0, 4, false}), std::invalid_argument);
}

TEST_CASE("v_infinity matches the quartic scan on random grids") {
    auto rng = substream(22, 0);
    std::normal_distribution<double> gd;
    for (int t = 0; t < 30; ++t) {
        std::vector<double> g{0.0, 0.2, 0.45, 0.6, 0.85, 1.0};
        std::vector<double> vals(36);
        for (auto& v : vals) v = gd(rng);
        CovarianceGrid f(g, g, vals);
        double brute = 0.0;
        for (int a = 0; a < 6; ++a)
            for (int b = a + 1; b < 6; ++b)
                for (int c = 0; c < 6; ++c)
                    for (int d = c + 1; d < 6; ++d)
                        brute = std::max(brute, std::abs(f.rect(a, b, c, d)));
        CHECK(v_infinity_2d(f) == doctest::Approx(brute).epsilon(1e-14));
    }
}

TEST_CASE("2d variation: zero, brownian, separable") {
    std::vector<double> g{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> zvals(25, 0.0);
    CHECK(variation_2d(CovarianceGrid(g, g, zvals), 1.0).value == 0.0);

    std::vector<double> bvals(25);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) bvals[i * 5 + j] = std::min(g[i], g[j]);
    auto r = variation_2d(CovarianceGrid(g, g, bvals), 1.0);
    CHECK(r.exact);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(variation_2d(CovarianceGrid(g, g, bvals), 0.8), std::invalid_argument);

    auto rng = substream(23, 0);
    std::normal_distribution<double> gd;
    for (int t = 0; t < 10; ++t) {
        std::vector<double> gs(5), hs(5);
        for (auto& v : gs) v = gd(rng);
        for (auto& v : hs) v = gd(rng);
        std::vector<double> vals(25);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) vals[i * 5 + j] = gs[i] * hs[j];
        double vg = 0.0, vh = 0.0;
        for (int i = 0; i + 1 < 5; ++i) {
            vg += std::abs(gs[i + 1] - gs[i]);
            vh += std::abs(hs[i + 1] - hs[i]);
        }
        CHECK(variation_2d(CovarianceGrid(g, g, vals), 1.0).value ==
              doctest::Approx(vg * vh).epsilon(1e-12));
    }
}

TEST_CASE("2d variation heuristic stays a lower bound and converges") {
    // 12 interior points per axis forces the coordinate-ascent path
    const std::size_t m = 14;
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = static_cast<double>(i) / (m - 1);
    std::vector<double> vals(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) vals[i * m + j] = std::min(g[i], g[j]);
    auto r = variation_2d(CovarianceGrid(g, g, vals), 1.0);
    CHECK_FALSE(r.exact);
    CHECK(r.converged);
    // brownian min-kernel: every product dissection sums to exactly t - s
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interpolation bound") {
    std::vector<double> g{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> bvals(25);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) bvals[i * 5 + j] = std::min(g[i], g[j]);
    CovarianceGrid f(g, g, bvals);
    auto [l, r] = interpolation_bound(f, 1.0, 2.0);
    CHECK(l <= r + 1e-14);
    auto [le, re] = interpolation_bound(f, 1.5, 1.5);
    CHECK(le == re);
    CHECK_THROWS_AS(interpolation_bound(f, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("control built from 2d variation") {
    std::vector<double> g{0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
    std::vector<double> bvals(g.size() * g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            bvals[i * g.size() + j] = std::min(g[i], g[j]);
    CovarianceGrid f(g, g, bvals);
    auto ctrl = build_control_from_2dvar(f, 1.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            CHECK(ctrl(i, j) == doctest::Approx(g[j] - g[i]).epsilon(1e-12));
    CHECK(ctrl.worst_superadditivity_violation() <= 1e-12);

    std::vector<double> zvals(g.size() * g.size(), 0.0);
    auto zc = build_control_from_2dvar(CovarianceGrid(g, g, zvals), 1.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) CHECK(zc(i, j) == 0.0);

    CHECK_THROWS_AS(build_control_from_2dvar(f, 1.5, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(build_control_from_2dvar(f, 1.5, 1.5), std::invalid_argument);
}

TEST_CASE("holder ratio") {
    std::vector<double> lin{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> grid(lin);
    auto mf = MultiplicativeFunctional::from_values(grid, lin, 1, 2);
    CHECK(holder_ratio(mf, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

    std::vector<double> flat(5, 0.3);
    auto cf = MultiplicativeFunctional::from_values(grid, flat, 1, 2);
    CHECK(holder_ratio(cf, 1, 0.7) == 0.0);

    auto rng = substream(24, 0);
    auto rf = random_functional(rng, 2, 2, 6);
    double brute = 0.0;
    const auto& g = rf.grid();
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            brute = std::max(brute, level_norm(rf.increment(i, j), 2) /
                                        std::pow(g[j] - g[i], 0.8));
    CHECK(holder_ratio(rf, 2, 0.8) == doctest::Approx(brute).epsilon(1e-12));
    CHECK_THROWS_AS(holder_ratio(rf, 2, 0.0), std::invalid_argument);
}

TEST_CASE("kolmogorov chain bound: degenerate and linear closed forms") {
    const int depth = 4;
    const std::size_t L = 1 << depth;
    std::vector<double> grid(L + 1), lin(L + 1), flat(L + 1, 0.0);
    for (std::size_t i = 0; i <= L; ++i) {
        grid[i] = static_cast<double>(i) / L;
        lin[i] = grid[i];
    }
    auto cf = MultiplicativeFunctional::from_values(grid, flat, 1, 2);
    auto kc = kolmogorov_chain_bound(cf, 1, 0.5);
    CHECK(kc.chain_sum == 0.0);
    CHECK(kc.holder_sup == 0.0);

    auto lf = MultiplicativeFunctional::from_values(grid, lin, 1, 2);
    auto kl = kolmogorov_chain_bound(lf, 1, 1.0);
    CHECK(kl.chain_sum == doctest::Approx(2.0 * depth).epsilon(1e-12));
    CHECK(kl.holder_sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kl.holder_sup <= kl.chain_sum);

    std::vector<double> bad{0.0, 0.3, 1.0};
    std::vector<double> badv{0.0, 0.1, 0.2};
    auto bf = MultiplicativeFunctional::from_values(bad, badv, 1, 1);
    CHECK_THROWS_AS(kolmogorov_chain_bound(bf, 1, 0.5), std::invalid_argument);
}

TEST_CASE("dyadic chain partition structure") {
    const int depth = 5;
    const std::size_t L = 1 << depth;
    for (std::size_t lo = 0; lo < L; ++lo)
        for (std::size_t hi = lo + 1; hi <= L; ++hi) {
            auto pts = dyadic_chain_partition(lo, hi, depth);
            REQUIRE(pts.front() == lo);
            REQUIRE(pts.back() == hi);
            std::vector<int> per_level(depth + 1, 0);
            for (std::size_t q = 0; q + 1 < pts.size(); ++q) {
                REQUIRE(pts[q + 1] > pts[q]);
                std::size_t len = pts[q + 1] - pts[q];
                REQUIRE((len & (len - 1)) == 0);   // power of two
                REQUIRE(pts[q] % len == 0);        // aligned: a genuine dyadic cell
                int k = depth;
                for (std::size_t l2 = 1; l2 < len; l2 <<= 1) --k;
                ++per_level[k];
            }
            for (int k = 0; k <= depth; ++k) REQUIRE(per_level[k] <= 2);
        }
}
