#include <doctest.h>

#include <cmath>
#include <random>

#include "roughpath/functional.hpp"
#include "roughpath/path.hpp"
#include "roughpath/rng.hpp"

using namespace roughpath;

namespace {

double rel_diff(const TruncatedTensor& a, const TruncatedTensor& b) {
    double num = 0.0, den = 0.0;
    for (int n = 0; n <= a.degree(); ++n) {
        const auto& av = a.level(n);
        const auto& bv = b.level(n);
        for (std::size_t e = 0; e < av.size(); ++e) {
            num += (av[e] - bv[e]) * (av[e] - bv[e]);
            den += av[e] * av[e];
        }
    }
    return std::sqrt(num) / std::max(1.0, std::sqrt(den));
}

double rel_diff_level(const TruncatedTensor& a, const TruncatedTensor& b, int n) {
    double num = 0.0, den = 0.0;
    const auto& av = a.level(n);
    const auto& bv = b.level(n);
    for (std::size_t e = 0; e < av.size(); ++e) {
        num += (av[e] - bv[e]) * (av[e] - bv[e]);
        den += av[e] * av[e];
    }
    return std::sqrt(num / std::max(1e-300, den));
}

PiecewiseLinearPath random_path(std::mt19937_64& rng, int d, int segments) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> dt(0.1, 1.0);
    std::vector<double> times{0.0};
    std::vector<std::vector<double>> pts(1, std::vector<double>(d, 0.0));
    for (int s = 0; s < segments; ++s) {
        times.push_back(times.back() + dt(rng));
        auto x = pts.back();
        for (auto& v : x) v += g(rng) / std::sqrt(static_cast<double>(segments));
        pts.push_back(x);
    }
    return PiecewiseLinearPath(std::move(times), std::move(pts));
}

}  // namespace

TEST_CASE("path construction validates input") {
    CHECK_THROWS_AS(PiecewiseLinearPath({0.0}, {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinearPath({0.0, 0.0}, {{1.0}, {2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinearPath({0.0, 1.0}, {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinearPath({0.0, 1.0}, {{1.0}, {2.0, 3.0}}), std::invalid_argument);
}

TEST_CASE("single segment signature is the segment exponential") {
    PiecewiseLinearPath path({0.0, 1.0}, {{0.0, 0.0}, {0.6, -0.9}});
    std::vector<double> v{0.6, -0.9};
    CHECK(rel_diff(signature_of_path(path, 0.0, 1.0, 4), segment_exp(v, 4)) < 1e-15);
    // clipped sub-interval of one segment
    std::vector<double> half{0.3, -0.45};
    CHECK(rel_diff(signature_of_path(path, 0.25, 0.75, 4), segment_exp(half, 4)) < 1e-14);
}

TEST_CASE("two unit axis segments") {
    PiecewiseLinearPath path({0.0, 1.0, 2.0}, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
    auto s = signature_of_path(path, 0.0, 2.0, 2);
    CHECK(s.level(2)[1] == doctest::Approx(1.0));  // (1,2)
    CHECK(s.level(2)[2] == doctest::Approx(0.0));  // (2,1)
}

TEST_CASE("signature window errors") {
    PiecewiseLinearPath path({0.0, 1.0}, {{0.0}, {1.0}});
    CHECK_THROWS_AS(signature_of_path(path, 0.8, 0.2, 2), std::invalid_argument);
    CHECK_THROWS_AS(signature_of_path(path, -0.1, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(signature_of_path(path, 0.5, 1.5, 2), std::invalid_argument);
}

TEST_CASE("chen identity across arbitrary interior points") {
    auto rng = substream(10, 0);
    for (int t = 0; t < 20; ++t) {
        auto path = random_path(rng, 2, 6);
        double a = path.t0(), b = path.t1();
        double u = a + 0.37 * (b - a);
        double w = a + 0.81 * (b - a);
        auto lhs = tensor_mul(signature_of_path(path, a, u, 4),
                              tensor_mul(signature_of_path(path, u, w, 4),
                                         signature_of_path(path, w, b, 4)));
        CHECK(rel_diff(lhs, signature_of_path(path, a, b, 4)) < 1e-12);
    }
}

TEST_CASE("riemann oracle: constant and linear paths") {
    PiecewiseLinearPath flat({0.0, 1.0, 2.0}, {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}});
    auto s = riemann_signature_oracle(flat, 0.0, 2.0, 3, 64);
    CHECK(rel_diff(s, TruncatedTensor::identity(2, 3)) == 0.0);

    PiecewiseLinearPath lin({0.0, 1.0}, {{0.0, 0.0}, {1.0, 2.0}});
    std::vector<double> v{1.0, 2.0};
    auto approx = riemann_signature_oracle(lin, 0.0, 1.0, 3, 4096);
    // left sums converge at rate 1/substeps
    CHECK(rel_diff(approx, segment_exp(v, 3)) < 1e-3);
    CHECK(rel_diff(approx, segment_exp(v, 3)) > 1e-5);
    CHECK_THROWS_AS(riemann_signature_oracle(lin, 0.0, 1.0, 3, 0), std::invalid_argument);
}

TEST_CASE("riemann oracle: left-point halving ratio is about 2") {
    auto rng = substream(11, 0);
    auto path = random_path(rng, 2, 5);
    auto exact = signature_of_path(path, path.t0(), path.t1(), 3);
    auto err = [&](int m) {
        auto ap = riemann_signature_oracle(path, path.t0(), path.t1(), 3, m);
        return rel_diff_level(exact, ap, 2);
    };
    double ratio = err(256) / err(512);
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.3);
}

TEST_CASE("riemann oracle: trapezoid scheme matches the chen signature") {
    auto rng = substream(12, 0);
    for (int t = 0; t < 5; ++t) {
        auto path = random_path(rng, 2, 5);
        auto exact = signature_of_path(path, path.t0(), path.t1(), 4);
        auto ap = riemann_signature_oracle(path, path.t0(), path.t1(), 4, 1 << 14,
                                           RiemannScheme::trapezoid);
        for (int n = 1; n <= 4; ++n) CHECK(rel_diff_level(exact, ap, n) < 1e-6);
    }
}

TEST_CASE("functional: chen chaining equals direct signatures") {
    auto rng = substream(13, 0);
    auto path = random_path(rng, 2, 7);
    std::vector<double> grid(path.times());
    auto mf = MultiplicativeFunctional::from_path(path, grid, 3);
    for (std::size_t i = 0; i < mf.intervals(); ++i)
        for (std::size_t j = i + 1; j <= mf.intervals(); ++j)
            CHECK(rel_diff(mf.increment(i, j), signature_of_path(path, grid[i], grid[j], 3)) <
                  1e-12);
}

TEST_CASE("lyons extension of a segment exponential adds v^3/6") {
    std::vector<double> v{0.8, -0.5};
    auto e2 = segment_exp(v, 2);
    MultiplicativeFunctional mf({0.0, 1.0}, {e2});
    auto ext = lyons_extend(mf);
    CHECK(ext.degree() == 3);
    CHECK(rel_diff(ext.adjacent(0), segment_exp(v, 3)) < 1e-15);
}

TEST_CASE("lyons extension reproduces the level-3 signature of a path") {
    auto rng = substream(14, 0);
    for (int t = 0; t < 20; ++t) {
        auto path = random_path(rng, 2, 5);  // 6 nodes
        std::vector<double> grid(path.times());
        auto f2 = MultiplicativeFunctional::from_path(path, grid, 2);
        auto f3 = lyons_extend(f2);
        auto direct = signature_of_path(path, path.t0(), path.t1(), 3);
        CHECK(rel_diff_level(f3.increment(0, f3.intervals()), direct, 3) < 1e-12);
    }
}

TEST_CASE("extension is independent of product bracketing") {
    auto rng = substream(15, 0);
    auto path = random_path(rng, 2, 6);
    std::vector<double> grid(path.times());
    auto f3 = lyons_extend(MultiplicativeFunctional::from_path(path, grid, 2));
    // left-to-right chaining vs a split at an interior point
    auto left = f3.increment(0, 4);
    auto split = tensor_mul(f3.increment(0, 2), f3.increment(2, 4));
    CHECK(rel_diff(left, split) < 1e-13);
}

TEST_CASE("point drop defect: single interior point at degree 1") {
    PiecewiseLinearPath path({0.0, 1.0, 2.0}, {{0.0, 0.0}, {1.0, 0.2}, {1.4, 1.2}});
    std::vector<double> grid(path.times());
    auto mf = MultiplicativeFunctional::from_path(path, grid, 1);
    std::vector<std::size_t> D{0, 1, 2};
    auto defect = point_drop_defect(mf, D, 1);
    auto left = mf.increment(0, 1);
    auto right = mf.increment(1, 2);
    const auto& l1 = left.level(1);
    const auto& r1 = right.level(1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(defect.level(2)[i * 2 + j] == doctest::Approx(l1[i] * r1[j]).epsilon(1e-14));
}

TEST_CASE("point drop defect equals the hatted product difference") {
    auto rng = substream(16, 0);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
        // group-like increments that are not signatures of straight lines
        std::vector<double> grid{0.0, 0.3, 0.9, 1.4, 2.0, 2.3};
        std::vector<TruncatedTensor> adj;
        for (int i = 0; i < 5; ++i) {
            TruncatedTensor a = TruncatedTensor::identity(2, 2);
            for (int n = 1; n <= 2; ++n)
                for (auto& v : a.level(n)) v = g(rng);
            adj.push_back(std::move(a));
        }
        MultiplicativeFunctional mf(grid, adj);
        std::vector<std::size_t> D{0, 1, 2, 4, 5};
        for (std::size_t j = 1; j + 1 < D.size(); ++j) {
            auto defect = point_drop_defect(mf, D, j);
            std::vector<std::size_t> Dj;
            for (std::size_t q = 0; q < D.size(); ++q)
                if (q != j) Dj.push_back(D[q]);
            auto diff = tensor_add(hatted_product(mf, D),
                                   tensor_scale(hatted_product(mf, Dj), -1.0));
            CHECK(rel_diff(diff, defect) < 1e-12);
            for (int n = 0; n <= 2; ++n) CHECK(level_norm(diff, n) < 1e-12);
        }
    }
    auto mf_small = MultiplicativeFunctional(
        {0.0, 1.0}, {TruncatedTensor::identity(2, 2)});
    std::vector<std::size_t> no_interior{0, 1};
    CHECK_THROWS_AS(point_drop_defect(mf_small, no_interior, 1), std::invalid_argument);
}

TEST_CASE("collinear segments give a fully symmetric defect") {
    std::vector<double> u{0.7, 0.4};
    PiecewiseLinearPath path({0.0, 1.0, 2.0},
                             {{0.0, 0.0}, {0.7, 0.4}, {1.4, 0.8}});
    std::vector<double> grid(path.times());
    auto mf = MultiplicativeFunctional::from_path(path, grid, 2);
    std::vector<std::size_t> D{0, 1, 2};
    auto defect = point_drop_defect(mf, D, 1);
    const auto& l3 = defect.level(3);
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                int idx[3] = {i, j, k};
                double base = l3[(i * 2 + j) * 2 + k];
                for (auto& pm : perm) {
                    double other = l3[(idx[pm[0]] * 2 + idx[pm[1]]) * 2 + idx[pm[2]]];
                    CHECK(other == doctest::Approx(base).epsilon(1e-12));
                }
            }
}

TEST_CASE("select_drop_point") {
    std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    // additive control: any j attains the bound
    auto add = Control::from_function(grid, [](double s, double t) { return t - s; });
    std::vector<std::size_t> D{0, 1, 2, 3, 4};
    auto j = select_drop_point(add, D);
    const double L = 3.0;
    CHECK(add(D[j - 1], D[j + 1]) <= 2.0 / L * add(0, 4) + 1e-15);

    // strictly superadditive control on a uniform grid: ties resolve to j = 1
    auto sq = Control::from_function(grid, [](double s, double t) { return (t - s) * (t - s); });
    CHECK(select_drop_point(sq, D) == 1);

    std::vector<std::size_t> single{0, 2, 4};
    CHECK(select_drop_point(sq, single) == 1);
}
