#include <doctest.h>

#include <cmath>
#include <random>

#include "roughpath/rng.hpp"
#include "roughpath/tensor.hpp"

using namespace roughpath;

namespace {

double max_abs_diff(const TruncatedTensor& a, const TruncatedTensor& b) {
    double worst = 0.0;
    for (int n = 0; n <= a.degree(); ++n) {
        const auto& av = a.level(n);
        const auto& bv = b.level(n);
        for (std::size_t e = 0; e < av.size(); ++e)
            worst = std::max(worst, std::abs(av[e] - bv[e]));
    }
    return worst;
}

TruncatedTensor random_group(std::mt19937_64& rng, int d, int N) {
    std::normal_distribution<double> g;
    TruncatedTensor lie(d, N);
    for (int n = 1; n <= N; ++n)
        for (auto& v : lie.level(n)) v = g(rng) / n;
    return tensor_exp(lie);
}

}  // namespace

TEST_CASE("identity is a two-sided unit") {
    auto rng = substream(1, 0);
    auto a = random_group(rng, 2, 3);
    auto id = TruncatedTensor::identity(2, 3);
    CHECK(max_abs_diff(tensor_mul(id, a), a) < 1e-15);
    CHECK(max_abs_diff(tensor_mul(a, id), a) < 1e-15);
}

TEST_CASE("product of axis exponentials") {
    std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0};
    auto prod = tensor_mul(segment_exp(e1, 2), segment_exp(e2, 2));
    const auto& l2 = prod.level(2);
    CHECK(l2[0] == doctest::Approx(0.5).epsilon(1e-14));  // (1,1)
    CHECK(l2[1] == doctest::Approx(1.0).epsilon(1e-14));  // (1,2)
    CHECK(l2[2] == doctest::Approx(0.0).epsilon(1e-14));  // (2,1)
    CHECK(l2[3] == doctest::Approx(0.5).epsilon(1e-14));  // (2,2)
    CHECK(prod.level(1)[0] == doctest::Approx(1.0));
    CHECK(prod.level(1)[1] == doctest::Approx(1.0));
}

TEST_CASE("associativity on random group elements") {
    auto rng = substream(2, 0);
    for (int t = 0; t < 50; ++t) {
        auto a = random_group(rng, 2, 3);
        auto b = random_group(rng, 2, 3);
        auto c = random_group(rng, 2, 3);
        auto lhs = tensor_mul(tensor_mul(a, b), c);
        auto rhs = tensor_mul(a, tensor_mul(b, c));
        double scale = 0.0;
        for (int n = 0; n <= 3; ++n) scale = std::max(scale, level_norm(lhs, n));
        CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("mismatched operands are rejected") {
    auto a = TruncatedTensor::identity(2, 3);
    auto b = TruncatedTensor::identity(3, 3);
    auto c = TruncatedTensor::identity(2, 2);
    CHECK_THROWS_AS(tensor_mul(a, b), std::invalid_argument);
    CHECK_THROWS_AS(tensor_mul(a, c), std::invalid_argument);
}

TEST_CASE("inverse: identity, exponentials, random group elements") {
    auto id = TruncatedTensor::identity(2, 4);
    CHECK(max_abs_diff(tensor_inv(id), id) == 0.0);

    std::vector<double> v{0.7, -0.3};
    std::vector<double> mv{-0.7, 0.3};
    CHECK(max_abs_diff(tensor_inv(segment_exp(v, 4)), segment_exp(mv, 4)) < 1e-14);

    auto rng = substream(3, 0);
    for (int t = 0; t < 30; ++t) {
        auto a = random_group(rng, 2, 4);
        CHECK(max_abs_diff(tensor_mul(a, tensor_inv(a)), id) < 1e-12);
    }

    TruncatedTensor bad(2, 2);
    bad.scalar() = 0.5;
    CHECK_THROWS_AS(tensor_inv(bad), std::invalid_argument);
}

TEST_CASE("segment exponential closed forms") {
    std::vector<double> one{1.0};
    auto e = segment_exp(one, 3);
    CHECK(e.scalar() == 1.0);
    CHECK(e.level(1)[0] == doctest::Approx(1.0));
    CHECK(e.level(2)[0] == doctest::Approx(0.5));
    CHECK(e.level(3)[0] == doctest::Approx(1.0 / 6.0));

    std::vector<double> zero{0.0, 0.0};
    CHECK(max_abs_diff(segment_exp(zero, 3), TruncatedTensor::identity(2, 3)) == 0.0);

    std::vector<double> v{1.0, 2.0};
    auto s = segment_exp(v, 2);
    CHECK(s.level(2)[0 * 2 + 1] == doctest::Approx(1.0));  // (1,2) entry = v1 v2 / 2
    CHECK(s.level(2)[0] == doctest::Approx(0.5));
    CHECK(s.level(2)[3] == doctest::Approx(2.0));
}

TEST_CASE("chen for a straight line: exp(u) exp(u) = exp(2u)") {
    auto rng = substream(4, 0);
    std::normal_distribution<double> g;
    for (int t = 0; t < 50; ++t) {
        std::vector<double> u{g(rng), g(rng)};
        std::vector<double> uu{2 * u[0], 2 * u[1]};
        auto lhs = tensor_mul(segment_exp(u, 4), segment_exp(u, 4));
        auto rhs = segment_exp(uu, 4);
        double scale = 0.0;
        for (int n = 0; n <= 4; ++n) scale = std::max(scale, level_norm(rhs, n));
        CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("level norms") {
    auto id = TruncatedTensor::identity(2, 2);
    CHECK(level_norm(id, 0) == 1.0);

    TruncatedTensor t(2, 2);
    t.level(2) = {0.5, 1.0, 0.0, 0.5};
    CHECK(level_norm(t, 2) == doctest::Approx(std::sqrt(1.5)));
    CHECK_THROWS_AS(level_norm(t, 3), std::out_of_range);
}

TEST_CASE("level norm submultiplicativity, random tensors") {
    auto rng = substream(5, 0);
    std::normal_distribution<double> g;
    for (int t = 0; t < 1000; ++t) {
        TruncatedTensor a(2, 3), b(2, 3);
        a.scalar() = g(rng);
        b.scalar() = g(rng);
        for (int n = 1; n <= 3; ++n) {
            for (auto& v : a.level(n)) v = g(rng);
            for (auto& v : b.level(n)) v = g(rng);
        }
        auto ab = tensor_mul(a, b);
        for (int n = 0; n <= 3; ++n) {
            double rhs = 0.0;
            for (int k = 0; k <= n; ++k) rhs += level_norm(a, k) * level_norm(b, n - k);
            CHECK(level_norm(ab, n) <= rhs + 1e-10);
        }
    }
}

TEST_CASE("log and exp invert each other") {
    auto rng = substream(6, 0);
    for (int t = 0; t < 30; ++t) {
        auto a = random_group(rng, 2, 4);
        CHECK(max_abs_diff(tensor_exp(tensor_log(a)), a) < 1e-12);
    }
    std::vector<double> v{0.4, -1.1};
    auto lg = tensor_log(segment_exp(v, 4));
    CHECK(lg.level(1)[0] == doctest::Approx(0.4));
    CHECK(level_norm(lg, 2) < 1e-14);  // log of an exponential is pure level 1
    CHECK(level_norm(lg, 3) < 1e-14);
}
