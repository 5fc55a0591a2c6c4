#include "doctest.h"

#include <cmath>
#include <random>

#include "systolic/common.hpp"
#include "systolic/conformal_loewner.hpp"

using namespace systolic;
using namespace systolic::loewner;

namespace {

const flat::TorusModulus kHex{0.5, std::sqrt(3.0) / 2, 1, 0};
const flat::TorusModulus kSquare{0, 1, 1, 0};

double one(double, double) { return 1.0; }

// Random positive trigonometric polynomial of low order.
struct RandomFourier {
    std::vector<std::array<double, 4>> terms; // j, k, amplitude, phase

    explicit RandomFourier(std::mt19937_64& rng)
    {
        std::uniform_real_distribution<double> u(-1, 1);
        std::uniform_real_distribution<double> ph(0, kTwoPi);
        double budget = 0.9;
        for (int j = -2; j <= 2; ++j)
            for (int k = 0; k <= 2; ++k)
                if (j != 0 || k != 0)
                    terms.push_back({double(j), double(k), u(rng), ph(rng)});
        double total = 0;
        for (auto& t : terms)
            total += std::abs(t[2]);
        for (auto& t : terms)
            t[2] *= budget / total * std::abs(u(rng));
    }
    double operator()(double s, double t) const
    {
        double v = 1.0;
        for (const auto& term : terms)
            v += term[2] * std::cos(kTwoPi * (term[0] * s + term[1] * t) + term[3]);
        return v;
    }
};

} // namespace

TEST_CASE("metric validation")
{
    CHECK_THROWS_AS(ConformalTorusMetric(kSquare, 4, 8, std::vector<double>(32, 1.0)), InputError);
    CHECK_THROWS_AS(ConformalTorusMetric(kSquare, 8, 8, std::vector<double>(63, 1.0)), InputError);
    std::vector<double> bad(64, 1.0);
    bad[17] = 0.0;
    CHECK_THROWS_AS(ConformalTorusMetric(kSquare, 8, 8, bad), InputError);
    CHECK_THROWS_AS(ConformalTorusMetric({0.7, 0.9, 1, 0}, 8, 8, std::vector<double>(64, 1.0)), InputError);
}

TEST_CASE("area")
{
    CHECK(area(ConformalTorusMetric::sample(kHex, 16, 16, one)) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
    CHECK(area(ConformalTorusMetric::sample(kSquare, 16, 16, [](double, double) { return 2.0; })) == doctest::Approx(4.0));

    auto f = [](double s, double) { return 1 + 0.5 * std::sin(kTwoPi * s); };
    const double a = area(ConformalTorusMetric::sample(kSquare, 64, 64, f));
    // Monte-Carlo oracle with 1e6 samples.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    const int n = 1000000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double v = f(u(rng), u(rng));
        sum += v * v;
        sum2 += v * v * v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(a - mean) < 3 * se);
}

TEST_CASE("horizontal lengths")
{
    for (double l : horizontal_lengths(ConformalTorusMetric::sample(kHex, 8, 12, one)))
        CHECK(l == doctest::Approx(1.0));
    for (double l : horizontal_lengths(ConformalTorusMetric::sample(kHex, 8, 12, [](double, double) { return 3.5; })))
        CHECK(l == doctest::Approx(3.5));
    const auto m = ConformalTorusMetric::sample(kSquare, 32, 32, [](double s, double) { return 1 + 0.5 * std::sin(kTwoPi * s); });
    for (double l : horizontal_lengths(m))
        CHECK(l == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(horizontal_length_at(m, 0.123) == doctest::Approx(1.0));
}

TEST_CASE("euclidean sampling follows the slanted rows")
{
    // f depends only on the height y, so each horizontal row is constant.
    auto f = [](double, double y) { return 2 + std::cos(kTwoPi * y / (std::sqrt(3.0) / 2)); };
    const auto m = ConformalTorusMetric::sample_euclidean(kHex, 16, 16, f);
    const auto lengths = horizontal_lengths(m);
    for (std::size_t i = 0; i < lengths.size(); ++i)
        CHECK(lengths[i] == doctest::Approx(2 + std::cos(kTwoPi * i / 16.0)));
    CHECK(loewner_chain_check(m).stage_gaps[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(m.value_at(0.5 / 16, 0) == doctest::Approx(3.0));
}

TEST_CASE("chain check: equality cases")
{
    const auto hex = loewner_chain_check(ConformalTorusMetric::sample(kHex, 256, 256, one));
    CHECK(std::abs(hex.sigma_upper - kLoewnerBound) < 1e-12);
    for (double g : hex.stage_gaps)
        CHECK(std::abs(g) < 1e-12);
    CHECK(hex.certified);

    const flat::TorusModulus mod{0.2, 1.7, 1, 0};
    const auto c = loewner_chain_check(ConformalTorusMetric::sample(mod, 32, 32, [](double, double) { return 0.37; }));
    CHECK(c.sigma_upper == doctest::Approx(1 / 1.7).epsilon(1e-14));
    for (double g : c.stage_gaps)
        CHECK(std::abs(g) < 1e-14);
}

TEST_CASE("chain check: non-constant factor")
{
    // Every row integrates to 1, so the min-AM stage is an equality here;
    // the AM-QM stage is strict.
    auto f = [](double s, double t) { return 1 + 0.3 * std::cos(kTwoPi * (s + t)); };
    const auto r = loewner_chain_check(ConformalTorusMetric::sample(kSquare, 128, 128, f));
    CHECK(r.stage_gaps[0] == doctest::Approx(0.045).epsilon(1e-12));
    CHECK(std::abs(r.stage_gaps[1]) < 1e-14);
    CHECK(r.stage_gaps[2] > 0.0);
    CHECK(r.sigma_upper == doctest::Approx(1 / 1.045).epsilon(1e-12));
    CHECK(r.sigma_upper < 1.0);

    // A factor varying across rows makes the min-AM stage strict too.
    auto g = [](double s, double t) { return 1 + 0.3 * std::cos(kTwoPi * s) + 0.2 * std::sin(kTwoPi * t); };
    const auto r2 = loewner_chain_check(ConformalTorusMetric::sample(kSquare, 128, 128, g));
    for (double gap : r2.stage_gaps)
        CHECK(gap > 1e-3);
}

TEST_CASE("random factors satisfy the chain, scale invariance, refinement")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ux(0, 0.5);
    std::uniform_real_distribution<double> uy(0, 1);
    for (int i = 0; i < 30; ++i) {
        const double x = ux(rng);
        const flat::TorusModulus mod{x, std::sqrt(1 - x * x) + uy(rng), 1, 0};
        const RandomFourier f(rng);
        const auto m = ConformalTorusMetric::sample(mod, 64, 64, std::cref(f));
        const auto r = loewner_chain_check(m);
        CHECK(r.certified);
        for (double g : r.stage_gaps)
            CHECK(g >= -1e-10);
        CHECK(r.sigma_upper <= 1 / mod.y0 + 1e-10);
        const auto rs = loewner_chain_check(m.scaled(3.7));
        CHECK(std::abs(rs.sigma_upper - r.sigma_upper) <= 1e-12 * r.sigma_upper);
    }

    auto smooth = [](double s, double t) { return std::exp(0.3 * std::sin(kTwoPi * s) * std::cos(kTwoPi * t)); };
    double prev = loewner_chain_check(ConformalTorusMetric::sample(kSquare, 8, 8, smooth)).sigma_upper;
    for (std::size_t n = 16; n <= 128; n *= 2) {
        const double cur = loewner_chain_check(ConformalTorusMetric::sample(kSquare, n, n, smooth)).sigma_upper;
        CHECK(std::abs(cur - prev) <= 1.0 / double(n * n));
        prev = cur;
    }
}
