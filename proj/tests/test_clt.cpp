#include <cmath>
#include <numbers>

#include "cumlab/builtins.hpp"
#include "cumlab/clt.hpp"
#include "cumlab/errors.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace cumlab;
using namespace testing_support;

namespace {

SpacePtr rademacher(int n)
{
    return ProductSpace::iid(n, FiniteComponent::uniform({-1.0, 1.0}));
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Sup CDF distance for a sum of n Rademacher signs, from Pascal's triangle.
double rademacher_sup_oracle(int n)
{
    std::vector<double> row{1.0};
    for (int i = 0; i < n; ++i) {
        std::vector<double> next(row.size() + 1, 0.0);
        for (std::size_t k = 0; k < row.size(); ++k) {
            next[k] += row[k] / 2;
            next[k + 1] += row[k] / 2;
        }
        row = next;
    }
    const double sigma = std::sqrt(static_cast<double>(n));
    double below = 0.0, sup = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
        const double x = (2.0 * static_cast<double>(k) - n) / sigma;
        sup = std::max(sup, std::abs(below - normal_cdf(x)));
        below += row[k];
        sup = std::max(sup, std::abs(below - normal_cdf(x)));
    }
    return sup;
}

} // namespace

TEST_CASE("characteristic function")
{
    Rng rng(11);
    const auto space = random_space(rng, 3);
    const auto f = random_real_fn(rng, space);
    CHECK(std::abs(char_fn(f, 0.0) - Complex(1.0)) < 1e-15);
    for (double t : {0.3, 1.7, 5.0}) {
        CHECK(std::abs(char_fn(f, t)) <= 1.0 + 1e-15);
        CHECK(std::abs(char_fn(f, -t) - std::conj(char_fn(f, t))) < 1e-14);
        const double c = std::cos(t / std::numbers::sqrt2);
        CHECK(std::abs(char_fn(sum_function(rademacher(2)), t) - Complex(c * c)) < 1e-15);
    }
    CHECK_THROWS_AS(char_fn(TabFn::constant(space, 2.0), 1.0), DegenerateModel);
}

TEST_CASE("distributions")
{
    const auto d = distribution_of(sum_function(ProductSpace::iid(4, FiniteComponent::bernoulli(0.3))));
    const auto b = bernoulli_sum(4, 0.3);
    REQUIRE(d.values.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(d.values[k] == b.values[k]);
        CHECK(d.probs[k] == doctest::Approx(b.probs[k]).epsilon(1e-14));
    }
    CHECK(b.mean() == doctest::Approx(1.2));
    CHECK(b.sigma() == doctest::Approx(std::sqrt(0.84)));
}

TEST_CASE("sup CDF distance")
{
    Rng rng(3);
    const auto space = random_space(rng, 2);
    CHECK(sup_cdf_distance(TabFn::constant(space, 1.5)) == 0.5);
    CHECK(sup_cdf_distance(sum_function(rademacher(1))) == doctest::Approx(rademacher_sup_oracle(1)));
    double prev = 1.0;
    for (int n : {4, 16, 64}) {
        const double got = sup_cdf_distance(bernoulli_sum(n, 0.5));
        CHECK(got == doctest::Approx(rademacher_sup_oracle(n)).epsilon(1e-12));
        CHECK(got < prev);
        prev = got;
    }
    CHECK(sup_cdf_distance(sum_function(rademacher(10))) ==
          doctest::Approx(rademacher_sup_oracle(10)).epsilon(1e-12));
}

TEST_CASE("Feller smoothing bound")
{
    const auto gaussian = [](double t) { return Complex(std::exp(-t * t / 2)); };
    for (double T : {1.0, 10.0, 50.0}) {
        const double expected = 24.0 / (std::numbers::pi * std::sqrt(2 * std::numbers::pi) * T);
        CHECK(feller_bound(gaussian, T) == doctest::Approx(expected).epsilon(1e-14));
    }
    for (int n : {4, 16, 64}) {
        const auto dist = bernoulli_sum(n, 0.5);
        const double sup = sup_cdf_distance(dist);
        for (double T : {2.0, 8.0, 30.0})
            CHECK(feller_bound(dist, T) >= sup);
    }
    // Odd point counts are rounded by the grid; the bound should not move much.
    const auto dist = bernoulli_sum(20, 0.4);
    CHECK(feller_bound(dist, 10.0, 4096) == doctest::Approx(feller_bound(dist, 10.0, 8192)).epsilon(1e-6));
    CHECK_THROWS_AS(feller_bound(gaussian, 0.0), ValidationError);
    CHECK_THROWS_AS(feller_bound(gaussian, -1.0), ValidationError);
}

TEST_CASE("Berry-Esseen hypothesis fit")
{
    const auto sum = sum_function(ProductSpace::iid(5, FiniteComponent::bernoulli(0.3)));
    const auto s = s_values(sum);
    for (std::size_t k = 1; k < s.size(); ++k)
        CHECK(s[k] < 1e-14);
    CHECK(be_hypothesis_fit(sum, 0.5) == doctest::Approx(s[0] * std::exp(0.5)));

    Rng rng(5);
    CHECK(be_hypothesis_fit(TabFn::constant(random_space(rng, 3), 4.0), 0.5) == 0.0);

    const auto space = ProductSpace::iid(10, FiniteComponent::bernoulli(0.5));
    const auto tri = triangle_count(space, 5);
    const auto ts = s_values(tri);
    double expected = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k)
        expected = std::max(expected, (k + 1.0) * ts[k] * std::exp((k + 1.0) * 0.3));
    CHECK(be_hypothesis_fit(tri, 0.3) == doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS(be_hypothesis_fit(tri, 0.0), ValidationError);
    CHECK_THROWS_AS(be_hypothesis_fit(tri, 1.0), ValidationError);
}

TEST_CASE("Berry-Esseen report")
{
    Rng rng(9);
    const auto degenerate = be_report(TabFn::constant(random_space(rng, 3), 1.0), 0.5);
    CHECK(degenerate.degenerate);
    CHECK(degenerate.marker == "sigma=0");
    CHECK(degenerate.rows.empty());

    const auto f = sum_function(rademacher(16));
    const auto rep = be_report(f, 0.5, 64);
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.n == 16);
    CHECK(rep.rows.size() == 64);
    CHECK(rep.sigma == doctest::Approx(4.0));
    CHECK(rep.t_max == doctest::Approx(0.25 * 4.0 / (800 * rep.a)));
    for (const auto& row : rep.rows) {
        CHECK(std::isfinite(row.ratio));
        CHECK(row.ratio <= 1.0);
    }
    CHECK(rep.cdf_distance == doctest::Approx(rademacher_sup_oracle(16)).epsilon(1e-12));
    CHECK(rep.cdf_ratio <= 1.0);

    const auto fine = be_report(f, 0.5, 128);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& a = rep.rows[i];
        const auto& b = fine.rows[2 * i + 1];
        CHECK(a.t == doctest::Approx(b.t).epsilon(1e-15));
        CHECK(std::abs(a.phi - b.phi) < 1e-15);
    }
}
