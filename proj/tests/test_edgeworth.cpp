#include <cmath>
#include <numbers>

#include "cumlab/builtins.hpp"
#include "cumlab/clt.hpp"
#include "cumlab/edgeworth.hpp"
#include "cumlab/errors.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace cumlab;
using namespace testing_support;

namespace {

// Partitions of s with parts at most k.
long count_partitions(int s, int k)
{
    if (s == 0)
        return 1;
    if (s < 0 || k == 0)
        return 0;
    return count_partitions(s - k, k) + count_partitions(s, k - 1);
}

double normal_density(double x)
{
    return std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi);
}

} // namespace

TEST_CASE("integer partitions")
{
    const auto p0 = partitions(0);
    REQUIRE(p0.size() == 1);
    CHECK(p0[0].empty());
    const auto p4 = partitions(4);
    CHECK(p4.size() == 5);
    for (const auto& k : p4) {
        int total = 0;
        for (std::size_t j = 0; j < k.size(); ++j)
            total += static_cast<int>(j + 1) * k[j];
        CHECK(total == 4);
    }
    for (int s = 0; s <= 20; ++s)
        CHECK(static_cast<long>(partitions(s).size()) == count_partitions(s, s));
    CHECK_THROWS_AS(partitions(-1), ValidationError);
}

TEST_CASE("Edgeworth polynomials")
{
    const LambdaSeq lam({0.3, -0.2, 0.5, 0.1});
    const auto p0 = edgeworth_poly(0, lam);
    CHECK(p0.coeffs.size() == 1);
    CHECK(p0.coeffs.at(0) == 1.0);
    const auto p1 = edgeworth_poly(1, lam);
    CHECK(p1.coeffs.size() == 1);
    CHECK(p1.coeffs.at(3) == doctest::Approx(0.3 / 6));
    const auto p2 = edgeworth_poly(2, lam);
    CHECK(p2.coeffs.size() == 2);
    CHECK(p2.coeffs.at(4) == doctest::Approx(-0.2 / 24));
    CHECK(p2.coeffs.at(6) == doctest::Approx(0.09 / 72));

    const auto t2 = edgeworth_terms(2);
    bool found = false;
    for (const auto& t : t2)
        if (t.degree == 6)
            found = t.coeff == Rational(1, 72);
    CHECK(found);

    for (int s = 1; s <= 8; ++s) {
        for (const auto& t : edgeworth_terms(s)) {
            CHECK((t.degree - s) % 2 == 0);
            CHECK(t.degree >= s + 2);
            CHECK(t.degree <= 3 * s);
        }
    }
    CHECK_THROWS_AS(lam.at(7), ValidationError);
    CHECK_THROWS_AS(LambdaSeq({NAN}), ValidationError);
}

TEST_CASE("derivatives of the normal density")
{
    for (double x : {-2.0, 0.0, 0.7, 3.1})
        CHECK(phi_deriv(0, x) == doctest::Approx(normal_density(x)).epsilon(1e-15));
    CHECK(phi_deriv(1, 0.0) == 0.0);
    const double x = 0.7, h = 1e-3;
    const double fd = (normal_density(x + 2 * h) - 2 * normal_density(x + h) + 2 * normal_density(x - h) -
                       normal_density(x - 2 * h)) /
                      (2 * h * h * h);
    CHECK(std::abs(phi_deriv(3, x) - fd) < 1e-6);
    CHECK(hermite_he(4, 2.0) == doctest::Approx(16.0 - 24.0 + 3.0));
}

TEST_CASE("Edgeworth series")
{
    const LambdaSeq lam({0.4, -0.3, 0.2, 0.15});
    for (double x : {-1.0, 0.0, 2.5})
        CHECK(edgeworth_series(0, lam, x) == doctest::Approx(phi(x)));
    CHECK(edgeworth_series(1, lam, 0.0) == doctest::Approx(phi(0.0)));
    CHECK_THROWS_AS(edgeworth_series(3, LambdaSeq({0.1}), 0.0), ValidationError);

    // Each correction is a derivative, so every E_m integrates to 1.
    for (int m = 0; m <= 4; ++m) {
        const int steps = 4000;
        const double a = -12.0, b = 12.0, h = (b - a) / steps;
        double sum = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            sum += w * edgeworth_series(m, lam, a + i * h);
        }
        CHECK(sum * h / 3 == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("triangle count moments")
{
    const auto full = triangle_mu_sigma(6, 1.0);
    CHECK(full.mu == 20.0);
    CHECK(full.sigma2 == 0.0);
    const auto empty = triangle_mu_sigma(6, 0.0);
    CHECK(empty.mu == 0.0);
    CHECK(empty.sigma2 == 0.0);
    const auto pmf = exact_triangle_pmf(6, 0.5);
    double mean = 0.0, second = 0.0;
    for (std::size_t k = 0; k < pmf.probs.size(); ++k) {
        mean += k * pmf.probs[k];
        second += static_cast<double>(k * k) * pmf.probs[k];
    }
    CHECK(mean == doctest::Approx(pmf.mu).epsilon(1e-12));
    CHECK(second - mean * mean == doctest::Approx(pmf.sigma2).epsilon(1e-12));
}

TEST_CASE("exact triangle distribution")
{
    const double p = 0.37;
    const auto three = exact_triangle_pmf(3, p);
    REQUIRE(three.probs.size() == 2);
    CHECK(three.probs[1] == doctest::Approx(p * p * p).epsilon(1e-15));
    CHECK(three.probs[0] == doctest::Approx(1 - p * p * p).epsilon(1e-15));
    const auto four = exact_triangle_pmf(4, 0.5);
    CHECK(four.probs.size() == 5);
    CHECK(four.probs[4] == 1.0 / 64);
    CHECK(four.probs[3] == 0.0);
    for (int n : {4, 5, 6}) {
        const auto pmf = exact_triangle_pmf(n, 0.3);
        double total = 0.0;
        for (double q : pmf.probs)
            total += q;
        CHECK(std::abs(total - 1.0) < 1e-12);
        CHECK(pmf.probs.size() == static_cast<std::size_t>(n * (n - 1) * (n - 2) / 6 + 1));
    }
    CHECK_THROWS_AS(exact_triangle_pmf(8, 0.5), ValidationError);
    CHECK_THROWS_AS(exact_triangle_pmf(5, 1.5), ValidationError);
}

TEST_CASE("triangle distribution agrees with the edge-indicator function")
{
    for (int v : {4, 5}) {
        const double p = 0.35;
        auto space = ProductSpace::iid(v * (v - 1) / 2, FiniteComponent::bernoulli(p));
        const auto dist = distribution_of(triangle_count(space, v));
        const auto pmf = exact_triangle_pmf(v, p);
        for (std::size_t i = 0; i < dist.values.size(); ++i) {
            const auto k = static_cast<std::size_t>(dist.values[i]);
            CHECK(dist.probs[i] == doctest::Approx(pmf.probs[k]).epsilon(1e-12));
        }
        double realized = 0.0;
        for (double q : pmf.probs)
            realized += q > 0 ? 1 : 0;
        CHECK(realized == dist.values.size());
    }
}

TEST_CASE("cumulants of the triangle distribution")
{
    for (int n : {4, 5, 6, 7}) {
        const auto pmf = exact_triangle_pmf(n, 0.5);
        const auto c = pmf_cumulants(pmf, 6);
        CHECK(c.kappa[0] == doctest::Approx(pmf.mu).epsilon(1e-12));
        CHECK(c.kappa[1] == doctest::Approx(pmf.sigma2).epsilon(1e-12));
        CHECK(c.lambda.max_order() == 6);
        CHECK(c.lambda.at(3) == doctest::Approx(c.kappa[2] / std::pow(c.kappa[1], 1.5)));
        // Observed right skew at p = 1/2; recorded, not a theorem.
        CHECK(c.kappa[2] >= 0.0);
    }
    const auto degenerate = pmf_cumulants(exact_triangle_pmf(5, 1.0), 4);
    for (int r = 2; r <= 4; ++r)
        CHECK(degenerate.kappa[static_cast<std::size_t>(r - 1)] == 0.0);
    CHECK(degenerate.lambda.values().empty());
}

TEST_CASE("Edgeworth report")
{
    const auto rep = edgeworth_report(6, 0.5, 2);
    CHECK(rep.rows.size() == 21);
    CHECK(rep.sup_error[1] < rep.sup_error[0]);
    double local_clt = 0.0;
    for (const auto& row : rep.rows)
        local_clt = std::max(local_clt, std::abs(row.scaled_prob - phi((row.k - rep.mu) / rep.sigma)));
    CHECK(rep.sup_error[0] == doctest::Approx(local_clt));
    for (int m = 0; m <= 2; ++m) {
        const auto& row = rep.rows[static_cast<std::size_t>(rep.argmax[static_cast<std::size_t>(m)])];
        CHECK(std::abs(row.scaled_prob - row.series[static_cast<std::size_t>(m)]) == rep.sup_error[static_cast<std::size_t>(m)]);
    }
    CHECK_THROWS_AS(edgeworth_report(6, 1.0, 2), DegenerateModel);
}
