#include <cmath>
#include <string>

#include "cumlab/errors.hpp"
#include "cumlab/regular_graphs.hpp"
#include "doctest.h"

using namespace cumlab;

namespace {

BigInt double_factorial(int k)
{
    BigInt out = 1;
    for (int i = k; i > 1; i -= 2)
        out *= i;
    return out;
}

// Expands c · x^shift · (a_0 + a_1 x + ...) into plain coefficients.
std::vector<Rational> expand(const Rational& c, int shift, std::vector<long> inner)
{
    std::vector<Rational> out(static_cast<std::size_t>(shift), Rational(0));
    for (long a : inner)
        out.push_back(c * a);
    return out;
}

} // namespace

TEST_CASE("regular graph counts: trivial and known values")
{
    for (int n = 1; n <= 12; ++n) {
        CHECK(rg_exact(n, 0) == 1);
        CHECK(rg_exact(n, n - 1) == 1);
    }
    CHECK(rg_exact(3, 2) == 1);
    CHECK(rg_exact(4, 1) == 3);
    CHECK(rg_exact(4, 2) == 3);
    CHECK(rg_exact(5, 2) == 12);
    CHECK(rg_exact(6, 3) == 70);
    CHECK(rg_exact(5, 3) == 0);
    CHECK(rg_exact(7, 1) == 0);
    for (int n = 2; n <= 20; n += 2)
        CHECK(rg_exact(n, 1) == double_factorial(n - 1));
    CHECK_THROWS_AS(rg_exact(5, 5), ValidationError);
    CHECK_THROWS_AS(rg_exact(5, -1), ValidationError);
}

TEST_CASE("regular graph counts agree with brute force")
{
    for (int n = 1; n <= 7; ++n)
        for (int d = 0; d < n; ++d)
            CHECK(rg_exact(n, d) == rg_bruteforce(n, d));
    CHECK(rg_bruteforce(6, 3) == 70);
    CHECK_THROWS_AS(rg_bruteforce(8, 3), ValidationError);
}

TEST_CASE("complement symmetry and elimination order")
{
    RgOptions other;
    other.priority = VertexPriority::min_residual;
    for (int n = 2; n <= 14; ++n)
        for (int d = 0; d < n; ++d) {
            const auto a = rg_exact(n, d);
            CHECK(a == rg_exact(n, n - 1 - d));
            CHECK(a == rg_exact(n, d, other));
        }
}

TEST_CASE("state cap")
{
    RgOptions tiny;
    tiny.max_states = 3;
    CHECK_THROWS_AS(rg_exact(14, 7, tiny), CapExceeded);
}

TEST_CASE("big integer log")
{
    CHECK(log_bigcount(BigInt(70)) == doctest::Approx(std::log(70.0)).epsilon(1e-15));
    const BigInt big = BigInt(1) << 300;
    CHECK(log_bigcount(big * 3) == doctest::Approx(300 * std::log(2.0) + std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("series polynomials match the published list")
{
    using R = Rational;
    const std::array<std::vector<Rational>, 7> literal = {
        expand(R(1, 4), 1, {1}),
        expand(R(-1, 4), 2, {1}),
        expand(R(1, 24), 2, {2, -23}),
        expand(R(1, 24), 3, {22, -129}),
        expand(R(-1, 12), 3, {3, -115, 483}),
        expand(R(-1, 60), 4, {375, -6615, 22097}),
        expand(R(1, 720), 4, {1046, -87318, 1002900, -2791541}),
    };
    const auto& polys = regular_series_polys();
    for (std::size_t j = 0; j < 7; ++j) {
        INFO("p_" << j + 1);
        REQUIRE(polys[j].size() == literal[j].size());
        for (std::size_t k = 0; k < literal[j].size(); ++k)
            CHECK(polys[j][k] == literal[j][k]);
    }
    CHECK(eval_series_poly(1, 0.2) == doctest::Approx(0.05));
    CHECK(eval_series_poly(2, 0.2) == doctest::Approx(-0.01));
    CHECK_THROWS_AS(eval_series_poly(8, 0.1), ValidationError);
}

TEST_CASE("asymptotic series")
{
    const auto s = rg_asymptotic(12, 6, 1);
    const double exact = log_bigcount(rg_exact(12, 6));
    CHECK(std::abs(s.log_approx - exact) / exact < 0.05);
    CHECK(s.lambda == doctest::Approx(6.0 / 11));
    CHECK(s.Lambda <= 0.25);
    CHECK(s.terms.size() == 1);

    const double e14 = log_bigcount(rg_exact(14, 7));
    double prev = INFINITY;
    for (int m = 1; m <= 7; ++m) {
        const double gap = std::abs(rg_asymptotic(14, 7, m).log_approx - e14);
        CHECK(gap <= prev);
        prev = gap;
    }
    CHECK_THROWS_AS(rg_asymptotic(12, 6, 8), ValidationError);
    CHECK_THROWS_AS(rg_asymptotic(12, 11, 1), ValidationError);
    CHECK(std::isfinite(conjecture_gap(10, 3)));
    CHECK_THROWS_AS(conjecture_gap(9, 3), ValidationError);
}

TEST_CASE("edge series coefficients")
{
    const Rational lam(2, 7);
    const Rational Lam = lam * (1 - lam);
    const auto exact = log_edge_coeffs_exact(lam, 6);
    REQUIRE(exact.size() == 6);
    CHECK(exact[0] == GaussianRational(0, lam));
    CHECK(exact[1] == GaussianRational(-Lam / 2));
    CHECK(exact[2] == GaussianRational(0, -Lam * (1 - 2 * lam) / 6));
    const auto approx = log_edge_coeffs(2.0 / 7, 6);
    for (std::size_t k = 0; k < 6; ++k)
        CHECK(std::abs(approx[k] - exact[k].to_complex()) < 1e-15);
}

TEST_CASE("P_d polynomials")
{
    const auto p1 = pd_poly(1);
    CHECK(p1 == MultiPoly::variable(1, 0, GaussianRational(-1)));
    const auto p2 = pd_poly(2);
    CHECK(p2.coefficient({2, 0}) == GaussianRational(Rational(1, 2)));
    CHECK(p2.coefficient({0, 1}) == GaussianRational(0, Rational(-1, 2)));
    CHECK(p2.coefficient({0, 0}) == GaussianRational(Rational(-1, 2)));
    CHECK(p2.terms().size() == 3);
    for (int d = 1; d <= 6; ++d)
        CHECK(pd_poly(d).total_degree() == d);
}
