#include <cmath>

#include "cumlab/builtins.hpp"
#include "cumlab/clt.hpp"
#include "cumlab/cumulants.hpp"
#include "cumlab/edgeworth.hpp"
#include "cumlab/errors.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace cumlab;
using namespace testing_support;

namespace {

SpacePtr binary(int n, double p = 0.5)
{
    return ProductSpace::iid(n, FiniteComponent::bernoulli(p));
}

TabFn standardized_triangles(int v, double p)
{
    auto s = binary(v * (v - 1) / 2, p);
    const auto mom = triangle_mu_sigma(v, p);
    return triangle_count(s, v).shifted(-mom.mu).scaled(1.0 / std::sqrt(mom.sigma2));
}

} // namespace

TEST_CASE("raw moments")
{
    auto s = binary(3, 0.3);
    const auto c = raw_moments(TabFn::constant(binary(2), 1.5), 4);
    for (int j = 0; j <= 4; ++j)
        CHECK(c[static_cast<std::size_t>(j)] == std::pow(1.5, j));
    auto pm = ProductSpace::iid(1, FiniteComponent::uniform({-1.0, 1.0}));
    auto x = TabFn::from_atoms(pm, [](std::span<const double> a) { return Complex(a[0]); });
    const auto m = raw_moments(x, 5);
    CHECK(m[1] == 0.0);
    CHECK(m[3] == 0.0);
    CHECK(m[5] == 0.0);
    CHECK(m[2] == 1.0);

    // Second pass: weights rebuilt from the component probabilities.
    Rng rng(41);
    auto sp = random_space(rng, 3);
    auto f = random_fn(rng, sp);
    const auto mom = raw_moments(f, 4);
    for (int j = 0; j <= 4; ++j) {
        Complex ref = 0.0;
        for (std::size_t i = 0; i < sp->lattice_size(); ++i) {
            const Point pt = sp->point(i);
            double w = 1.0;
            for (int k = 0; k < 3; ++k)
                w *= sp->component(k).probs[pt.idx[static_cast<std::size_t>(k)]];
            ref += w * std::pow(f.at(i), j);
        }
        CHECK(std::abs(mom[static_cast<std::size_t>(j)] - ref) < 1e-13);
    }
}

TEST_CASE("cumulants of a Bernoulli variable")
{
    const double p = 0.3;
    auto s = binary(1, p);
    auto x = TabFn::from_atoms(s, [](std::span<const double> a) { return Complex(a[0]); });
    const auto k = cumulants(x, 4);
    const double var = p * (1 - p);
    const double c4 = p * std::pow(1 - p, 4) + (1 - p) * std::pow(p, 4);
    CHECK(k[0].real() == doctest::Approx(p).epsilon(1e-15));
    CHECK(k[1].real() == doctest::Approx(var).epsilon(1e-14));
    CHECK(k[2].real() == doctest::Approx(var * (1 - 2 * p)).epsilon(1e-13));
    CHECK(k[3].real() == doctest::Approx(c4 - 3 * var * var).epsilon(1e-13));
    const Complex bad[] = {2.0, 1.0};
    CHECK_THROWS_AS(cumulants_from_moments(bad), ValidationError);
}

TEST_CASE("cumulant identities")
{
    Rng rng(42);
    for (int inst = 0; inst < 20; ++inst) {
        auto sp = random_space(rng, 3);
        auto f = random_fn(rng, sp);
        const Complex c(unif(rng, -1, 1), unif(rng, -1, 1));
        const auto base = cumulants(f, 5);
        const auto shifted = cumulants(f.shifted(c), 5);
        const auto scaled = cumulants(f.scaled(c), 5);
        CHECK(std::abs(shifted[0] - base[0] - c) < 1e-12);
        for (int r = 2; r <= 5; ++r)
            CHECK(std::abs(shifted[static_cast<std::size_t>(r - 1)] - base[static_cast<std::size_t>(r - 1)]) < 1e-11);
        for (int r = 1; r <= 5; ++r)
            CHECK(std::abs(scaled[static_cast<std::size_t>(r - 1)] - std::pow(c, r) * base[static_cast<std::size_t>(r - 1)]) <
                  1e-11);

        // f on coordinate 0, g on coordinates 1 and 2.
        const auto ft = random_table(rng, sp->sub_size(Subset::of({0})));
        const auto gt = random_table(rng, sp->sub_size(Subset::of({1, 2})));
        auto fa = TabFn::from(sp, [&](const Point& x) { return ft[x.idx[0]]; });
        auto gb = TabFn::from(sp, [&](const Point& x) { return gt[x.idx[1] * sp->support(2) + x.idx[2]]; });
        const auto kf = cumulants(fa, 5), kg = cumulants(gb, 5), ks = cumulants(fa + gb, 5);
        for (std::size_t r = 0; r < 5; ++r)
            CHECK(std::abs(ks[r] - kf[r] - kg[r]) < 1e-11);
    }
}

TEST_CASE("joint cumulants")
{
    Rng rng(43);
    auto sp = random_space(rng, 3);
    auto f = random_fn(rng, sp);
    auto g = random_fn(rng, sp);
    const std::vector<TabFn> one{f};
    CHECK(std::abs(joint_cumulant(one) - expect(f)) < 1e-14);
    const std::vector<TabFn> two{f, g};
    CHECK(std::abs(joint_cumulant(two) - (expect(f * g) - expect(f) * expect(g))) < 1e-14);
    const auto k = cumulants(f, 6);
    for (int r = 1; r <= 6; ++r) {
        const std::vector<TabFn> same(static_cast<std::size_t>(r), f);
        CHECK(std::abs(joint_cumulant(same) - k[static_cast<std::size_t>(r - 1)]) < 1e-11);
    }
    CHECK_THROWS_AS(joint_cumulant(std::span<const TabFn>{}), ValidationError);
}

TEST_CASE("truncated cumulant approximation")
{
    auto s = binary(3);
    CHECK(std::abs(truncated_cumulant_approx(TabFn::constant(s, Complex(0.3, 0.2)), 3) - std::exp(Complex(0.3, 0.2))) < 1e-15);
    CHECK(truncated_cumulant_approx(TabFn::constant(s, 0.5), 3) == std::exp(Complex(0.5)));
    Rng rng(44);
    auto sp = random_space(rng, 3);
    auto f = random_fn(rng, sp, 0.2);
    const Complex exact = expect(f.map([](Complex z) { return std::exp(z); }));
    double prev = 1e300;
    for (int m : {1, 2, 4, 8}) {
        const double err = std::abs(truncated_cumulant_approx(f, m) - exact);
        CHECK(err <= prev);
        prev = err;
    }
    CHECK(prev < 1e-8);

    // Purely imaginary exponent reproduces the characteristic function.
    auto w = standardized_triangles(4, 0.5);
    for (double t : {0.01, 0.05, 0.1}) {
        const Complex via = truncated_cumulant_approx(w.scaled(Complex(0.0, t)), 8);
        CHECK(std::abs(via - char_fn(w, t)) < 1e-10);
    }
}

TEST_CASE("alpha search")
{
    const std::vector<double> zero{0.0, 0.0, 0.0};
    REQUIRE(find_alpha(zero, 2).has_value());
    CHECK(*find_alpha(zero, 2) == 0.0);

    const double s1 = 1e-3;
    const std::vector<double> sums{s1, 0.0, 0.0, 0.0};
    const auto a = find_alpha(sums, 3);
    REQUIRE(a.has_value());
    // t = 1 condition 2 e^{3α/2} s ≤ α, tight at the minimal α.
    CHECK(2 * std::exp(1.5 * *a) * s1 <= *a + 1e-15);
    CHECK(2 * std::exp(1.5 * (*a - 1e-9)) * s1 > *a - 1e-9);
    CHECK(complex_hypothesis_lhs(sums, 2, *a) == 0.0);

    const std::vector<double> rough{0.02, 0.0};
    CHECK_FALSE(find_alpha(rough, 1).has_value());

    // A mixed profile: the answer satisfies every t and is minimal.
    const std::vector<double> mixed{5e-4, 2e-4, 1e-4, 5e-5};
    const auto b = find_alpha(mixed, 4);
    REQUIRE(b.has_value());
    double worst = 0.0;
    for (int t = 1; t <= 4; ++t)
        worst = std::max(worst, complex_hypothesis_lhs(mixed, t, *b) - *b);
    CHECK(worst <= 1e-15);
    double below = 0.0;
    for (int t = 1; t <= 4; ++t)
        below = std::max(below, complex_hypothesis_lhs(mixed, t, *b - 1e-9) - (*b - 1e-9));
    CHECK(below > 0.0);
}

TEST_CASE("bound formulas")
{
    CHECK(delta_bound(0.0, 3) == 0.0);
    CHECK(delta_bound(0.005, 1) == doctest::Approx(std::expm1(0.25)));
    CHECK(kappa_bound(10, 2, 0.01) == doctest::Approx(10.0 * 1.0 / 100.0 * 0.64));
    CHECK(kappa_bound(4, 3, 0.005) == doctest::Approx(4.0 * 2.0 / 150.0 * 0.064));
}

TEST_CASE("certificates")
{
    auto s = binary(4);
    const auto c = certify(TabFn::constant(s, Complex(0.0, 0.4)), 3);
    CHECK(c.alpha == 0.0);
    CHECK(std::abs(c.delta_actual) == 0.0);
    CHECK(c.hypotheses_hold());
    CHECK(c.consistent());

    const auto w = standardized_triangles(4, 0.5);
    const auto cert = certify(w.scaled(Complex(0.0, 1e-3)), 3);
    CHECK(cert.hypotheses_hold());
    CHECK(cert.delta_ok);
    CHECK(cert.kappa_bound.size() == 2);
    CHECK(cert.consistent());
    CHECK(std::abs(std::pow(1.0 + cert.delta_actual, cert.n) * cert.approx - cert.exact) < 1e-12);

    const auto loose = certify(w.scaled(Complex(0.0, 5.0)), 2);
    CHECK_FALSE(loose.alpha.has_value());
    CHECK(std::isinf(loose.delta_bound));
    CHECK(loose.consistent());

    auto sp = binary(5);
    const auto real = certify_real(sum_function(sp).scaled(1e-3), 3);
    REQUIRE(real.alpha.has_value());
    CHECK(*real.alpha == doctest::Approx(1e-3));
    CHECK(real.consistent());
    CHECK_THROWS_AS(certify_real(w.scaled(Complex(0.0, 1.0)), 2), ValidationError);
    CHECK_THROWS_AS(certify(w, 0), ValidationError);
}

TEST_CASE("certificates on random smooth instances")
{
    Rng rng(45);
    int certified = 0;
    for (int inst = 0; inst < 40; ++inst) {
        auto sp = random_space(rng, unif_int(rng, 2, 5));
        auto f = random_fn(rng, sp, std::pow(10.0, unif(rng, -5, -2)));
        for (int m = 1; m <= 3; ++m) {
            const auto cert = certify(f, m);
            CHECK(cert.consistent());
            certified += cert.hypotheses_hold() ? 1 : 0;
            const auto rc = certify_real(f.map([](Complex z) { return Complex(z.real()); }), m);
            CHECK(rc.consistent());
        }
    }
    CHECK(certified > 0);
}
