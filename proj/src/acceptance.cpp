#include "cumlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "cumlab/builtins.hpp"
#include "cumlab/clt.hpp"
#include "cumlab/cumulants.hpp"
#include "cumlab/decomposition.hpp"
#include "cumlab/edgeworth.hpp"
#include "cumlab/regular_graphs.hpp"

namespace cumlab {

namespace {

using Clock = std::chrono::steady_clock;
using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Independent components with 2 or 3 atoms. Dyadic spaces use probabilities
/// that are multiples of 1/4 so averages of integer tables stay exact.
SpacePtr random_space(Rng& rng, int n, bool dyadic)
{
    std::vector<FiniteComponent> comps;
    for (int j = 0; j < n; ++j) {
        const int k = uniform_int(rng, 2, 3);
        FiniteComponent c;
        for (int a = 0; a < k; ++a)
            c.atoms.push_back(dyadic ? a : uniform(rng, -1.0, 1.0));
        if (dyadic) {
            c.probs = k == 2 ? std::vector<double>{0.25, 0.75} : std::vector<double>{0.25, 0.25, 0.5};
            if (uniform_int(rng, 0, 1) == 1)
                std::reverse(c.probs.begin(), c.probs.end());
        } else {
            double total = 0.0;
            for (int a = 0; a < k; ++a) {
                c.probs.push_back(uniform(rng, 0.1, 1.0));
                total += c.probs.back();
            }
            for (auto& p : c.probs)
                p /= total;
            // Renormalize so the probabilities sum to 1 as exactly as possible.
            double rest = 1.0;
            for (int a = 0; a + 1 < k; ++a)
                rest -= c.probs[static_cast<std::size_t>(a)];
            c.probs.back() = rest;
        }
        comps.push_back(std::move(c));
    }
    return ProductSpace::make(std::move(comps));
}

Table random_table(Rng& rng, std::size_t len, bool integer)
{
    Table t(len);
    for (auto& z : t) {
        if (integer)
            z = Complex(uniform_int(rng, -3, 3), uniform_int(rng, -3, 3));
        else
            z = Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    }
    return t;
}

TabFn random_fn(Rng& rng, const SpacePtr& space, bool integer)
{
    return TabFn(space, random_table(rng, space->lattice_size(), integer));
}

Decomposition random_decomposition(Rng& rng, const SpacePtr& space, bool integer)
{
    Decomposition pi(space);
    const int n = space->dim();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (uniform(rng, 0.0, 1.0) < 0.6) {
            const Subset v(mask);
            pi.set_part(v, random_table(rng, space->sub_size(v), integer));
        }
    }
    return pi;
}

/// The point whose coordinates in V follow the V-sub-lattice index and are 0
/// elsewhere.
Point point_on(const ProductSpace& space, Subset v, std::size_t sub)
{
    Point y{std::vector<std::size_t>(static_cast<std::size_t>(space.dim()), 0)};
    auto elems = v.elements();
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
        const std::size_t radix = space.support(*it);
        y.idx[static_cast<std::size_t>(*it)] = sub % radix;
        sub /= radix;
    }
    return y;
}

double max_diff(const TabFn& a, const TabFn& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        worst = std::max(worst, std::abs(a.at(i) - b.at(i)));
    return worst;
}

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

class Timer {
public:
    double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

private:
    Clock::time_point start_ = Clock::now();
};

CriterionResult finish(CriterionResult r, const Timer& timer, bool ok)
{
    r.seconds = timer.seconds();
    r.pass = ok && r.seconds < r.limit_seconds;
    if (ok && !r.pass)
        r.detail += "; runtime limit exceeded";
    return r;
}

} // namespace

CriterionResult check_algebra_suite()
{
    CriterionResult r{1, "algebra suite", false, "", 0.0, 30.0};
    Timer timer;
    Rng rng(0xA1);
    constexpr int kInstances = 240;
    int failures = 0;
    int exact_checks = 0;
    double worst_realize = 0.0, worst_multiply = 0.0, worst_diff = 0.0;
    std::string first_failure;
    auto fail = [&](const std::string& what, int inst) {
        if (failures++ == 0)
            first_failure = what + " (instance " + std::to_string(inst) + ")";
    };

    for (int inst = 0; inst < kInstances; ++inst) {
        const bool dyadic = inst % 2 == 0;
        const int n = uniform_int(rng, 1, 6);
        const auto space = random_space(rng, n, dyadic);

        const TabFn f = random_fn(rng, space, dyadic);
        const double scale_f = std::max(1.0, f.sup_abs());
        const double e_realize = max_diff(realize(hoeffding(f)), f);
        worst_realize = std::max(worst_realize, e_realize / scale_f);
        if (e_realize > 1e-12 * scale_f)
            fail("realize(hoeffding(f)) != f", inst);

        const auto pi = random_decomposition(rng, space, dyadic);
        const auto omega = random_decomposition(rng, space, dyadic);
        const double scale_m = std::max(1.0, norm_gamma(pi, 0.0) * norm_gamma(omega, 0.0));
        const double e_mult = max_diff(realize(pi * omega), realize(pi) * realize(omega));
        worst_multiply = std::max(worst_multiply, e_mult / scale_m);
        if (e_mult > 1e-12 * scale_m)
            fail("realize(pi*omega) != realize(pi)*realize(omega)", inst);

        const double gamma = uniform(rng, 0.0, 2.0);
        if (norm_gamma(pi * omega, gamma) > norm_gamma(pi, gamma) * norm_gamma(omega, gamma) * (1.0 + 1e-12))
            fail("gamma-norm not submultiplicative", inst);

        for (int j = 0; j < n; ++j) {
            const auto once = expect_coordinate(pi, j);
            ++exact_checks;
            if (!approx_equal(expect_coordinate(once, j), once, 0.0))
                fail("E^j not idempotent", inst);
            for (int i = 0; i < j; ++i) {
                const auto ij = expect_coordinate(expect_coordinate(pi, j), i);
                const auto ji = expect_coordinate(once, i);
                const bool ok = dyadic ? approx_equal(ij, ji, 0.0) : approx_equal(ij, ji, 1e-12);
                exact_checks += dyadic ? 1 : 0;
                if (!ok)
                    fail("E^i E^j != E^j E^i", inst);
            }
        }

        // ∂^V_y π_f realizes Σ_W (-1)^{|W|} f(x ▷_W y).
        const auto pf = hoeffding(f);
        const Subset v(static_cast<std::uint32_t>(uniform_int(rng, 0, (1 << n) - 1)));
        const Point y = point_on(*space, v, static_cast<std::size_t>(uniform_int(rng, 0, 1 << 20)) % space->sub_size(v));
        const TabFn lhs = realize(difference(pf, v, y));
        const TabFn rhs = TabFn::from(space, [&](const Point& x) {
            Complex s = 0.0;
            v.for_each_subset([&](Subset w) {
                s += (w.size() % 2 == 0 ? 1.0 : -1.0) * f(splice(*space, x, y, w));
            });
            return s;
        });
        const double scale_d = scale_f * std::ldexp(1.0, v.size());
        const double e_diff = max_diff(lhs, rhs);
        worst_diff = std::max(worst_diff, e_diff / scale_d);
        if (e_diff > 1e-12 * scale_d)
            fail("difference operator != alternating sum", inst);
    }

    r.detail = std::to_string(kInstances) + " instances, " + std::to_string(exact_checks) +
               " exact E^j checks; worst rel errors realize " + sci(worst_realize) + ", multiply " +
               sci(worst_multiply) + ", difference " + sci(worst_diff);
    if (failures > 0)
        r.detail += "; " + std::to_string(failures) + " failures, first: " + first_failure;
    return finish(r, timer, failures == 0);
}

CriterionResult check_partial_delta_lemma()
{
    CriterionResult r{2, "difference bound |d^V_y pi_f(W,x)| <= dbar_{V+W}", false, "", 0.0, 60.0};
    Timer timer;
    Rng rng(0xB2);
    constexpr int kInstances = 120;
    long samples = 0;
    long violations = 0;
    double worst_ratio = 0.0;
    for (int inst = 0; inst < kInstances; ++inst) {
        const int n = uniform_int(rng, 1, 5);
        const auto space = random_space(rng, n, false);
        // Mix smooth-ish and rough functions.
        TabFn f = random_fn(rng, space, false);
        if (inst % 3 == 0)
            f = sum_function(space).scaled(Complex(uniform(rng, -1, 1), uniform(rng, -1, 1))) + f.scaled(0.05);
        const double slack_base = 1e-12 * std::max(1.0, f.sup_abs());
        const auto dbar = delta_bar_all(f);
        const auto pf = hoeffding(f);
        for (std::uint32_t vm = 0; vm < (1u << n); ++vm) {
            const Subset v(vm);
            for (std::size_t s = 0; s < space->sub_size(v); ++s) {
                const auto d = difference(pf, v, point_on(*space, v, s));
                for (const auto& [w, table] : d.parts()) {
                    const Subset u = v | w;
                    const double bound = dbar[u.bits()];
                    const double slack = slack_base * std::ldexp(1.0, u.size());
                    for (const auto& z : table) {
                        ++samples;
                        const double a = std::abs(z);
                        if (a > bound + slack)
                            ++violations;
                        if (bound > slack)
                            worst_ratio = std::max(worst_ratio, a / bound);
                    }
                }
            }
        }
    }
    r.detail = std::to_string(kInstances) + " instances, " + std::to_string(samples) + " samples, " +
               std::to_string(violations) + " violations, max |lhs|/bound " + sci(worst_ratio);
    return finish(r, timer, violations == 0 && samples > 0);
}

CriterionResult check_certificates()
{
    CriterionResult r{3, "cumulant certificates", false, "", 0.0, 120.0};
    Timer timer;
    struct Family {
        std::string name;
        TabFn g;
    };
    std::vector<Family> families;
    for (double p : {0.5, 0.3}) {
        for (int n : {2, 4, 6, 8, 10}) {
            auto space = ProductSpace::iid(n, FiniteComponent::bernoulli(p));
            const double sd = std::sqrt(n * p * (1.0 - p));
            families.push_back({"sum n=" + std::to_string(n),
                                sum_function(space).shifted(-n * p).scaled(1.0 / sd)});
        }
        for (int v : {4, 5}) {
            const int n = v * (v - 1) / 2;
            auto space = ProductSpace::iid(n, FiniteComponent::bernoulli(p));
            const auto mom = triangle_mu_sigma(v, p);
            families.push_back({"triangles v=" + std::to_string(v),
                                triangle_count(space, v).shifted(-mom.mu).scaled(1.0 / std::sqrt(mom.sigma2))});
        }
    }
    const std::vector<double> ts = {1e-4, 3e-4, 1e-3, 2e-3, 3e-3, 5e-3, 0.01, 0.03, 0.1, 0.3, 1.0};
    int evaluated = 0, certified = 0, violations = 0;
    std::string first;
    for (const auto& fam : families) {
        for (double t : ts) {
            const TabFn f = fam.g.scaled(Complex(0.0, t));
            for (int m = 1; m <= 4; ++m) {
                const auto cert = certify(f, m);
                ++evaluated;
                if (!cert.hypotheses_hold())
                    continue;
                ++certified;
                if (!cert.consistent()) {
                    if (violations++ == 0)
                        first = fam.name + " t=" + sci(t) + " m=" + std::to_string(m);
                }
            }
        }
    }
    r.detail = std::to_string(evaluated) + " runs, " + std::to_string(certified) + " with hypotheses satisfied, " +
               std::to_string(violations) + " violations";
    if (violations > 0)
        r.detail += " (first: " + first + ")";
    return finish(r, timer, violations == 0 && certified > 0);
}

CriterionResult check_edgeworth_coefficients()
{
    CriterionResult r{4, "Edgeworth coefficients", false, "", 0.0, 10.0};
    Timer timer;
    struct Expected {
        int s;
        std::map<int, int> powers; // r -> exponent of λ_r
        int phi_order;
        long denominator;
    };
    // The E_4 expansion written out by hand, with the sign (-1)^s in front of
    // each block.
    const std::vector<Expected> display = {
        {0, {}, 0, 1},
        {1, {{3, 1}}, 3, 6},
        {2, {{4, 1}}, 4, 24},
        {2, {{3, 2}}, 6, 72},
        {3, {{5, 1}}, 5, 120},
        {3, {{3, 1}, {4, 1}}, 7, 144},
        {3, {{3, 3}}, 9, 1296},
        {4, {{6, 1}}, 6, 720},
        {4, {{4, 2}}, 8, 1152},
        {4, {{3, 1}, {5, 1}}, 8, 720},
        {4, {{3, 2}, {4, 1}}, 10, 1728},
        {4, {{3, 4}}, 12, 31104},
    };
    int matched = 0;
    int problems = 0;
    std::string first;
    for (int s = 0; s <= 4; ++s) {
        const auto terms = edgeworth_terms(s);
        int expected_count = 0;
        for (const auto& e : display) {
            if (e.s != s)
                continue;
            ++expected_count;
            bool found = false;
            for (const auto& t : terms) {
                std::map<int, int> powers;
                for (std::size_t i = 0; i < t.lambda_powers.size(); ++i)
                    if (t.lambda_powers[i] != 0)
                        powers[static_cast<int>(i) + 3] = t.lambda_powers[i];
                if (powers != e.powers)
                    continue;
                found = true;
                // P(-D) turns y^k into (-1)^k φ^{(k)}; the display carries (-1)^s.
                const bool sign_ok = (t.degree - s) % 2 == 0;
                if (t.degree == e.phi_order && sign_ok && t.coeff == Rational(1, e.denominator))
                    ++matched;
                else if (problems++ == 0)
                    first = "s=" + std::to_string(s) + " 1/" + std::to_string(e.denominator);
            }
            if (!found && problems++ == 0)
                first = "missing s=" + std::to_string(s) + " 1/" + std::to_string(e.denominator);
        }
        if (static_cast<int>(terms.size()) != expected_count && problems++ == 0)
            first = "extra terms at s=" + std::to_string(s);
    }

    // Numeric agreement of E_4 with the display at random λ and x.
    Rng rng(0xD4);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const LambdaSeq lam({uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)});
        const double x = uniform(rng, -6, 6);
        double ref = 0.0;
        double mag = 0.0;
        for (const auto& e : display) {
            double c = 1.0 / static_cast<double>(e.denominator) * (e.s % 2 == 0 ? 1.0 : -1.0);
            for (const auto& [rr, k] : e.powers)
                c *= std::pow(lam.at(rr), k);
            const double term = c * phi_deriv(e.phi_order, x);
            ref += term;
            mag += std::abs(term);
        }
        worst = std::max(worst, std::abs(edgeworth_series(4, lam, x) - ref) / std::max(mag, 1e-300));
    }
    if (worst > 1e-12 && problems++ == 0)
        first = "numeric E_4 mismatch " + sci(worst);

    r.detail = std::to_string(matched) + "/" + std::to_string(display.size()) +
               " coefficients exact; numeric E_4 rel diff " + sci(worst);
    if (problems > 0)
        r.detail += "; problem: " + first;
    return finish(r, timer, problems == 0 && matched == static_cast<int>(display.size()));
}

CriterionResult check_triangle_edgeworth()
{
    CriterionResult r{5, "triangle counts, desk scale", false, "", 0.0, 120.0};
    Timer timer;
    bool ok = true;
    std::ostringstream detail;
    for (int n : {6, 7}) {
        for (double p : {0.3, 0.5}) {
            const auto pmf = exact_triangle_pmf(n, p);
            const auto cum = pmf_cumulants(pmf, 2);
            const double mu_rel = std::abs(cum.kappa[0] - pmf.mu) / pmf.mu;
            const double var_rel = std::abs(cum.kappa[1] - pmf.sigma2) / pmf.sigma2;
            const auto rep = edgeworth_report(n, p, 1);
            const bool finite = std::isfinite(rep.sup_error[0]) && std::isfinite(rep.sup_error[1]);
            const bool improves = rep.sup_error[1] <= rep.sup_error[0];
            const bool moments = mu_rel <= 1e-10 && var_rel <= 1e-10;
            ok = ok && finite && improves && moments;
            if (detail.tellp() > 0)
                detail << "; ";
            detail << "n=" << n << " p=" << p << ": E0 " << sci(rep.sup_error[0]) << " E1 " << sci(rep.sup_error[1])
                   << (improves ? "" : " (no improvement)") << (moments ? "" : " (moment mismatch)");
        }
    }
    r.detail = detail.str();
    return finish(r, timer, ok);
}

CriterionResult check_berry_esseen()
{
    CriterionResult r{6, "Berry-Esseen", false, "", 0.0, 60.0};
    Timer timer;
    int feller_checks = 0, feller_fail = 0;
    double tightest = 1e300;
    for (int n : {4, 8, 16, 32}) {
        const auto dist = bernoulli_sum(n, 0.5);
        const double sup = sup_cdf_distance(dist);
        for (double T : {2.0, 5.0, 10.0}) {
            const double bound = feller_bound(dist, T, 8192);
            ++feller_checks;
            if (!(bound >= sup))
                ++feller_fail;
            tightest = std::min(tightest, bound / sup);
        }
    }
    double lo = 1e300, hi = 0.0;
    for (int n = 4; n <= 256; ++n) {
        const double v = sup_cdf_distance(bernoulli_sum(n, 0.5)) * std::sqrt(n);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool bracket = lo >= 0.1 && hi <= 0.8;
    r.detail = std::to_string(feller_checks - feller_fail) + "/" + std::to_string(feller_checks) +
               " Feller bounds dominate (min bound/sup " + sci(tightest) + "); sqrt(n)*sup in [" + sci(lo) + ", " +
               sci(hi) + "] for n=4..256";
    return finish(r, timer, feller_fail == 0 && bracket);
}

CriterionResult check_regular_graphs()
{
    CriterionResult r{7, "regular graph counts", false, "", 0.0, 60.0};
    Timer timer;
    std::vector<std::string> problems;
    int brute = 0;
    for (int n = 1; n <= 7; ++n) {
        for (int d = 0; d < n; ++d) {
            ++brute;
            if (rg_exact(n, d) != rg_bruteforce(n, d))
                problems.push_back("brute force mismatch at (" + std::to_string(n) + "," + std::to_string(d) + ")");
        }
    }
    if (rg_exact(4, 1) != 3 || rg_exact(5, 2) != 12 || rg_exact(6, 3) != 70)
        problems.push_back("fixed values");
    BigCount dfact = 1;
    for (int n = 2; n <= 14; n += 2) {
        dfact *= n - 1;
        if (n >= 4 && rg_exact(n, 1) != dfact)
            problems.push_back("RG(" + std::to_string(n) + ",1) != (n-1)!!");
    }
    int symmetric = 0;
    for (int n = 1; n <= 14; ++n) {
        for (int d = 0; d < n; ++d) {
            ++symmetric;
            if (rg_exact(n, d) != rg_exact(n, n - 1 - d))
                problems.push_back("complement symmetry at (" + std::to_string(n) + "," + std::to_string(d) + ")");
        }
    }
    const double log_exact = log_bigcount(rg_exact(14, 7));
    std::vector<double> gaps;
    for (int m = 1; m <= 7; ++m)
        gaps.push_back(std::abs(log_exact - rg_asymptotic(14, 7, m).log_approx));
    for (std::size_t i = 1; i < gaps.size(); ++i)
        if (!(gaps[i] < gaps[i - 1]))
            problems.push_back("asymptotic gap not decreasing at m=" + std::to_string(i + 1));

    for (const Rational& lam : {Rational(1, 2), Rational(1, 3), Rational(2, 7), Rational(5, 13)}) {
        const Rational big = lam * (1 - lam);
        const auto c = log_edge_coeffs_exact(lam, 3);
        const bool ok = c[0] == GaussianRational(Rational(0), lam) && c[1] == GaussianRational(-big / 2) &&
                        c[2] == GaussianRational(Rational(0), -big * (1 - 2 * lam) / 6);
        if (!ok)
            problems.push_back("c_1..c_3 at lambda=" + lam.str());
    }

    std::ostringstream detail;
    detail << brute << " brute-force pairs, " << symmetric << " complement pairs; (14,7) log gaps m=1.." << gaps.size()
           << ":";
    for (double g : gaps)
        detail << " " << sci(g);
    if (!problems.empty())
        detail << "; " << problems.size() << " problems, first: " << problems.front();
    r.detail = detail.str();
    return finish(r, timer, problems.empty());
}

CriterionResult check_cumulant_paths()
{
    CriterionResult r{8, "cumulant cross-paths", false, "", 0.0, 60.0};
    Timer timer;
    Rng rng(0xC8);
    constexpr int kInstances = 120;
    constexpr int kMaxOrder = 5;
    int comparisons = 0, failures = 0;
    double worst = 0.0;
    for (int inst = 0; inst < kInstances; ++inst) {
        const int n = uniform_int(rng, 1, 5);
        const auto space = random_space(rng, n, false);
        const TabFn f = random_fn(rng, space, false);
        const auto by_moments = cumulants(f, kMaxOrder);
        const auto pf = hoeffding(f);
        for (int order = 1; order <= kMaxOrder; ++order) {
            const std::vector<TabFn> copies(static_cast<std::size_t>(order), f);
            const Complex joint = joint_cumulant(copies);
            const auto cond = conditional_cumulant(pf, order, 0);
            const Table* constant = cond.part(Subset::empty());
            const Complex via_decomp = constant ? (*constant)[0] : Complex{};
            const Complex k = by_moments[static_cast<std::size_t>(order - 1)];
            const double scale =
                std::max(std::abs(k), std::real(expect(f.map([&](Complex z) { return std::pow(std::abs(z), order); }))));
            const double err = std::max(std::abs(k - joint), std::abs(k - via_decomp)) / scale;
            worst = std::max(worst, err);
            ++comparisons;
            if (err > 1e-9)
                ++failures;
        }
    }
    r.detail = std::to_string(kInstances) + " instances, " + std::to_string(comparisons) +
               " orders compared, worst rel diff " + sci(worst) + ", " + std::to_string(failures) + " failures";
    return finish(r, timer, failures == 0);
}

std::vector<CriterionResult> run_acceptance()
{
    return {check_algebra_suite(),          check_partial_delta_lemma(), check_certificates(),
            check_edgeworth_coefficients(), check_triangle_edgeworth(),  check_berry_esseen(),
            check_regular_graphs(),         check_cumulant_paths()};
}

std::string format_result(const CriterionResult& r)
{
    char head[160];
    std::snprintf(head, sizeof head, "[%s] criterion %d: %s (%.2f s, limit %.0f s): ", r.pass ? "PASS" : "FAIL", r.id,
                  r.title.c_str(), r.seconds, r.limit_seconds);
    return head + r.detail;
}

} // namespace cumlab
