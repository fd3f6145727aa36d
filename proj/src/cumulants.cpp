#include "cumlab/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/binomial.hpp>

#include "cumlab/decomposition.hpp"
#include "cumlab/errors.hpp"
#include "cumlab/summation.hpp"

namespace cumlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kAlphaCeiling = 0.01;

double binom(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(k));
}

std::vector<double> abs_moments(const TabFn& f, int r_max)
{
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(r_max) + 1);
    const auto& w = f.space().weights();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double a = std::abs(f.at(i));
        double p = w[i];
        for (int j = 0; j <= r_max; ++j) {
            acc[static_cast<std::size_t>(j)].add(p);
            p *= a;
        }
    }
    std::vector<double> out;
    for (const auto& s : acc)
        out.push_back(s.value());
    return out;
}

/// Magnitude envelope of the moment-to-cumulant recursion; roundoff in κ_r is
/// a small multiple of eps times element r-1.
std::vector<double> cumulant_envelope(std::span<const double> abs_mom)
{
    const int m = static_cast<int>(abs_mom.size()) - 1;
    std::vector<double> env(static_cast<std::size_t>(m));
    for (int r = 1; r <= m; ++r) {
        double s = abs_mom[static_cast<std::size_t>(r)];
        for (int k = 1; k < r; ++k)
            s += binom(r - 1, k - 1) * env[static_cast<std::size_t>(k - 1)] * abs_mom[static_cast<std::size_t>(r - k)];
        env[static_cast<std::size_t>(r - 1)] = s;
    }
    return env;
}

Complex exact_exponential_moment(const TabFn& f)
{
    return expect(f.map([](Complex z) { return std::exp(z); }));
}

/// Fills every field that does not depend on the hypothesis variant.
void fill_numerics(CumulantCertificate& cert, const TabFn& f)
{
    const int m = cert.m;
    const int n = cert.n;
    const auto mom = raw_moments(f, m);
    cert.kappa = cumulants_from_moments(mom);
    const auto env = cumulant_envelope(abs_moments(f, m));

    Complex log_approx = 0.0;
    double log_env = 0.0;
    double fact = 1.0;
    for (int r = 1; r <= m; ++r) {
        fact *= r;
        log_approx += cert.kappa[static_cast<std::size_t>(r - 1)] / fact;
        log_env += env[static_cast<std::size_t>(r - 1)] / fact;
    }
    cert.approx = std::exp(log_approx);
    cert.exact = exact_exponential_moment(f);
    if (cert.approx == Complex{} || cert.exact == Complex{} || !std::isfinite(std::abs(cert.approx))) {
        cert.degenerate = true;
        return;
    }
    // Principal branch of (exact/approx)^{1/n}.
    const Complex log_ratio = std::log(cert.exact / cert.approx);
    const Complex root_log = log_ratio / static_cast<double>(n);
    cert.delta_actual = std::exp(root_log) - 1.0;
    if (std::abs(root_log) < 1e-3) {
        // exp(z) - 1 without cancellation for small z.
        Complex term = root_log, sum = 0.0;
        for (int k = 1; k < 20; ++k) {
            sum += term;
            term *= root_log / static_cast<double>(k + 1);
        }
        cert.delta_actual = sum;
    }
    cert.delta_roundoff = 32.0 * kEps * (1.0 + log_env) / n;

    cert.kappa_roundoff.clear();
    for (int r = 2; r <= m; ++r)
        cert.kappa_roundoff.push_back(32.0 * kEps * env[static_cast<std::size_t>(r - 1)]);
}

void evaluate_conclusions(CumulantCertificate& cert)
{
    cert.kappa_bound.clear();
    cert.kappa_bounds_ok.clear();
    if (!cert.alpha) {
        cert.delta_bound = std::numeric_limits<double>::infinity();
        cert.delta_ok = true;
        return;
    }
    const double a = *cert.alpha;
    cert.delta_bound = delta_bound(a, cert.m);
    cert.delta_ok = !cert.degenerate && std::abs(cert.delta_actual) <= cert.delta_bound + cert.delta_roundoff;
    for (int r = 2; r <= cert.m; ++r) {
        const double b = kappa_bound(cert.n, r, a);
        cert.kappa_bound.push_back(b);
        const double slack = cert.kappa_roundoff[static_cast<std::size_t>(r - 2)];
        cert.kappa_bounds_ok.push_back(std::abs(cert.kappa[static_cast<std::size_t>(r - 1)]) <= b + slack);
    }
}

} // namespace

std::vector<Complex> raw_moments(const TabFn& f, int r_max)
{
    require(r_max >= 0, "raw_moments needs r_max >= 0");
    std::vector<ComplexCompensatedSum> acc(static_cast<std::size_t>(r_max) + 1);
    const auto& w = f.space().weights();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Complex z = f.at(i);
        Complex p = w[i];
        for (int j = 0; j <= r_max; ++j) {
            acc[static_cast<std::size_t>(j)].add(p);
            p *= z;
        }
    }
    std::vector<Complex> out;
    for (const auto& s : acc)
        out.push_back(s.value());
    return out;
}

std::vector<Complex> cumulants_from_moments(std::span<const Complex> moments)
{
    require(!moments.empty(), "need at least the zeroth moment");
    require(std::abs(moments[0] - 1.0) <= 1e-12, "zeroth moment must be 1");
    const int m = static_cast<int>(moments.size()) - 1;
    std::vector<Complex> kappa(static_cast<std::size_t>(m));
    for (int r = 1; r <= m; ++r) {
        Complex s = moments[static_cast<std::size_t>(r)];
        for (int k = 1; k < r; ++k)
            s -= binom(r - 1, k - 1) * kappa[static_cast<std::size_t>(k - 1)] * moments[static_cast<std::size_t>(r - k)];
        kappa[static_cast<std::size_t>(r - 1)] = s;
    }
    return kappa;
}

std::vector<Complex> cumulants(const TabFn& f, int m)
{
    require(m >= 1, "need m >= 1");
    const auto mom = raw_moments(f, m);
    return cumulants_from_moments(mom);
}

Complex joint_cumulant(std::span<const TabFn> fs)
{
    require(!fs.empty(), "joint cumulant needs at least one function");
    const int r = static_cast<int>(fs.size());
    require(r <= 12, "joint cumulant supports at most 12 arguments");
    for (const auto& f : fs)
        require_same_space(fs.front().space(), f.space());

    // E ∏_{k∈B} f_k for every block mask B.
    std::vector<Complex> block(std::size_t{1} << r);
    for (std::uint32_t mask = 1; mask < block.size(); ++mask) {
        ComplexCompensatedSum acc;
        const auto& w = fs.front().space().weights();
        for (std::size_t i = 0; i < w.size(); ++i) {
            Complex p = w[i];
            for (std::uint32_t b = mask; b; b &= b - 1)
                p *= fs[static_cast<std::size_t>(std::countr_zero(b))].at(i);
            acc.add(p);
        }
        block[mask] = acc.value();
    }

    ComplexCompensatedSum total;
    for (const auto& tau : set_partitions(r)) {
        const int blocks = static_cast<int>(tau.size());
        double coeff = blocks % 2 == 1 ? 1.0 : -1.0;
        for (int k = 2; k < blocks; ++k)
            coeff *= k;
        Complex term = coeff;
        for (auto b : tau)
            term *= block[b];
        total.add(term);
    }
    return total.value();
}

Complex truncated_cumulant_approx(const TabFn& f, int m)
{
    const auto kappa = cumulants(f, m);
    Complex s = 0.0;
    double fact = 1.0;
    for (int r = 1; r <= m; ++r) {
        fact *= r;
        s += kappa[static_cast<std::size_t>(r - 1)] / fact;
    }
    return std::exp(s);
}

double complex_hypothesis_lhs(std::span<const double> s_values, int t, double alpha)
{
    const int n = static_cast<int>(s_values.size());
    double s = 0.0;
    for (int k = t; k <= n; ++k)
        s += std::exp(1.5 * alpha * k) * std::ldexp(binom(k - 1, t - 1), t) * s_values[static_cast<std::size_t>(k - 1)];
    return s;
}

std::optional<double> find_alpha(std::span<const double> s_values, int m)
{
    require(m >= 1, "find_alpha needs m >= 1");
    const int tmax = std::min(m, static_cast<int>(s_values.size()));
    if (std::all_of(s_values.begin(), s_values.end(), [](double s) { return s == 0.0; }))
        return 0.0;
    // g is convex in α (a max of convex functions), so the feasible set is an
    // interval; locate a feasible point, then bisect for its left end.
    auto g = [&](double a) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int t = 1; t <= tmax; ++t)
            worst = std::max(worst, complex_hypothesis_lhs(s_values, t, a));
        return worst - a;
    };
    double feasible = kAlphaCeiling;
    if (g(feasible) > 0.0) {
        double lo = 0.0, hi = kAlphaCeiling;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double x1 = hi - phi * (hi - lo);
            const double x2 = lo + phi * (hi - lo);
            if (g(x1) <= g(x2))
                hi = x2;
            else
                lo = x1;
        }
        feasible = 0.5 * (lo + hi);
        if (g(feasible) > 0.0)
            return std::nullopt;
    }
    double lo = 0.0, hi = feasible;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double delta_bound(double alpha, int m)
{
    return std::expm1(std::pow(100.0 * alpha, m + 1));
}

double kappa_bound(int n, int r, double alpha)
{
    return n * std::tgamma(static_cast<double>(r)) / (50.0 * r) * std::pow(80.0 * alpha, r);
}

bool CumulantCertificate::hypotheses_hold() const
{
    return alpha.has_value() && std::all_of(hypothesis_ok.begin(), hypothesis_ok.end(), [](bool b) { return b; });
}

bool CumulantCertificate::consistent() const
{
    if (!hypotheses_hold())
        return true;
    return delta_ok && std::all_of(kappa_bounds_ok.begin(), kappa_bounds_ok.end(), [](bool b) { return b; });
}

CumulantCertificate certify(const TabFn& f, int m)
{
    require(m >= 1, "certify needs m >= 1");
    CumulantCertificate cert;
    cert.n = f.space().dim();
    cert.m = m;
    cert.variant = "complex";
    cert.s_values = s_values(f);
    cert.alpha = find_alpha(cert.s_values, m);
    const double a = cert.alpha.value_or(kAlphaCeiling);
    cert.gamma = 1.5 * a;
    for (int t = 1; t <= m; ++t)
        cert.hypothesis_ok.push_back(cert.alpha.has_value() && complex_hypothesis_lhs(cert.s_values, t, a) <= a
                                     && a <= kAlphaCeiling);
    fill_numerics(cert, f);
    evaluate_conclusions(cert);
    return cert;
}

CumulantCertificate certify_real(const TabFn& f, int m)
{
    require(m >= 1, "certify_real needs m >= 1");
    require(f.is_real(), "the real-function certificate needs a real-valued f");
    CumulantCertificate cert;
    cert.n = f.space().dim();
    cert.m = m;
    cert.variant = "real";
    const int n = cert.n;
    double alpha = 0.0;
    for (int v = 1; v <= std::min(m, n); ++v) {
        std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
        for (Subset set : k_subsets(n, v)) {
            const double d = delta(f, set);
            for (int j : set.elements())
                acc[static_cast<std::size_t>(j)] += d;
        }
        const double worst = *std::max_element(acc.begin(), acc.end());
        cert.s_values.push_back(worst);
        alpha = std::max(alpha, worst);
    }
    cert.alpha = alpha;
    cert.hypothesis_ok.assign(static_cast<std::size_t>(m), true);
    fill_numerics(cert, f);
    evaluate_conclusions(cert);
    return cert;
}

} // namespace cumlab
