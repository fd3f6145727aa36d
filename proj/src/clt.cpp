#include "cumlab/clt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/binomial.hpp>

#include "cumlab/errors.hpp"
#include "cumlab/summation.hpp"

namespace cumlab {

namespace {

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

void require_nondegenerate(double sigma)
{
    if (!(sigma > 0.0))
        throw DegenerateModel("distribution has zero variance (sigma=0)");
}

} // namespace

double Distribution1D::mean() const
{
    CompensatedSum s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s.add(values[i] * probs[i]);
    return s.value();
}

double Distribution1D::sigma() const
{
    const double mu = mean();
    CompensatedSum s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s.add((values[i] - mu) * (values[i] - mu) * probs[i]);
    return std::sqrt(std::max(0.0, s.value()));
}

Distribution1D distribution_of(const TabFn& f)
{
    require(f.is_real(), "distribution_of: function must be real-valued");
    const auto& w = f.space().weights();
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] > 0.0)
            atoms.emplace_back(f.at(i).real(), w[i]);
    std::sort(atoms.begin(), atoms.end());

    Distribution1D d;
    std::vector<CompensatedSum> mass;
    for (const auto& [v, p] : atoms) {
        if (d.values.empty() || std::abs(v - d.values.back()) > 1e-12 * std::max(1.0, std::abs(v))) {
            d.values.push_back(v);
            mass.emplace_back();
        }
        mass.back().add(p);
    }
    for (const auto& m : mass)
        d.probs.push_back(m.value());
    return d;
}

Distribution1D bernoulli_sum(int n, double p)
{
    require(n >= 0, "bernoulli_sum: n must be nonnegative");
    require(p >= 0.0 && p <= 1.0, "bernoulli_sum: p must lie in [0,1]");
    Distribution1D d;
    const boost::math::binomial_distribution<double> law(n, p);
    for (int k = 0; k <= n; ++k) {
        const double pk = boost::math::pdf(law, k);
        if (pk > 0.0) {
            d.values.push_back(k);
            d.probs.push_back(pk);
        }
    }
    return d;
}

Complex char_fn(const Distribution1D& dist, double t)
{
    const double mu = dist.mean();
    const double sigma = dist.sigma();
    require_nondegenerate(sigma);
    ComplexCompensatedSum s;
    for (std::size_t i = 0; i < dist.values.size(); ++i)
        s.add(dist.probs[i] * std::exp(Complex(0.0, t * (dist.values[i] - mu) / sigma)));
    return s.value();
}

Complex char_fn(const TabFn& f, double t)
{
    return char_fn(distribution_of(f), t);
}

double sup_cdf_distance(const Distribution1D& dist)
{
    const double mu = dist.mean();
    const double sigma = dist.sigma();
    if (!(sigma > 0.0))
        return 0.5;
    CompensatedSum below;
    double best = 0.0;
    for (std::size_t i = 0; i < dist.values.size(); ++i) {
        const double g = normal_cdf((dist.values[i] - mu) / sigma);
        const double left = below.value();
        below.add(dist.probs[i]);
        const double right = below.value();
        best = std::max({best, std::abs(left - g), std::abs(right - g)});
    }
    return best;
}

double sup_cdf_distance(const TabFn& f)
{
    return sup_cdf_distance(distribution_of(f));
}

CharFnGrid char_fn_grid(const std::function<Complex(double)>& phi, double T, int half)
{
    require(T > 0.0 && std::isfinite(T), "char_fn_grid: T must be positive");
    require(half >= 1, "char_fn_grid: need at least one point per side");
    CharFnGrid grid;
    for (int i = 0; i <= 2 * half; ++i) {
        const double t = (i == half) ? 0.0 : T * static_cast<double>(i - half) / half;
        grid.t.push_back(t);
        grid.phi.push_back(phi(t));
    }
    return grid;
}

CharFnGrid char_fn_grid(const Distribution1D& dist, double T, int half)
{
    require_nondegenerate(dist.sigma());
    auto grid = char_fn_grid([&](double t) { return char_fn(dist, t); }, T, half);
    grid.mean = dist.mean();
    grid.sigma = dist.sigma();
    return grid;
}

double feller_bound(const CharFnGrid& grid)
{
    const std::size_t points = grid.t.size();
    require(points >= 3 && points % 2 == 1 && grid.phi.size() == points,
            "feller_bound: grid needs an odd number of points");
    const double T = grid.t.back();
    require(T > 0.0, "feller_bound: T must be positive");
    const double h = 2.0 * T / static_cast<double>(points - 1);

    auto integrand = [&](std::size_t i) {
        const double t = grid.t[i];
        if (t == 0.0)
            return 0.0;
        return std::abs(grid.phi[i] - std::exp(-0.5 * t * t)) / std::abs(t);
    };
    CompensatedSum s;
    for (std::size_t i = 0; i < points; ++i) {
        const double weight = (i == 0 || i + 1 == points) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        s.add(weight * integrand(i));
    }
    const double integral = s.value() * h / 3.0;
    return (integral + 24.0 / (std::sqrt(2.0 * std::numbers::pi) * T)) / std::numbers::pi;
}

double feller_bound(const std::function<Complex(double)>& phi, double T, int quad_points)
{
    require(T > 0.0, "feller_bound: T must be positive");
    require(quad_points >= 2, "feller_bound: quad_points must be at least 2");
    return feller_bound(char_fn_grid(phi, T, (quad_points + 1) / 2));
}

double feller_bound(const Distribution1D& dist, double T, int quad_points)
{
    require(T > 0.0, "feller_bound: T must be positive");
    require(quad_points >= 2, "feller_bound: quad_points must be at least 2");
    return feller_bound(char_fn_grid(dist, T, (quad_points + 1) / 2));
}

double feller_bound(const TabFn& f, double T, int quad_points)
{
    return feller_bound(distribution_of(f), T, quad_points);
}

double be_hypothesis_fit(std::span<const double> s_values, double w)
{
    require(w > 0.0 && w < 1.0, "be_hypothesis_fit: w must lie in (0,1)");
    double a = 0.0;
    for (std::size_t k = 1; k <= s_values.size(); ++k)
        a = std::max(a, static_cast<double>(k) * s_values[k - 1] * std::exp(static_cast<double>(k) * w));
    return a;
}

double be_hypothesis_fit(const TabFn& f, double w)
{
    return be_hypothesis_fit(s_values(f), w);
}

BeReport be_report(const TabFn& f, double w, int tgrid)
{
    require(tgrid >= 1, "be_report: tgrid must be positive");
    BeReport rep;
    rep.n = f.space().dim();
    rep.w = w;
    rep.a = be_hypothesis_fit(f, w);
    const auto dist = distribution_of(f);
    rep.mean = dist.mean();
    rep.sigma = dist.sigma();
    if (!(rep.sigma > 0.0) || !(rep.a > 0.0)) {
        rep.degenerate = true;
        rep.marker = "sigma=0";
        return rep;
    }
    const double n = rep.n;
    const double ws = w * rep.sigma;
    rep.t_max = w * ws / (800.0 * rep.a);
    for (int i = 1; i <= tgrid; ++i) {
        BeRow row;
        row.t = rep.t_max * static_cast<double>(i) / tgrid;
        row.phi = char_fn(dist, row.t);
        row.log_gap = std::abs(std::log(row.phi) + 0.5 * row.t * row.t);
        row.comparator = n * std::pow(rep.a * row.t / ws, 3);
        row.ratio = row.log_gap / row.comparator;
        rep.rows.push_back(row);
    }
    rep.cdf_distance = sup_cdf_distance(dist);
    rep.cdf_comparator = rep.a / (w * ws) + n * std::pow(rep.a / ws, 3);
    rep.cdf_ratio = rep.cdf_distance / rep.cdf_comparator;
    return rep;
}

} // namespace cumlab
