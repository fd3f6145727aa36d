#include "cumlab/edgeworth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/special_functions/binomial.hpp>

#include "cumlab/cumulants.hpp"
#include "cumlab/errors.hpp"
#include "cumlab/parallel.hpp"
#include "cumlab/summation.hpp"

namespace cumlab {

namespace {

void partitions_rec(int remaining, int max_part, Multiplicities& k, std::vector<Multiplicities>& out)
{
    if (remaining == 0) {
        out.push_back(k);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        ++k[static_cast<std::size_t>(part - 1)];
        partitions_rec(remaining - part, part, k, out);
        --k[static_cast<std::size_t>(part - 1)];
    }
}

BigInt factorial_big(int n)
{
    BigInt f = 1;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

} // namespace

std::vector<Multiplicities> partitions(int s)
{
    require(s >= 0, "partitions: s must be nonnegative");
    std::vector<Multiplicities> out;
    Multiplicities k(static_cast<std::size_t>(s), 0);
    partitions_rec(s, s, k, out);
    return out;
}

LambdaSeq::LambdaSeq(std::vector<double> values) : values_(std::move(values))
{
    for (double v : values_)
        require(std::isfinite(v), "LambdaSeq: values must be finite");
}

double LambdaSeq::at(int r) const
{
    require(r >= 3 && r <= max_order(), "LambdaSeq: order " + std::to_string(r) + " not available");
    return values_[static_cast<std::size_t>(r - 3)];
}

std::vector<EdgeworthTerm> edgeworth_terms(int s)
{
    std::vector<EdgeworthTerm> out;
    for (const auto& k : partitions(s)) {
        EdgeworthTerm term;
        term.lambda_powers.assign(static_cast<std::size_t>(s), 0);
        BigInt denom = 1;
        for (int j = 1; j <= s; ++j) {
            const int kj = k[static_cast<std::size_t>(j - 1)];
            if (kj == 0)
                continue;
            term.lambda_powers[static_cast<std::size_t>(j - 1)] = kj;
            term.degree += kj * (j + 2);
            denom *= factorial_big(kj);
            denom *= boost::multiprecision::pow(factorial_big(j + 2), static_cast<unsigned>(kj));
        }
        term.coeff = Rational(BigInt(1), denom);
        out.push_back(std::move(term));
    }
    return out;
}

double EdgeworthPoly::operator()(double y) const
{
    double sum = 0.0;
    for (const auto& [deg, c] : coeffs)
        sum += c * std::pow(y, deg);
    return sum;
}

EdgeworthPoly edgeworth_poly(int s, const LambdaSeq& lambda)
{
    EdgeworthPoly poly;
    for (const auto& term : edgeworth_terms(s)) {
        double value = static_cast<double>(term.coeff);
        for (std::size_t i = 0; i < term.lambda_powers.size(); ++i)
            if (term.lambda_powers[i] > 0)
                value *= std::pow(lambda.at(static_cast<int>(i) + 3), term.lambda_powers[i]);
        poly.coeffs[term.degree] += value;
    }
    return poly;
}

double hermite_he(int k, double x)
{
    require(k >= 0, "hermite_he: negative order");
    if (k == 0)
        return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int j = 1; j < k; ++j) {
        const double next = x * cur - j * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double phi(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double phi_deriv(int k, double x)
{
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * hermite_he(k, x) * phi(x);
}

double edgeworth_series(int m, const LambdaSeq& lambda, double x)
{
    require(m >= 0, "edgeworth_series: m must be nonnegative");
    double sum = 0.0;
    for (int s = 0; s <= m; ++s)
        for (const auto& [deg, c] : edgeworth_poly(s, lambda).coeffs)
            sum += c * hermite_he(deg, x);
    return sum * phi(x);
}

TriangleMoments triangle_mu_sigma(int n, double p)
{
    require(n >= 0, "triangle_mu_sigma: n must be nonnegative");
    require(p >= 0.0 && p <= 1.0, "triangle_mu_sigma: p must lie in [0,1]");
    const double c3 = n >= 3 ? boost::math::binomial_coefficient<double>(n, 3) : 0.0;
    const double c4 = n >= 4 ? boost::math::binomial_coefficient<double>(n, 4) : 0.0;
    const double p3 = p * p * p;
    const double p5 = p3 * p * p;
    const double p6 = p3 * p3;
    return {c3 * p3, 12.0 * c4 * (p5 - p6) + c3 * p3 * (1.0 - p3)};
}

std::vector<std::vector<std::uint64_t>> triangle_edge_histogram(int n)
{
    require(n >= 1 && n <= kMaxTriangleVertices,
            "triangle enumeration needs 1 <= n <= " + std::to_string(kMaxTriangleVertices));
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            edges.emplace_back(a, b);
    const int num_edges = static_cast<int>(edges.size());
    const int max_t = n >= 3 ? n * (n - 1) * (n - 2) / 6 : 0;
    const std::uint64_t total = std::uint64_t{1} << num_edges;

    using Hist = std::vector<std::vector<std::uint64_t>>;
    std::vector<Hist> partial(chunk_count(total),
                              Hist(static_cast<std::size_t>(max_t + 1),
                                   std::vector<std::uint64_t>(static_cast<std::size_t>(num_edges + 1), 0)));
    parallel_chunks(total, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Hist& hist = partial[chunk];
        for (std::uint64_t mask = begin; mask < end; ++mask) {
            std::uint32_t adj[kMaxTriangleVertices] = {};
            for (int e = 0; e < num_edges; ++e) {
                if (mask >> e & 1u) {
                    adj[edges[e].first] |= 1u << edges[e].second;
                    adj[edges[e].second] |= 1u << edges[e].first;
                }
            }
            int triangles = 0;
            for (int e = 0; e < num_edges; ++e) {
                if (mask >> e & 1u) {
                    const auto [a, b] = edges[e];
                    const std::uint32_t above = ~((2u << b) - 1u);
                    triangles += std::popcount(adj[a] & adj[b] & above);
                }
            }
            ++hist[static_cast<std::size_t>(triangles)][static_cast<std::size_t>(std::popcount(mask))];
        }
    });
    Hist merged = partial.front();
    for (std::size_t c = 1; c < partial.size(); ++c)
        for (std::size_t t = 0; t < merged.size(); ++t)
            for (std::size_t e = 0; e < merged[t].size(); ++e)
                merged[t][e] += partial[c][t][e];
    return merged;
}

TrianglePMF exact_triangle_pmf(int n, double p)
{
    require(p >= 0.0 && p <= 1.0, "exact_triangle_pmf: p must lie in [0,1]");
    const auto hist = triangle_edge_histogram(n);
    const int num_edges = n * (n - 1) / 2;
    TrianglePMF pmf;
    pmf.n_vertices = n;
    pmf.p = p;
    for (const auto& row : hist) {
        CompensatedSum prob;
        for (int e = 0; e <= num_edges; ++e) {
            const auto c = row[static_cast<std::size_t>(e)];
            if (c != 0)
                prob.add(static_cast<double>(c) * std::pow(p, e) * std::pow(1.0 - p, num_edges - e));
        }
        pmf.probs.push_back(prob.value());
    }
    const auto moments = triangle_mu_sigma(n, p);
    pmf.mu = moments.mu;
    pmf.sigma2 = moments.sigma2;
    return pmf;
}

PmfCumulants pmf_cumulants(const TrianglePMF& pmf, int r_max)
{
    require(r_max >= 1, "pmf_cumulants: r_max must be at least 1");
    CompensatedSum mean_sum;
    for (std::size_t k = 0; k < pmf.probs.size(); ++k)
        mean_sum.add(static_cast<double>(k) * pmf.probs[k]);
    const double mean = mean_sum.value();

    // Central moments keep the recursion well conditioned.
    std::vector<Complex> central(static_cast<std::size_t>(r_max + 1), 0.0);
    central[0] = 1.0;
    for (int j = 2; j <= r_max; ++j) {
        CompensatedSum s;
        for (std::size_t k = 0; k < pmf.probs.size(); ++k)
            s.add(std::pow(static_cast<double>(k) - mean, j) * pmf.probs[k]);
        central[static_cast<std::size_t>(j)] = s.value();
    }
    const auto kc = cumulants_from_moments(central);

    PmfCumulants out;
    out.kappa.resize(static_cast<std::size_t>(r_max));
    out.kappa[0] = mean;
    for (int r = 2; r <= r_max; ++r)
        out.kappa[static_cast<std::size_t>(r - 1)] = kc[static_cast<std::size_t>(r - 1)].real();
    if (r_max >= 2 && out.kappa[1] > 0.0) {
        const double sigma = std::sqrt(out.kappa[1]);
        std::vector<double> lam;
        for (int r = 3; r <= r_max; ++r)
            lam.push_back(out.kappa[static_cast<std::size_t>(r - 1)] / std::pow(sigma, r));
        out.lambda = LambdaSeq(std::move(lam));
    }
    return out;
}

EdgeworthReport edgeworth_report(int n, double p, int m_max)
{
    require(m_max >= 0, "edgeworth_report: m must be nonnegative");
    const auto pmf = exact_triangle_pmf(n, p);
    const auto cum = pmf_cumulants(pmf, std::max(2, m_max + 2));
    if (!(cum.kappa[1] > 0.0))
        throw DegenerateModel("edgeworth_report: triangle count has zero variance (sigma=0)");

    EdgeworthReport rep;
    rep.n = n;
    rep.p = p;
    rep.m_max = m_max;
    rep.mu = cum.kappa[0];
    rep.sigma = std::sqrt(cum.kappa[1]);
    rep.kappa = cum.kappa;
    rep.lambda = cum.lambda;
    rep.sup_error.assign(static_cast<std::size_t>(m_max + 1), 0.0);
    rep.argmax.assign(static_cast<std::size_t>(m_max + 1), 0);
    for (std::size_t k = 0; k < pmf.probs.size(); ++k) {
        EdgeworthRow row;
        row.k = static_cast<int>(k);
        row.realized = pmf.probs[k] > 0.0;
        row.scaled_prob = rep.sigma * pmf.probs[k];
        const double x = (static_cast<double>(k) - rep.mu) / rep.sigma;
        for (int m = 0; m <= m_max; ++m) {
            const double e = edgeworth_series(m, rep.lambda, x);
            row.series.push_back(e);
            const double err = std::abs(row.scaled_prob - e);
            if (err > rep.sup_error[static_cast<std::size_t>(m)]) {
                rep.sup_error[static_cast<std::size_t>(m)] = err;
                rep.argmax[static_cast<std::size_t>(m)] = row.k;
            }
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace cumlab
