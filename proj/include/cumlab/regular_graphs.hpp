#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "cumlab/series.hpp"

namespace cumlab {

using BigCount = BigInt;

enum class VertexPriority { max_residual, min_residual };

struct RgOptions {
    std::size_t max_states = std::size_t{1} << 22;
    /// Which residual class the DP eliminates next; the count does not depend on it.
    VertexPriority priority = VertexPriority::max_residual;
};

/// Number of labelled d-regular graphs on n vertices, by vertex elimination
/// over residual-degree count vectors. Zero when dn is odd.
BigCount rg_exact(int n, int d, const RgOptions& opts = {});

/// Same count by checking every edge subset; C(n,2) ≤ 24.
BigCount rg_bruteforce(int n, int d);

/// Natural log of a positive big integer.
double log_bigcount(const BigCount& x);

/// Coefficients (constant term first) of p_1..p_7 in the regular-graph series.
const std::array<std::vector<Rational>, 7>& regular_series_polys();
double eval_series_poly(int j, double x);

struct AsymptoticSeries {
    int n = 0;
    int d = 0;
    int m = 0;
    double lambda = 0.0;
    double Lambda = 0.0;
    /// log √2 + C(n,2) log(λ^λ (1-λ)^{1-λ}) + n log C(n-1,d).
    double log_leading = 0.0;
    /// terms[j-1] = p_j(Λ) / (Λ^j n^{j-1}).
    std::vector<double> terms;
    double log_approx = 0.0;
};

/// 1 ≤ m ≤ 7, 0 < d < n-1.
AsymptoticSeries rg_asymptotic(int n, int d, int m);

/// |log RG(n,d) - log approx_7| · d³ (n-d)³ n.
double conjecture_gap(int n, int d, const RgOptions& opts = {});

/// c_1..c_L of log(1 + λ(e^{ix} - 1)) = Σ c_ℓ x^ℓ.
std::vector<std::complex<double>> log_edge_coeffs(double lambda, int L);
std::vector<GaussianRational> log_edge_coeffs_exact(const Rational& lambda, int L);

/// [z^d] (1+z²)^{-1/2} exp(Σ_{j≤d} i^{j+1} x_j z^j / j).
MultiPoly pd_poly(int d);

} // namespace cumlab
