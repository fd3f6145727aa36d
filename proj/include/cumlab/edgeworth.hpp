#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cumlab/series.hpp"

namespace cumlab {

/// k[j-1] = number of parts of size j, for j = 1..s.
using Multiplicities = std::vector<int>;

/// All integer partitions of s as multiplicity vectors (s = 0 gives one
/// empty partition).
std::vector<Multiplicities> partitions(int s);

/// Standardized cumulants λ_3..λ_R.
class LambdaSeq {
public:
    LambdaSeq() = default;
    /// values[0] is λ_3.
    explicit LambdaSeq(std::vector<double> values);

    double at(int r) const;
    int max_order() const { return static_cast<int>(values_.size()) + 2; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

/// One term c · Π_r λ_r^{e_r} · y^degree of P_{s,λ}.
struct EdgeworthTerm {
    /// lambda_powers[r-3] = e_r.
    std::vector<int> lambda_powers;
    int degree = 0;
    Rational coeff;
};

/// Symbolic P_{s,λ}: sum over partitions of s of
/// Π_j (1/k_j!) (λ_{j+2} y^{j+2} / (j+2)!)^{k_j}.
std::vector<EdgeworthTerm> edgeworth_terms(int s);

/// P_{s,λ} with λ substituted: degree -> coefficient.
struct EdgeworthPoly {
    std::map<int, double> coeffs;
    double operator()(double y) const;
};

EdgeworthPoly edgeworth_poly(int s, const LambdaSeq& lambda);

/// Probabilists' Hermite polynomial He_k(x).
double hermite_he(int k, double x);
double phi(double x);
/// φ^{(k)}(x) = (-1)^k He_k(x) φ(x).
double phi_deriv(int k, double x);

/// E_m(x) = Σ_{s≤m} P_{s,λ}(-D)[φ](x). Needs λ up to order m + 2.
double edgeworth_series(int m, const LambdaSeq& lambda, double x);

struct TriangleMoments {
    double mu = 0.0;
    double sigma2 = 0.0;
};

/// Mean and variance of the triangle count in G(n, p).
TriangleMoments triangle_mu_sigma(int n, double p);

inline constexpr int kMaxTriangleVertices = 7;

/// counts[t][e]: number of labelled graphs on n vertices with t triangles and
/// e edges.
std::vector<std::vector<std::uint64_t>> triangle_edge_histogram(int n);

struct TrianglePMF {
    int n_vertices = 0;
    double p = 0.0;
    /// probs[k] = Pr(T = k) for k = 0..C(n,3).
    std::vector<double> probs;
    double mu = 0.0;
    double sigma2 = 0.0;
};

/// Exact triangle-count distribution by enumerating all graphs; n ≤ 7.
TrianglePMF exact_triangle_pmf(int n, double p);

struct PmfCumulants {
    /// kappa[r-1] = κ_r, r = 1..r_max.
    std::vector<double> kappa;
    /// λ_3..λ_{r_max}; empty when σ = 0.
    LambdaSeq lambda;
};

PmfCumulants pmf_cumulants(const TrianglePMF& pmf, int r_max);

struct EdgeworthRow {
    int k = 0;
    bool realized = false;
    double scaled_prob = 0.0;
    /// series[m] = E_m((k - μ)/σ).
    std::vector<double> series;
};

struct EdgeworthReport {
    int n = 0;
    double p = 0.0;
    int m_max = 0;
    double mu = 0.0;
    double sigma = 0.0;
    std::vector<double> kappa;
    LambdaSeq lambda;
    /// One row per k in 0..C(n,3).
    std::vector<EdgeworthRow> rows;
    /// sup_error[m] = max_k |σ Pr(T=k) - E_m((k-μ)/σ)|, attained at argmax[m].
    std::vector<double> sup_error;
    std::vector<int> argmax;
};

/// Throws DegenerateModel when σ = 0.
EdgeworthReport edgeworth_report(int n, double p, int m_max);

} // namespace cumlab
