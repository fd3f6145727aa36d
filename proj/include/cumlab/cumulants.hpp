#pragma once

#include <optional>
#include <string>
#include <span>
#include <vector>

#include "cumlab/product_space.hpp"

namespace cumlab {

/// E f^j for j = 0..r_max.
std::vector<Complex> raw_moments(const TabFn& f, int r_max);

/// κ_1..κ_m from moments μ_0..μ_m (μ_0 must be 1), via
/// κ_n = μ_n - Σ_{k<n} C(n-1,k-1) κ_k μ_{n-k}. Element r-1 holds κ_r.
std::vector<Complex> cumulants_from_moments(std::span<const Complex> moments);

/// κ_1..κ_m of f(X).
std::vector<Complex> cumulants(const TabFn& f, int m);

/// Joint cumulant κ(f_1, ..., f_r) by the set-partition formula.
Complex joint_cumulant(std::span<const TabFn> fs);

/// exp(Σ_{r=1}^m κ_r(f(X)) / r!).
Complex truncated_cumulant_approx(const TabFn& f, int m);

/// Σ_{k=t}^n e^{3αk/2} 2^t C(k-1,t-1) S_k, with s_values[k-1] = S_k.
double complex_hypothesis_lhs(std::span<const double> s_values, int t, double alpha);

/// Smallest α in [0, 1/100] with max_{t≤m} complex_hypothesis_lhs(t, α) ≤ α,
/// to 1e-12. Zero when every S_k vanishes; nullopt when infeasible.
std::optional<double> find_alpha(std::span<const double> s_values, int m);

/// Numerical check of the truncated cumulant approximation of E e^{f(X)}
/// against its certified error bounds.
struct CumulantCertificate {
    int n = 0;
    int m = 0;
    /// Hypothesis variant: "complex" (S_k) or "real" (Δ_V).
    std::string variant = "complex";
    std::optional<double> alpha;
    double gamma = 0.0;
    /// S_1..S_n for the complex variant; the per-order Δ_V sums for the real one.
    std::vector<double> s_values;
    std::vector<bool> hypothesis_ok;
    std::vector<Complex> kappa;
    Complex approx;
    Complex exact;
    Complex delta_actual;
    double delta_bound = 0.0;
    /// Floating-point floor under which |delta_actual| is not resolvable.
    double delta_roundoff = 0.0;
    bool delta_ok = false;
    /// kappa_bound[r-2] bounds |κ_r| for 2 ≤ r ≤ m.
    std::vector<double> kappa_bound;
    std::vector<double> kappa_roundoff;
    std::vector<bool> kappa_bounds_ok;
    bool degenerate = false;

    bool hypotheses_hold() const;
    /// True when the hypotheses fail (vacuous) or every conclusion holds.
    bool consistent() const;
};

/// Certificate for complex f under the S_k hypothesis; uses γ = 3α/2.
CumulantCertificate certify(const TabFn& f, int m);

/// Real f under the hypothesis max_j Σ_{|V|=v, j∈V} Δ_V(f) ≤ α for v ≤ m.
CumulantCertificate certify_real(const TabFn& f, int m);

/// e^{(100α)^{m+1}} - 1.
double delta_bound(double alpha, int m);
/// n (r-1)! / (50 r) (80α)^r.
double kappa_bound(int n, int r, double alpha);

} // namespace cumlab
