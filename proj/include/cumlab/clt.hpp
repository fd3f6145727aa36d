#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cumlab/product_space.hpp"

namespace cumlab {

/// A finite real distribution: sorted distinct atoms with their masses.
struct Distribution1D {
    std::vector<double> values;
    std::vector<double> probs;

    double mean() const;
    double sigma() const;
};

/// Law of f(X) for real f; atoms closer than 1e-12 relative are merged.
Distribution1D distribution_of(const TabFn& f);
/// Law of a sum of n independent Bernoulli(p) variables (atoms 0..n).
Distribution1D bernoulli_sum(int n, double p);

/// E e^{it(Y - EY)/σ}. Throws DegenerateModel when σ = 0.
Complex char_fn(const Distribution1D& dist, double t);
Complex char_fn(const TabFn& f, double t);

/// sup_x |Pr(Y < x) - Φ((x - EY)/σ)|, evaluated at both side limits of every
/// atom. A point mass gives 1/2.
double sup_cdf_distance(const Distribution1D& dist);
double sup_cdf_distance(const TabFn& f);

/// φ on the symmetric grid t_i = -T + iT/half, i = 0..2·half.
struct CharFnGrid {
    std::vector<double> t;
    std::vector<Complex> phi;
    double mean = 0.0;
    double sigma = 1.0;
};

CharFnGrid char_fn_grid(const Distribution1D& dist, double T, int half);
CharFnGrid char_fn_grid(const std::function<Complex(double)>& phi, double T, int half);

/// (∫_{-T}^{T} |φ(t) - e^{-t²/2}| dt/|t| + 24/(√(2π) T)) / π, composite
/// Simpson on the grid with the integrand set to 0 at t = 0.
double feller_bound(const CharFnGrid& grid);
double feller_bound(const Distribution1D& dist, double T, int quad_points = 4096);
double feller_bound(const TabFn& f, double T, int quad_points = 4096);
double feller_bound(const std::function<Complex(double)>& phi, double T, int quad_points = 4096);

/// Smallest a with S_k ≤ (a/k) e^{-kw} for all k: max_k k S_k e^{kw}.
double be_hypothesis_fit(std::span<const double> s_values, double w);
double be_hypothesis_fit(const TabFn& f, double w);

struct BeRow {
    double t = 0.0;
    Complex phi;
    /// |log φ(t) + t²/2|.
    double log_gap = 0.0;
    /// n a³ |t|³ / (w³ σ³).
    double comparator = 0.0;
    double ratio = 0.0;
};

struct BeReport {
    bool degenerate = false;
    /// "sigma=0" for degenerate inputs.
    std::string marker;
    int n = 0;
    double w = 0.0;
    double a = 0.0;
    double mean = 0.0;
    double sigma = 0.0;
    double t_max = 0.0;
    std::vector<BeRow> rows;
    double cdf_distance = 0.0;
    /// a/(w² σ) + n a³/(w³ σ³).
    double cdf_comparator = 0.0;
    double cdf_ratio = 0.0;
};

/// Evaluates φ on t_i = t_max·i/tgrid, i = 1..tgrid, with t_max = w²σ/(800a).
BeReport be_report(const TabFn& f, double w, int tgrid = 256);

} // namespace cumlab
