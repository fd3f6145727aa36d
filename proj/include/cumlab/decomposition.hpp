#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "cumlab/product_space.hpp"

namespace cumlab {

inline constexpr int kMaxDecompositionDim = 16;

/// A subset-indexed family π(V, ·) where the V part is a table over the
/// V-sub-lattice, so it depends on the coordinates in V only. Absent parts
/// are zero. f_π = Σ_V π(V, ·).
class Decomposition {
public:
    explicit Decomposition(SpacePtr space);

    /// The multiplicative unit: {∅ : 1}.
    static Decomposition unit(SpacePtr space);
    static Decomposition constant(SpacePtr space, Complex c);

    const ProductSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }

    void set_part(Subset v, Table t);
    /// nullptr when the part is absent (zero).
    const Table* part(Subset v) const;
    const std::map<Subset, Table>& parts() const { return parts_; }
    Complex value(Subset v, const Point& x) const;
    double part_sup(Subset v) const;

    /// Drops parts whose sup-norm is at most tol.
    Decomposition& prune(double tol = 0.0);

    bool is_free_of(int j) const;
    bool is_restricted_to(int j) const;

private:
    SpacePtr space_;
    std::map<Subset, Table> parts_;
};

/// The γ-weighted norm ‖π‖_γ = Σ_V ‖π(V,·)‖_∞ e^{γ|V|}.
class GammaNorm {
public:
    explicit GammaNorm(double gamma);
    double gamma() const { return gamma_; }
    double operator()(const Decomposition& pi) const;

private:
    double gamma_;
};

double norm_gamma(const Decomposition& pi, double gamma);

/// Hoeffding decomposition π_f(V,x) = Σ_{W⊆V} (-1)^{|V|+|W|} E(f | X_W = x_W).
Decomposition hoeffding(const TabFn& f);

/// f_π on the full lattice.
TabFn realize(const Decomposition& pi);

Decomposition add(const Decomposition& a, const Decomposition& b, Complex ca = 1.0, Complex cb = 1.0);
Decomposition scale(const Decomposition& a, Complex c);
/// [πω](V) = Σ_{V1 ∪ V2 = V} π(V1)ω(V2).
Decomposition multiply(const Decomposition& a, const Decomposition& b);

inline Decomposition operator+(const Decomposition& a, const Decomposition& b) { return add(a, b); }
inline Decomposition operator-(const Decomposition& a, const Decomposition& b) { return add(a, b, 1.0, -1.0); }
inline Decomposition operator*(const Decomposition& a, const Decomposition& b) { return multiply(a, b); }

/// Smallest J with the γ-norm tail Σ_{j>J} N^j / j! < eps, where N = ‖π‖_γ.
int exp_truncation_order(double norm, double eps);
/// Σ_{j≤J} π^j / j! with J = exp_truncation_order(‖π‖_γ, eps).
Decomposition exp_trunc(const Decomposition& pi, double eps, double gamma = 0.0);

/// E^j: averages the V∪{j} part over X_j into V, for every V ∌ j.
Decomposition expect_coordinate(const Decomposition& pi, int j);
/// E^{≥first} = E^{first} ⋯ E^{n-1}; the identity when first == n.
Decomposition expect_from(const Decomposition& pi, int first);
/// R^j_y: substitutes y_j into the V∪{j} part, for every V ∌ j.
Decomposition substitute_coordinate(const Decomposition& pi, int j, const Point& y);
/// ∂^V_y = ∏_{j∈V} (I - R^j_y).
Decomposition difference(const Decomposition& pi, Subset v, const Point& y);
/// Γ_{V,γ}(π) = sup_y ‖∂^V_y π‖_γ.
double gamma_v(const Decomposition& pi, Subset v, double gamma);
/// max over t ≤ m and j of Σ_{|V|=t, j∈V} Γ_{V,γ}(π).
double gamma_budget(const Decomposition& pi, int m, double gamma);

/// (j-restricted part, j-free part).
std::pair<Decomposition, Decomposition> split_restricted_free(const Decomposition& pi, int j);

/// κ^{≥first}[π_1, ..., π_r] by the set-partition formula; first ranges over
/// 0..n, where first == n gives π for r = 1 and zero for r ≥ 2.
Decomposition conditional_cumulant(std::span<const Decomposition> args, int first);
/// κ_r^{≥first}[π] = κ^{≥first}[π, ..., π].
Decomposition conditional_cumulant(const Decomposition& pi, int r, int first);

/// Part-by-part comparison with absolute tolerance tol·max(1, part sup).
bool approx_equal(const Decomposition& a, const Decomposition& b, double tol);

/// Set partitions of {0..r-1}, each as a list of block bitmasks.
std::vector<std::vector<std::uint32_t>> set_partitions(int r);

} // namespace cumlab
