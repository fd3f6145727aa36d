#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "cumlab/subset.hpp"

namespace cumlab {

using Complex = std::complex<double>;
using Table = std::vector<Complex>;

inline constexpr std::size_t kDefaultMaxLattice = std::size_t{1} << 24;

/// One coordinate of the product space: a finite list of atoms with their
/// probabilities.
struct FiniteComponent {
    std::vector<double> atoms;
    std::vector<double> probs;

    bool operator==(const FiniteComponent&) const = default;

    static FiniteComponent bernoulli(double p) { return {{0.0, 1.0}, {1.0 - p, p}}; }
    static FiniteComponent uniform(std::vector<double> atoms);
};

/// A multi-index into the outcome lattice: one atom index per coordinate.
struct Point {
    std::vector<std::size_t> idx;

    bool operator==(const Point&) const = default;
    std::size_t operator[](int j) const { return idx[static_cast<std::size_t>(j)]; }
};

/// The law of X = (X_1, ..., X_n) with independent finite components.
///
/// Outcomes are enumerated row-major by multi-index: coordinate 0 is the most
/// significant digit. Sub-lattices over a coordinate subset V use the same
/// convention restricted to the coordinates of V in increasing order.
class ProductSpace {
public:
    explicit ProductSpace(std::vector<FiniteComponent> components,
                          std::size_t max_lattice = kDefaultMaxLattice);

    static std::shared_ptr<const ProductSpace> make(std::vector<FiniteComponent> components,
                                                    std::size_t max_lattice = kDefaultMaxLattice);
    static std::shared_ptr<const ProductSpace> iid(int n, const FiniteComponent& c,
                                                   std::size_t max_lattice = kDefaultMaxLattice);

    int dim() const { return static_cast<int>(components_.size()); }
    const FiniteComponent& component(int j) const { return components_[static_cast<std::size_t>(j)]; }
    std::size_t support(int j) const { return radix_[static_cast<std::size_t>(j)]; }
    std::size_t lattice_size() const { return size_; }
    std::size_t stride(int j) const { return stride_[static_cast<std::size_t>(j)]; }
    Subset all() const { return Subset::full(dim()); }

    /// Product probability of the outcome with the given flat index.
    double weight(std::size_t flat) const { return weights_[flat]; }
    const std::vector<double>& weights() const { return weights_; }

    std::size_t digit(std::size_t flat, int j) const
    {
        return (flat / stride_[static_cast<std::size_t>(j)]) % radix_[static_cast<std::size_t>(j)];
    }
    std::size_t flat_index(const Point& x) const;
    Point point(std::size_t flat) const;

    /// Number of cells of the sub-lattice over the coordinates in V.
    std::size_t sub_size(Subset v) const;
    /// Index into the V-sub-lattice of the projection of a full-lattice outcome.
    std::size_t sub_index(std::size_t flat, Subset v) const;
    /// For U ⊆ V, maps every V-sub-lattice index to the U-sub-lattice index
    /// of its projection.
    std::vector<std::size_t> projection_map(Subset v, Subset u) const;
    /// Splits a V-sub-lattice around coordinate j ∈ V as (outer, radix_j, inner).
    struct Split {
        std::size_t outer, radix, inner;
    };
    Split split_at(Subset v, int j) const;

    void check_point(const Point& x) const;
    void check_subset(Subset v) const;

    bool operator==(const ProductSpace& o) const { return components_ == o.components_; }

private:
    std::vector<FiniteComponent> components_;
    std::vector<std::size_t> radix_;
    std::vector<std::size_t> stride_;
    std::vector<double> weights_;
    std::size_t size_ = 1;
};

using SpacePtr = std::shared_ptr<const ProductSpace>;

/// Throws ValidationError unless both refer to equal spaces.
void require_same_space(const ProductSpace& a, const ProductSpace& b);

/// A complex-valued function tabulated on the full outcome lattice.
class TabFn {
public:
    TabFn(SpacePtr space, Table values);

    static TabFn constant(SpacePtr space, Complex c);
    static TabFn from(SpacePtr space, const std::function<Complex(const Point&)>& fn);
    /// Builds f from the atom values: fn receives x_j = atoms_j[idx_j].
    static TabFn from_atoms(SpacePtr space, const std::function<Complex(std::span<const double>)>& fn);

    const ProductSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }
    const Table& values() const { return values_; }
    Complex at(std::size_t flat) const { return values_[flat]; }
    Complex operator()(const Point& x) const { return values_[space_->flat_index(x)]; }

    TabFn operator+(const TabFn& o) const;
    TabFn operator-(const TabFn& o) const;
    TabFn operator*(const TabFn& o) const;
    TabFn scaled(Complex c) const;
    TabFn shifted(Complex c) const;
    TabFn map(const std::function<Complex(Complex)>& fn) const;
    double sup_abs() const;
    bool is_real(double tol = 0.0) const;

private:
    SpacePtr space_;
    Table values_;
};

/// x ▷_V y: takes y on V and x elsewhere.
Point splice(const ProductSpace& space, const Point& x, const Point& y, Subset v);

/// E f(X), summed in lattice order with compensation.
Complex expect(const TabFn& f);

/// Table over the W-sub-lattice of z ↦ E[f(X) | X_W = z].
Table conditional_expectation(const TabFn& f, Subset w);

/// Conditional expectations for every W ⊆ [n], indexed by bitmask. Computed
/// top-down by averaging out one coordinate at a time.
std::vector<Table> all_conditional_expectations(const TabFn& f, std::size_t max_cells = std::size_t{1} << 26);

/// Averages coordinate j ∈ V out of a table over the V-sub-lattice.
Table average_out(const ProductSpace& space, const Table& t, Subset v, int j);
/// Fixes coordinate j ∈ V of a V-table at atom index a.
Table fix_coordinate(const ProductSpace& space, const Table& t, Subset v, int j, std::size_t a);
/// Applies ∏_{j∈V} (I - E_j) in place to a V-table. The result is the
/// Hoeffding part of V when t = E[f | X_V].
void center_in_place(const ProductSpace& space, Table& t, Subset v);

/// Δ_V(f): sup over x, y of |Σ_{W⊆V} (-1)^{|W|} f(x ▷_W y)|.
/// With V = ∅ this is sup|f|.
double delta(const TabFn& f, Subset v, std::size_t max_work = std::size_t{1} << 32);

/// Δ̄_V(f, X): sup over y of |E Σ_{W⊆V} (-1)^{|W|} f(X ▷_W y)|.
double delta_bar(const TabFn& f, Subset v);

/// Δ̄_V for every V ⊆ [n], indexed by bitmask.
std::vector<double> delta_bar_all(const TabFn& f);

/// S_k(f, X) = max_j Σ_{|V|=k, j∈V} Δ̄_V(f, X), for 1 ≤ k ≤ n.
double s_k(const TabFn& f, int k);
/// S_1, ..., S_n (element k-1 holds S_k).
std::vector<double> s_values(const TabFn& f);
/// S_1..S_n from a precomputed Δ̄ table.
std::vector<double> s_values_from(int n, std::span<const double> delta_bar_by_mask);

/// ∏_{j∈V} (b_j - a_j) · max |∂^{|V|} f|, for an analytic f on a box.
double derivative_delta_bound(std::span<const double> interval_lengths, double mixed_partial_max);

} // namespace cumlab
