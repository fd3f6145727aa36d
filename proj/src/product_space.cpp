#include "cumlab/product_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cumlab/errors.hpp"
#include "cumlab/summation.hpp"

namespace cumlab {

std::vector<Subset> k_subsets(int n, int k)
{
    std::vector<Subset> out;
    if (k < 0 || k > n)
        return out;
    if (k == 0) {
        out.push_back(Subset{});
        return out;
    }
    const std::uint64_t limit = std::uint64_t{1} << n;
    std::uint64_t v = (std::uint64_t{1} << k) - 1;
    while (v < limit) {
        out.emplace_back(static_cast<std::uint32_t>(v));
        // Gosper's hack: next larger integer with the same popcount.
        std::uint64_t c = v & (~v + 1);
        std::uint64_t r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    return out;
}

FiniteComponent FiniteComponent::uniform(std::vector<double> atoms)
{
    std::vector<double> probs(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    return {std::move(atoms), std::move(probs)};
}

ProductSpace::ProductSpace(std::vector<FiniteComponent> components, std::size_t max_lattice)
    : components_(std::move(components))
{
    require(!components_.empty(), "product space needs at least one component");
    require(components_.size() <= 31, "at most 31 components are supported");
    for (std::size_t j = 0; j < components_.size(); ++j) {
        const auto& c = components_[j];
        const std::string tag = "component " + std::to_string(j) + ": ";
        require(!c.atoms.empty(), tag + "atoms must be nonempty");
        require(c.atoms.size() == c.probs.size(), tag + "atoms and probs differ in length");
        CompensatedSum total;
        for (std::size_t a = 0; a < c.atoms.size(); ++a) {
            require(std::isfinite(c.atoms[a]), tag + "atoms must be finite");
            require(std::isfinite(c.probs[a]) && c.probs[a] >= 0.0, tag + "probabilities must be nonnegative");
            total.add(c.probs[a]);
        }
        require(std::abs(total.value() - 1.0) <= 1e-12, tag + "probabilities must sum to 1");
    }

    radix_.resize(components_.size());
    stride_.resize(components_.size());
    for (std::size_t j = components_.size(); j-- > 0;) {
        radix_[j] = components_[j].atoms.size();
        stride_[j] = size_;
        if (size_ > max_lattice / radix_[j])
            throw CapExceeded("outcome lattice exceeds the configured cap of " + std::to_string(max_lattice));
        size_ *= radix_[j];
    }

    // Product weights built coordinate by coordinate, in lattice order.
    weights_.assign(1, 1.0);
    for (const auto& c : components_) {
        std::vector<double> next;
        next.reserve(weights_.size() * c.probs.size());
        for (double w : weights_)
            for (double p : c.probs)
                next.push_back(w * p);
        weights_ = std::move(next);
    }
}

std::shared_ptr<const ProductSpace> ProductSpace::make(std::vector<FiniteComponent> components,
                                                       std::size_t max_lattice)
{
    return std::make_shared<const ProductSpace>(std::move(components), max_lattice);
}

std::shared_ptr<const ProductSpace> ProductSpace::iid(int n, const FiniteComponent& c, std::size_t max_lattice)
{
    require(n >= 1, "need n >= 1");
    return make(std::vector<FiniteComponent>(static_cast<std::size_t>(n), c), max_lattice);
}

void ProductSpace::check_point(const Point& x) const
{
    require(x.idx.size() == components_.size(), "point has wrong dimension");
    for (std::size_t j = 0; j < x.idx.size(); ++j)
        require(x.idx[j] < radix_[j], "point index out of range at coordinate " + std::to_string(j));
}

void ProductSpace::check_subset(Subset v) const
{
    require(v.within(dim()), "subset refers to coordinates beyond n");
}

std::size_t ProductSpace::flat_index(const Point& x) const
{
    check_point(x);
    std::size_t flat = 0;
    for (std::size_t j = 0; j < x.idx.size(); ++j)
        flat += x.idx[j] * stride_[j];
    return flat;
}

Point ProductSpace::point(std::size_t flat) const
{
    Point x;
    x.idx.resize(components_.size());
    for (int j = 0; j < dim(); ++j)
        x.idx[static_cast<std::size_t>(j)] = digit(flat, j);
    return x;
}

std::size_t ProductSpace::sub_size(Subset v) const
{
    std::size_t s = 1;
    for (int c : v.elements())
        s *= support(c);
    return s;
}

std::size_t ProductSpace::sub_index(std::size_t flat, Subset v) const
{
    std::size_t idx = 0;
    for (int c : v.elements())
        idx = idx * support(c) + digit(flat, c);
    return idx;
}

std::vector<std::size_t> ProductSpace::projection_map(Subset v, Subset u) const
{
    require(u.subset_of(v), "projection target must be a subset");
    const auto coords = v.elements();
    // Stride of each V-coordinate inside the U-sub-lattice (0 when dropped).
    std::vector<std::size_t> ustride(coords.size(), 0);
    std::size_t s = 1;
    for (std::size_t i = coords.size(); i-- > 0;) {
        if (u.contains(coords[i])) {
            ustride[i] = s;
            s *= support(coords[i]);
        }
    }
    const std::size_t total = sub_size(v);
    std::vector<std::size_t> out(total);
    std::vector<std::size_t> digits(coords.size(), 0);
    std::size_t uidx = 0;
    for (std::size_t i = 0; i < total; ++i) {
        out[i] = uidx;
        // Odometer increment, last coordinate fastest.
        for (std::size_t k = coords.size(); k-- > 0;) {
            if (++digits[k] < support(coords[k])) {
                uidx += ustride[k];
                break;
            }
            uidx -= (digits[k] - 1) * ustride[k];
            digits[k] = 0;
        }
    }
    return out;
}

ProductSpace::Split ProductSpace::split_at(Subset v, int j) const
{
    Split s{1, support(j), 1};
    for (int c : v.elements()) {
        if (c < j)
            s.outer *= support(c);
        else if (c > j)
            s.inner *= support(c);
    }
    return s;
}

void require_same_space(const ProductSpace& a, const ProductSpace& b)
{
    if (&a != &b && !(a == b))
        throw ValidationError("operands live on different product spaces");
}

// ---------------------------------------------------------------------------

TabFn::TabFn(SpacePtr space, Table values) : space_(std::move(space)), values_(std::move(values))
{
    require(space_ != nullptr, "function needs a space");
    require(values_.size() == space_->lattice_size(), "table length must equal the lattice size");
    for (const auto& z : values_)
        require(std::isfinite(z.real()) && std::isfinite(z.imag()), "function values must be finite");
}

TabFn TabFn::constant(SpacePtr space, Complex c)
{
    const auto n = space->lattice_size();
    return TabFn(std::move(space), Table(n, c));
}

TabFn TabFn::from(SpacePtr space, const std::function<Complex(const Point&)>& fn)
{
    Table t(space->lattice_size());
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = fn(space->point(i));
    return TabFn(std::move(space), std::move(t));
}

TabFn TabFn::from_atoms(SpacePtr space, const std::function<Complex(std::span<const double>)>& fn)
{
    Table t(space->lattice_size());
    std::vector<double> xs(static_cast<std::size_t>(space->dim()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (int j = 0; j < space->dim(); ++j)
            xs[static_cast<std::size_t>(j)] = space->component(j).atoms[space->digit(i, j)];
        t[i] = fn(xs);
    }
    return TabFn(std::move(space), std::move(t));
}

namespace {

template <class Op>
TabFn zip(const TabFn& a, const TabFn& b, Op op)
{
    require_same_space(a.space(), b.space());
    Table t(a.values().size());
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = op(a.at(i), b.at(i));
    return TabFn(a.space_ptr(), std::move(t));
}

} // namespace

TabFn TabFn::operator+(const TabFn& o) const { return zip(*this, o, std::plus<>{}); }
TabFn TabFn::operator-(const TabFn& o) const { return zip(*this, o, std::minus<>{}); }
TabFn TabFn::operator*(const TabFn& o) const { return zip(*this, o, std::multiplies<>{}); }

TabFn TabFn::scaled(Complex c) const
{
    return map([c](Complex z) { return c * z; });
}

TabFn TabFn::shifted(Complex c) const
{
    return map([c](Complex z) { return z + c; });
}

TabFn TabFn::map(const std::function<Complex(Complex)>& fn) const
{
    Table t(values_.size());
    std::transform(values_.begin(), values_.end(), t.begin(), fn);
    return TabFn(space_, std::move(t));
}

double TabFn::sup_abs() const
{
    double m = 0.0;
    for (const auto& z : values_)
        m = std::max(m, std::abs(z));
    return m;
}

bool TabFn::is_real(double tol) const
{
    return std::all_of(values_.begin(), values_.end(), [tol](Complex z) { return std::abs(z.imag()) <= tol; });
}

// ---------------------------------------------------------------------------

Point splice(const ProductSpace& space, const Point& x, const Point& y, Subset v)
{
    space.check_point(x);
    space.check_point(y);
    space.check_subset(v);
    Point u = x;
    for (int j : v.elements())
        u.idx[static_cast<std::size_t>(j)] = y.idx[static_cast<std::size_t>(j)];
    return u;
}

Complex expect(const TabFn& f)
{
    ComplexCompensatedSum acc;
    const auto& w = f.space().weights();
    for (std::size_t i = 0; i < w.size(); ++i)
        acc.add(w[i] * f.at(i));
    return acc.value();
}

Table average_out(const ProductSpace& space, const Table& t, Subset v, int j)
{
    const auto s = space.split_at(v, j);
    const auto& probs = space.component(j).probs;
    Table out(s.outer * s.inner);
    for (std::size_t o = 0; o < s.outer; ++o) {
        for (std::size_t i = 0; i < s.inner; ++i) {
            ComplexCompensatedSum acc;
            for (std::size_t d = 0; d < s.radix; ++d)
                acc.add(probs[d] * t[(o * s.radix + d) * s.inner + i]);
            out[o * s.inner + i] = acc.value();
        }
    }
    return out;
}

Table fix_coordinate(const ProductSpace& space, const Table& t, Subset v, int j, std::size_t a)
{
    const auto s = space.split_at(v, j);
    Table out(s.outer * s.inner);
    for (std::size_t o = 0; o < s.outer; ++o)
        for (std::size_t i = 0; i < s.inner; ++i)
            out[o * s.inner + i] = t[(o * s.radix + a) * s.inner + i];
    return out;
}

void center_in_place(const ProductSpace& space, Table& t, Subset v)
{
    for (int j : v.elements()) {
        const auto avg = average_out(space, t, v, j);
        const auto s = space.split_at(v, j);
        for (std::size_t o = 0; o < s.outer; ++o)
            for (std::size_t d = 0; d < s.radix; ++d)
                for (std::size_t i = 0; i < s.inner; ++i)
                    t[(o * s.radix + d) * s.inner + i] -= avg[o * s.inner + i];
    }
}

Table conditional_expectation(const TabFn& f, Subset w)
{
    const auto& space = f.space();
    space.check_subset(w);
    Table t = f.values();
    Subset cur = space.all();
    const auto drop = space.all().minus(w).elements();
    for (auto it = drop.rbegin(); it != drop.rend(); ++it) {
        t = average_out(space, t, cur, *it);
        cur = cur.without(*it);
    }
    return t;
}

std::vector<Table> all_conditional_expectations(const TabFn& f, std::size_t max_cells)
{
    const auto& space = f.space();
    const int n = space.dim();
    require(n <= 24, "all_conditional_expectations supports n <= 24");
    double cells = 1.0;
    for (int j = 0; j < n; ++j)
        cells *= 1.0 + static_cast<double>(space.support(j));
    if (cells > static_cast<double>(max_cells))
        throw CapExceeded("conditional-expectation tables exceed the cell cap");

    const std::uint32_t full = space.all().bits();
    std::vector<Table> g(std::size_t{full} + 1);
    g[full] = f.values();
    for (std::uint32_t mask = full; mask-- > 0;) {
        const int j = std::countr_zero(~mask);
        const Subset parent = Subset{mask}.with(j);
        g[mask] = average_out(space, g[parent.bits()], parent, j);
    }
    return g;
}

double delta(const TabFn& f, Subset v, std::size_t max_work)
{
    const auto& space = f.space();
    space.check_subset(v);
    const auto coords = v.elements();
    const std::size_t k = coords.size();
    const std::size_t nsub = space.sub_size(v);
    const std::size_t nw = std::size_t{1} << k;
    const double work = static_cast<double>(space.lattice_size()) * static_cast<double>(nsub) * static_cast<double>(nw);
    if (work > static_cast<double>(max_work))
        throw CapExceeded("delta: lattice-squared work exceeds the cap");

    const auto& vals = f.values();
    std::vector<std::ptrdiff_t> step(k);
    std::vector<std::ptrdiff_t> offset(nw);
    std::vector<std::size_t> ydigits(k);
    double best = 0.0;
    for (std::size_t x = 0; x < space.lattice_size(); ++x) {
        for (std::size_t ys = 0; ys < nsub; ++ys) {
            std::size_t rem = ys;
            for (std::size_t i = k; i-- > 0;) {
                const auto r = space.support(coords[i]);
                ydigits[i] = rem % r;
                rem /= r;
            }
            for (std::size_t i = 0; i < k; ++i) {
                const int c = coords[i];
                step[i] = (static_cast<std::ptrdiff_t>(ydigits[i]) - static_cast<std::ptrdiff_t>(space.digit(x, c)))
                        * static_cast<std::ptrdiff_t>(space.stride(c));
            }
            Complex s = 0.0;
            offset[0] = 0;
            for (std::size_t w = 0; w < nw; ++w) {
                if (w) {
                    const int low = std::countr_zero(static_cast<unsigned>(w));
                    offset[w] = offset[w & (w - 1)] + step[static_cast<std::size_t>(low)];
                }
                const Complex fv = vals[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(x) + offset[w])];
                if (std::popcount(static_cast<unsigned>(w)) % 2)
                    s -= fv;
                else
                    s += fv;
            }
            best = std::max(best, std::abs(s));
        }
    }
    return best;
}

namespace {

double sup_abs(const Table& t)
{
    double m = 0.0;
    for (const auto& z : t)
        m = std::max(m, std::abs(z));
    return m;
}

} // namespace

double delta_bar(const TabFn& f, Subset v)
{
    f.space().check_subset(v);
    Table h = conditional_expectation(f, v);
    center_in_place(f.space(), h, v);
    return sup_abs(h);
}

std::vector<double> delta_bar_all(const TabFn& f)
{
    auto g = all_conditional_expectations(f);
    std::vector<double> out(g.size());
    for (std::size_t mask = 0; mask < g.size(); ++mask) {
        center_in_place(f.space(), g[mask], Subset{static_cast<std::uint32_t>(mask)});
        out[mask] = sup_abs(g[mask]);
    }
    return out;
}

std::vector<double> s_values_from(int n, std::span<const double> delta_bar_by_mask)
{
    require(delta_bar_by_mask.size() == (std::size_t{1} << n), "delta-bar table has wrong size");
    // acc[k][j]: sum of Δ̄_V over |V| = k with j ∈ V.
    std::vector<std::vector<double>> acc(static_cast<std::size_t>(n) + 1, std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (std::size_t mask = 1; mask < delta_bar_by_mask.size(); ++mask) {
        const Subset v{static_cast<std::uint32_t>(mask)};
        for (int j : v.elements())
            acc[static_cast<std::size_t>(v.size())][static_cast<std::size_t>(j)] += delta_bar_by_mask[mask];
    }
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const auto& row = acc[static_cast<std::size_t>(k)];
        s[static_cast<std::size_t>(k - 1)] = *std::max_element(row.begin(), row.end());
    }
    return s;
}

std::vector<double> s_values(const TabFn& f)
{
    const auto db = delta_bar_all(f);
    return s_values_from(f.space().dim(), db);
}

double s_k(const TabFn& f, int k)
{
    const int n = f.space().dim();
    require(k >= 1 && k <= n, "S_k needs 1 <= k <= n");
    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    for (Subset v : k_subsets(n, k)) {
        const double db = delta_bar(f, v);
        for (int j : v.elements())
            acc[static_cast<std::size_t>(j)] += db;
    }
    return *std::max_element(acc.begin(), acc.end());
}

double derivative_delta_bound(std::span<const double> interval_lengths, double mixed_partial_max)
{
    require(mixed_partial_max >= 0.0, "derivative bound must be nonnegative");
    double prod = mixed_partial_max;
    for (double len : interval_lengths) {
        require(len >= 0.0, "interval lengths must be nonnegative");
        prod *= len;
    }
    return prod;
}

} // namespace cumlab
