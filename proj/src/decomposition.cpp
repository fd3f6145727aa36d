#include "cumlab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "cumlab/errors.hpp"

namespace cumlab {

namespace {

double sup_abs(const Table& t)
{
    double m = 0.0;
    for (const auto& z : t)
        m = std::max(m, std::abs(z));
    return m;
}

void accumulate(std::map<Subset, Table>& parts, Subset v, const Table& t, Complex c = 1.0)
{
    auto [it, inserted] = parts.try_emplace(v, t.size(), Complex{});
    auto& dst = it->second;
    for (std::size_t i = 0; i < t.size(); ++i)
        dst[i] += c * t[i];
}

void check_coordinate(const ProductSpace& space, int j)
{
    require(j >= 0 && j < space.dim(), "coordinate index out of range: " + std::to_string(j));
}

} // namespace

Decomposition::Decomposition(SpacePtr space) : space_(std::move(space))
{
    require(space_ != nullptr, "decomposition needs a space");
    require(space_->dim() <= kMaxDecompositionDim,
            "decompositions support at most " + std::to_string(kMaxDecompositionDim) + " coordinates");
}

Decomposition Decomposition::unit(SpacePtr space)
{
    return constant(std::move(space), 1.0);
}

Decomposition Decomposition::constant(SpacePtr space, Complex c)
{
    Decomposition d(std::move(space));
    d.set_part(Subset{}, Table{c});
    return d;
}

void Decomposition::set_part(Subset v, Table t)
{
    space_->check_subset(v);
    require(t.size() == space_->sub_size(v), "part table length must equal the V-sub-lattice size");
    parts_[v] = std::move(t);
}

const Table* Decomposition::part(Subset v) const
{
    auto it = parts_.find(v);
    return it == parts_.end() ? nullptr : &it->second;
}

Complex Decomposition::value(Subset v, const Point& x) const
{
    const Table* t = part(v);
    if (!t)
        return 0.0;
    return (*t)[space_->sub_index(space_->flat_index(x), v)];
}

double Decomposition::part_sup(Subset v) const
{
    const Table* t = part(v);
    return t ? sup_abs(*t) : 0.0;
}

Decomposition& Decomposition::prune(double tol)
{
    std::erase_if(parts_, [tol](const auto& kv) { return sup_abs(kv.second) <= tol; });
    return *this;
}

bool Decomposition::is_free_of(int j) const
{
    return std::none_of(parts_.begin(), parts_.end(),
                        [j](const auto& kv) { return kv.first.contains(j) && sup_abs(kv.second) > 0.0; });
}

bool Decomposition::is_restricted_to(int j) const
{
    return std::none_of(parts_.begin(), parts_.end(),
                        [j](const auto& kv) { return !kv.first.contains(j) && sup_abs(kv.second) > 0.0; });
}

// ---------------------------------------------------------------------------

GammaNorm::GammaNorm(double gamma) : gamma_(gamma)
{
    require(gamma >= 0.0 && std::isfinite(gamma), "gamma must be a finite nonnegative number");
}

double GammaNorm::operator()(const Decomposition& pi) const
{
    double total = 0.0;
    for (const auto& [v, t] : pi.parts())
        total += sup_abs(t) * std::exp(gamma_ * v.size());
    return total;
}

double norm_gamma(const Decomposition& pi, double gamma)
{
    return GammaNorm(gamma)(pi);
}

Decomposition hoeffding(const TabFn& f)
{
    Decomposition out(f.space_ptr());
    auto g = all_conditional_expectations(f);
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * f.sup_abs();
    for (std::size_t mask = 0; mask < g.size(); ++mask) {
        const Subset v{static_cast<std::uint32_t>(mask)};
        center_in_place(f.space(), g[mask], v);
        if (v.is_empty() || sup_abs(g[mask]) > tol)
            out.set_part(v, std::move(g[mask]));
    }
    return out;
}

TabFn realize(const Decomposition& pi)
{
    const auto& space = pi.space();
    const Subset all = space.all();
    Table out(space.lattice_size(), Complex{});
    for (const auto& [v, t] : pi.parts()) {
        const auto map = space.projection_map(all, v);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += t[map[i]];
    }
    return TabFn(pi.space_ptr(), std::move(out));
}

Decomposition add(const Decomposition& a, const Decomposition& b, Complex ca, Complex cb)
{
    require_same_space(a.space(), b.space());
    Decomposition out(a.space_ptr());
    std::map<Subset, Table> parts;
    for (const auto& [v, t] : a.parts())
        accumulate(parts, v, t, ca);
    for (const auto& [v, t] : b.parts())
        accumulate(parts, v, t, cb);
    for (auto& [v, t] : parts)
        out.set_part(v, std::move(t));
    return out;
}

Decomposition scale(const Decomposition& a, Complex c)
{
    Decomposition out(a.space_ptr());
    for (const auto& [v, t] : a.parts()) {
        Table s(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            s[i] = c * t[i];
        out.set_part(v, std::move(s));
    }
    return out;
}

Decomposition multiply(const Decomposition& a, const Decomposition& b)
{
    require_same_space(a.space(), b.space());
    const auto& space = a.space();
    std::map<std::pair<Subset, Subset>, std::vector<std::size_t>> maps;
    auto projection = [&](Subset v, Subset u) -> const std::vector<std::size_t>& {
        auto it = maps.find({v, u});
        if (it == maps.end())
            it = maps.emplace(std::pair{v, u}, space.projection_map(v, u)).first;
        return it->second;
    };

    std::map<Subset, Table> parts;
    for (const auto& [v1, t1] : a.parts()) {
        for (const auto& [v2, t2] : b.parts()) {
            const Subset v = v1 | v2;
            const auto& m1 = projection(v, v1);
            const auto& m2 = projection(v, v2);
            auto [it, inserted] = parts.try_emplace(v, m1.size(), Complex{});
            auto& dst = it->second;
            for (std::size_t i = 0; i < dst.size(); ++i)
                dst[i] += t1[m1[i]] * t2[m2[i]];
        }
    }
    Decomposition out(a.space_ptr());
    for (auto& [v, t] : parts)
        out.set_part(v, std::move(t));
    return out;
}

int exp_truncation_order(double norm, double eps)
{
    require(std::isfinite(norm) && norm >= 0.0, "exp_trunc: norm must be finite");
    require(eps > 0.0, "exp_trunc: eps must be positive");
    if (norm == 0.0)
        return 0;
    // Tail after J is at most term_{J+1} / (1 - N/(J+2)) once J + 2 > N.
    double term = 1.0; // N^J / J!
    for (int j = 0; j < 100000; ++j) {
        const double next = term * norm / (j + 1);
        if (j + 2 > norm) {
            const double tail = next / (1.0 - norm / (j + 2));
            if (tail < eps)
                return j;
        }
        term = next;
    }
    throw ValidationError("exp_trunc: truncation order did not converge");
}

Decomposition exp_trunc(const Decomposition& pi, double eps, double gamma)
{
    const int order = exp_truncation_order(norm_gamma(pi, gamma), eps);
    Decomposition result = Decomposition::unit(pi.space_ptr());
    Decomposition power = Decomposition::unit(pi.space_ptr());
    for (int j = 1; j <= order; ++j) {
        power = scale(multiply(power, pi), 1.0 / j);
        result = add(result, power);
    }
    return result;
}

Decomposition expect_coordinate(const Decomposition& pi, int j)
{
    const auto& space = pi.space();
    check_coordinate(space, j);
    std::map<Subset, Table> parts;
    for (const auto& [v, t] : pi.parts()) {
        if (!v.contains(j))
            accumulate(parts, v, t);
        else
            accumulate(parts, v.without(j), average_out(space, t, v, j));
    }
    Decomposition out(pi.space_ptr());
    for (auto& [v, t] : parts)
        out.set_part(v, std::move(t));
    return out;
}

Decomposition expect_from(const Decomposition& pi, int first)
{
    const int n = pi.space().dim();
    require(first >= 0 && first <= n, "expect_from: first coordinate out of range");
    Decomposition out = pi;
    for (int j = n - 1; j >= first; --j)
        out = expect_coordinate(out, j);
    return out;
}

Decomposition substitute_coordinate(const Decomposition& pi, int j, const Point& y)
{
    const auto& space = pi.space();
    check_coordinate(space, j);
    space.check_point(y);
    std::map<Subset, Table> parts;
    for (const auto& [v, t] : pi.parts()) {
        if (!v.contains(j))
            accumulate(parts, v, t);
        else
            accumulate(parts, v.without(j), fix_coordinate(space, t, v, j, y[j]));
    }
    Decomposition out(pi.space_ptr());
    for (auto& [v, t] : parts)
        out.set_part(v, std::move(t));
    return out;
}

Decomposition difference(const Decomposition& pi, Subset v, const Point& y)
{
    pi.space().check_subset(v);
    Decomposition out = pi;
    for (int j : v.elements())
        out = add(out, substitute_coordinate(out, j, y), 1.0, -1.0);
    return out;
}

double gamma_v(const Decomposition& pi, Subset v, double gamma)
{
    const auto& space = pi.space();
    space.check_subset(v);
    const GammaNorm norm(gamma);
    const auto coords = v.elements();
    const std::size_t nsub = space.sub_size(v);
    double best = 0.0;
    Point y{std::vector<std::size_t>(static_cast<std::size_t>(space.dim()), 0)};
    for (std::size_t s = 0; s < nsub; ++s) {
        std::size_t rem = s;
        for (std::size_t i = coords.size(); i-- > 0;) {
            const auto r = space.support(coords[i]);
            y.idx[static_cast<std::size_t>(coords[i])] = rem % r;
            rem /= r;
        }
        best = std::max(best, norm(difference(pi, v, y)));
    }
    return best;
}

double gamma_budget(const Decomposition& pi, int m, double gamma)
{
    const int n = pi.space().dim();
    require(m >= 1, "gamma_budget needs m >= 1");
    double best = 0.0;
    for (int t = 1; t <= std::min(m, n); ++t) {
        std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
        for (Subset v : k_subsets(n, t)) {
            const double g = gamma_v(pi, v, gamma);
            for (int j : v.elements())
                acc[static_cast<std::size_t>(j)] += g;
        }
        best = std::max(best, *std::max_element(acc.begin(), acc.end()));
    }
    return best;
}

std::pair<Decomposition, Decomposition> split_restricted_free(const Decomposition& pi, int j)
{
    check_coordinate(pi.space(), j);
    Decomposition restricted(pi.space_ptr());
    Decomposition free(pi.space_ptr());
    for (const auto& [v, t] : pi.parts())
        (v.contains(j) ? restricted : free).set_part(v, t);
    return {std::move(restricted), std::move(free)};
}

std::vector<std::vector<std::uint32_t>> set_partitions(int r)
{
    require(r >= 0 && r <= 12, "set partitions supported for r <= 12");
    std::vector<std::vector<std::uint32_t>> out;
    if (r == 0) {
        out.emplace_back();
        return out;
    }
    // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
    std::vector<int> a(static_cast<std::size_t>(r), 0);
    while (true) {
        const int blocks = *std::max_element(a.begin(), a.end()) + 1;
        std::vector<std::uint32_t> masks(static_cast<std::size_t>(blocks), 0);
        for (int i = 0; i < r; ++i)
            masks[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])] |= 1u << i;
        out.push_back(std::move(masks));

        int i = r - 1;
        for (; i > 0; --i) {
            const int prefix_max = *std::max_element(a.begin(), a.begin() + i);
            if (a[static_cast<std::size_t>(i)] <= prefix_max) {
                ++a[static_cast<std::size_t>(i)];
                std::fill(a.begin() + i + 1, a.end(), 0);
                break;
            }
        }
        if (i == 0)
            break;
    }
    return out;
}

Decomposition conditional_cumulant(std::span<const Decomposition> args, int first)
{
    require(!args.empty(), "conditional cumulant needs r >= 1 arguments");
    const int r = static_cast<int>(args.size());
    require(r <= 8, "conditional cumulant supports r <= 8");
    const auto space = args.front().space_ptr();
    for (const auto& a : args)
        require_same_space(*space, a.space());
    const int n = space->dim();
    require(first >= 0 && first <= n, "conditional cumulant: first coordinate out of range");
    if (first == n)
        return r == 1 ? args.front() : Decomposition(space);

    const std::size_t nmasks = std::size_t{1} << r;
    std::vector<std::optional<Decomposition>> products(nmasks);
    std::vector<std::optional<Decomposition>> expected(nmasks);
    auto block_value = [&](std::uint32_t mask) -> const Decomposition& {
        if (!expected[mask]) {
            // Build ∏_{k∈B} π_k by peeling off the highest member.
            for (std::uint32_t m = 1; m <= mask; ++m) {
                if ((m & mask) != m || products[m])
                    continue;
                const int top = 31 - std::countl_zero(m);
                const std::uint32_t rest = m & ~(1u << top);
                products[m] = rest ? multiply(*products[rest], args[static_cast<std::size_t>(top)])
                                   : args[static_cast<std::size_t>(top)];
            }
            expected[mask] = expect_from(*products[mask], first);
        }
        return *expected[mask];
    };

    Decomposition total(space);
    for (const auto& tau : set_partitions(r)) {
        const int blocks = static_cast<int>(tau.size());
        double factorial = 1.0; // (|τ|-1)!
        for (int k = 2; k < blocks; ++k)
            factorial *= k;
        const double coeff = (blocks % 2 == 1 ? 1.0 : -1.0) * factorial;
        Decomposition term = block_value(tau.front());
        for (std::size_t b = 1; b < tau.size(); ++b)
            term = multiply(term, block_value(tau[b]));
        total = add(total, term, 1.0, coeff);
    }
    return total;
}

Decomposition conditional_cumulant(const Decomposition& pi, int r, int first)
{
    require(r >= 1, "conditional cumulant needs r >= 1");
    std::vector<Decomposition> args(static_cast<std::size_t>(r), pi);
    return conditional_cumulant(args, first);
}

bool approx_equal(const Decomposition& a, const Decomposition& b, double tol)
{
    require_same_space(a.space(), b.space());
    std::map<Subset, bool> keys;
    for (const auto& kv : a.parts())
        keys[kv.first] = true;
    for (const auto& kv : b.parts())
        keys[kv.first] = true;
    for (const auto& [v, unused] : keys) {
        const Table* ta = a.part(v);
        const Table* tb = b.part(v);
        const std::size_t len = a.space().sub_size(v);
        const double scale_ = std::max({1.0, ta ? sup_abs(*ta) : 0.0, tb ? sup_abs(*tb) : 0.0});
        for (std::size_t i = 0; i < len; ++i) {
            const Complex za = ta ? (*ta)[i] : Complex{};
            const Complex zb = tb ? (*tb)[i] : Complex{};
            if (std::abs(za - zb) > tol * scale_)
                return false;
        }
    }
    return true;
}

} // namespace cumlab
