#include "cumlab/regular_graphs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <unordered_map>

#include "cumlab/errors.hpp"
#include "cumlab/parallel.hpp"

namespace cumlab {

namespace {

std::uint64_t small_binom(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

/// State: counts[s-1] = number of unprocessed vertices with residual s.
class RegularDp {
public:
    RegularDp(int d, const RgOptions& opts) : d_(d), opts_(opts) {}

    BigCount count(const std::string& counts)
    {
        bool any = false;
        for (char c : counts)
            any = any || c != 0;
        if (!any)
            return 1;
        if (auto it = memo_.find(counts); it != memo_.end())
            return it->second;

        int r = 0;
        if (opts_.priority == VertexPriority::max_residual) {
            for (int s = d_; s >= 1 && r == 0; --s)
                if (counts[static_cast<std::size_t>(s - 1)] != 0)
                    r = s;
        } else {
            for (int s = 1; s <= d_ && r == 0; ++s)
                if (counts[static_cast<std::size_t>(s - 1)] != 0)
                    r = s;
        }
        std::string rest = counts;
        --rest[static_cast<std::size_t>(r - 1)];

        BigCount total = 0;
        std::vector<int> pick(static_cast<std::size_t>(d_), 0);
        distribute(rest, 0, r, 1, pick, total);

        if (memo_.size() >= opts_.max_states)
            throw CapExceeded("rg_exact: DP state count exceeds --max-states (" + std::to_string(opts_.max_states) + ")");
        memo_.emplace(counts, total);
        return total;
    }

private:
    /// Chooses how many of the r neighbours come from each residual class.
    void distribute(const std::string& rest, int cls, int remaining, std::uint64_t mult, std::vector<int>& pick,
                    BigCount& total)
    {
        if (remaining == 0) {
            std::string next(static_cast<std::size_t>(d_), 0);
            for (int s = 1; s <= d_; ++s) {
                const int moved_in = s < d_ ? pick[static_cast<std::size_t>(s)] : 0;
                next[static_cast<std::size_t>(s - 1)] = static_cast<char>(
                    rest[static_cast<std::size_t>(s - 1)] - pick[static_cast<std::size_t>(s - 1)] + moved_in);
            }
            total += count(next) * mult;
            return;
        }
        if (cls == d_)
            return;
        int left = 0;
        for (int s = cls; s < d_; ++s)
            left += rest[static_cast<std::size_t>(s)];
        if (left < remaining)
            return;
        const int avail = rest[static_cast<std::size_t>(cls)];
        for (int a = 0; a <= std::min(avail, remaining); ++a) {
            pick[static_cast<std::size_t>(cls)] = a;
            distribute(rest, cls + 1, remaining - a, mult * small_binom(avail, a), pick, total);
        }
        pick[static_cast<std::size_t>(cls)] = 0;
    }

    int d_;
    RgOptions opts_;
    std::unordered_map<std::string, BigCount> memo_;
};

void check_nd(int n, int d)
{
    require(n >= 1, "regular graphs: n must be positive");
    require(d >= 0 && d <= n - 1, "regular graphs: need 0 <= d <= n-1");
}

} // namespace

BigCount rg_exact(int n, int d, const RgOptions& opts)
{
    check_nd(n, d);
    require(n <= 60, "rg_exact: n must be at most 60");
    require(opts.max_states > 0, "rg_exact: max_states must be positive");
    if ((static_cast<long>(n) * d) % 2 != 0)
        return 0;
    if (d == 0)
        return 1;
    std::string start(static_cast<std::size_t>(d), 0);
    start[static_cast<std::size_t>(d - 1)] = static_cast<char>(n);
    RegularDp dp(d, opts);
    return dp.count(start);
}

BigCount rg_bruteforce(int n, int d)
{
    check_nd(n, d);
    const int num_edges = n * (n - 1) / 2;
    require(num_edges <= 24, "rg_bruteforce: needs C(n,2) <= 24");
    if ((n * d) % 2 != 0)
        return 0;
    std::vector<std::uint32_t> incident(static_cast<std::size_t>(n), 0);
    int e = 0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b, ++e) {
            incident[static_cast<std::size_t>(a)] |= 1u << e;
            incident[static_cast<std::size_t>(b)] |= 1u << e;
        }
    }
    const std::uint64_t total = std::uint64_t{1} << num_edges;
    std::vector<std::uint64_t> partial(chunk_count(total), 0);
    parallel_chunks(total, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        std::uint64_t hits = 0;
        for (std::uint64_t mask = begin; mask < end; ++mask) {
            if (std::popcount(mask) * 2 != n * d)
                continue;
            bool ok = true;
            for (int v = 0; v < n && ok; ++v)
                ok = std::popcount(static_cast<std::uint32_t>(mask) & incident[static_cast<std::size_t>(v)]) == d;
            hits += ok ? 1 : 0;
        }
        partial[chunk] = hits;
    });
    BigCount sum = 0;
    for (auto h : partial)
        sum += h;
    return sum;
}

double log_bigcount(const BigCount& x)
{
    require(x > 0, "log_bigcount: argument must be positive");
    const auto bits = static_cast<long>(boost::multiprecision::msb(x)) + 1;
    if (bits <= 60)
        return std::log(static_cast<double>(x));
    const long shift = bits - 60;
    const BigCount top = x >> shift;
    return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::log(2.0);
}

const std::array<std::vector<Rational>, 7>& regular_series_polys()
{
    using R = Rational;
    static const std::array<std::vector<Rational>, 7> polys = {
        std::vector<R>{0, R(1, 4)},
        std::vector<R>{0, 0, R(-1, 4)},
        std::vector<R>{0, 0, R(2, 24), R(-23, 24)},
        std::vector<R>{0, 0, 0, R(22, 24), R(-129, 24)},
        std::vector<R>{0, 0, 0, R(-3, 12), R(115, 12), R(-483, 12)},
        std::vector<R>{0, 0, 0, 0, R(-375, 60), R(6615, 60), R(-22097, 60)},
        std::vector<R>{0, 0, 0, 0, R(1046, 720), R(-87318, 720), R(1002900, 720), R(-2791541, 720)},
    };
    return polys;
}

double eval_series_poly(int j, double x)
{
    require(j >= 1 && j <= 7, "eval_series_poly: only p_1..p_7 are available");
    const auto& c = regular_series_polys()[static_cast<std::size_t>(j - 1)];
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + static_cast<double>(*it);
    return acc;
}

AsymptoticSeries rg_asymptotic(int n, int d, int m)
{
    require(m >= 1 && m <= 7, "rg_asymptotic: m must lie in 1..7");
    require(n >= 3 && d > 0 && d < n - 1, "rg_asymptotic: need 0 < d < n-1");
    AsymptoticSeries s;
    s.n = n;
    s.d = d;
    s.m = m;
    s.lambda = static_cast<double>(d) / (n - 1);
    s.Lambda = s.lambda * (1.0 - s.lambda);
    const double pairs = 0.5 * n * (n - 1.0);
    const double log_binom = std::lgamma(n) - std::lgamma(d + 1.0) - std::lgamma(n - d + 0.0);
    s.log_leading = 0.5 * std::log(2.0)
                    + pairs * (s.lambda * std::log(s.lambda) + (1.0 - s.lambda) * std::log1p(-s.lambda))
                    + n * log_binom;
    s.log_approx = s.log_leading;
    for (int j = 1; j <= m; ++j) {
        const double term = eval_series_poly(j, s.Lambda) / (std::pow(s.Lambda, j) * std::pow(n, j - 1));
        s.terms.push_back(term);
        s.log_approx += term;
    }
    return s;
}

double conjecture_gap(int n, int d, const RgOptions& opts)
{
    require(d >= 1 && d <= n - 2, "conjecture_gap: need 1 <= d <= n-2");
    require((n * d) % 2 == 0, "conjecture_gap: dn must be even");
    const double exact = log_bigcount(rg_exact(n, d, opts));
    const double approx = rg_asymptotic(n, d, 7).log_approx;
    return std::abs(exact - approx) * std::pow(d, 3) * std::pow(n - d, 3) * n;
}

std::vector<std::complex<double>> log_edge_coeffs(double lambda, int L)
{
    require(L >= 1, "log_edge_coeffs: L must be positive");
    require(std::isfinite(lambda), "log_edge_coeffs: lambda must be finite");
    using C = std::complex<double>;
    TruncatedSeries<C> u(static_cast<std::size_t>(L), C{0.0});
    C ipow = 1.0;
    double fact = 1.0;
    for (int k = 1; k <= L; ++k) {
        ipow *= C(0.0, 1.0);
        fact *= k;
        u[static_cast<std::size_t>(k)] = lambda * ipow / fact;
    }
    const auto log_series = TruncatedSeries<C>::log1p_of(u);
    return {log_series.coeffs().begin() + 1, log_series.coeffs().end()};
}

std::vector<GaussianRational> log_edge_coeffs_exact(const Rational& lambda, int L)
{
    require(L >= 1, "log_edge_coeffs_exact: L must be positive");
    TruncatedSeries<GaussianRational> u(static_cast<std::size_t>(L), GaussianRational{});
    BigInt fact = 1;
    for (int k = 1; k <= L; ++k) {
        fact *= k;
        u[static_cast<std::size_t>(k)] = GaussianRational::i_pow(k) * GaussianRational(lambda / Rational(fact));
    }
    const auto log_series = TruncatedSeries<GaussianRational>::log1p_of(u);
    return {log_series.coeffs().begin() + 1, log_series.coeffs().end()};
}

MultiPoly pd_poly(int d)
{
    require(d >= 1 && d <= 24, "pd_poly: d must lie in 1..24");
    const auto order = static_cast<std::size_t>(d);
    TruncatedSeries<MultiPoly> exponent(order, MultiPoly(d));
    for (int j = 1; j <= d; ++j)
        exponent[static_cast<std::size_t>(j)] =
            MultiPoly::variable(d, j - 1, GaussianRational::i_pow(j + 1) * GaussianRational(Rational(1, j)));
    const auto e = TruncatedSeries<MultiPoly>::exp_of(exponent, MultiPoly::constant(d, 1));

    // (1+z²)^{-1/2} = Σ_k C(-1/2, k) z^{2k}.
    MultiPoly out(d);
    Rational binom = 1;
    for (int k = 0; 2 * k <= d; ++k) {
        if (k > 0)
            binom *= Rational(-(2 * k - 1), 2 * k);
        out += e[order - static_cast<std::size_t>(2 * k)] * GaussianRational(binom);
    }
    return out;
}

} // namespace cumlab
