#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cumlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact complex rational a + b i.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r, Rational i = Rational{0}) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(int r) : re(r) {}

    static GaussianRational i() { return {Rational{0}, Rational{1}}; }
    /// i^k for any integer k.
    static GaussianRational i_pow(int k);

    GaussianRational& operator+=(const GaussianRational& o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, long q) { return {a.re / q, a.im / q}; }
    friend bool operator==(const GaussianRational&, const GaussianRational&) = default;

    bool is_zero() const { return re == 0 && im == 0; }
    std::complex<double> to_complex() const
    {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
    std::string str() const;
};

inline std::complex<double> operator/(const std::complex<double>& a, long q)
{
    return a / static_cast<double>(q);
}

/// Sparse polynomial in x_1..x_d with Gaussian-rational coefficients.
/// Monomials are exponent vectors of fixed length.
class MultiPoly {
public:
    using Monomial = std::vector<int>;

    MultiPoly() = default;
    explicit MultiPoly(int vars) : vars_(vars) {}
    static MultiPoly constant(int vars, GaussianRational c);
    /// c · x_k (k zero-based).
    static MultiPoly variable(int vars, int k, GaussianRational c = 1);

    int vars() const { return vars_; }
    const std::map<Monomial, GaussianRational>& terms() const { return terms_; }
    GaussianRational coefficient(const Monomial& mono) const;
    int total_degree() const;

    MultiPoly& operator+=(const MultiPoly& o);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(const MultiPoly& a, const GaussianRational& c);
    friend MultiPoly operator/(const MultiPoly& a, long q);
    friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

    std::complex<double> evaluate(const std::vector<std::complex<double>>& x) const;
    std::string str() const;

private:
    void insert(const Monomial& mono, const GaussianRational& c);

    int vars_ = 0;
    std::map<Monomial, GaussianRational> terms_;
};

/// Power series truncated after z^order, coefficients of type T. T needs
/// +, *, division by a long, and construction from 0.
template <class T>
class TruncatedSeries {
public:
    TruncatedSeries(std::size_t order, T zero) : coeffs_(order + 1, zero), zero_(zero) {}

    std::size_t order() const { return coeffs_.size() - 1; }
    T& operator[](std::size_t k) { return coeffs_[k]; }
    const T& operator[](std::size_t k) const { return coeffs_[k]; }
    const std::vector<T>& coeffs() const { return coeffs_; }

    TruncatedSeries& operator+=(const TruncatedSeries& o)
    {
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            coeffs_[k] = coeffs_[k] + o.coeffs_[k];
        return *this;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        TruncatedSeries out(a.order(), a.zero_);
        for (std::size_t i = 0; i <= a.order(); ++i)
            for (std::size_t j = 0; i + j <= a.order(); ++j)
                out.coeffs_[i + j] = out.coeffs_[i + j] + a.coeffs_[i] * b.coeffs_[j];
        return out;
    }

    TruncatedSeries divided(long q) const
    {
        TruncatedSeries out(*this);
        for (auto& c : out.coeffs_)
            c = c / q;
        return out;
    }

    /// exp(u) for u with zero constant term.
    static TruncatedSeries exp_of(const TruncatedSeries& u, T one)
    {
        TruncatedSeries sum(u.order(), u.zero_);
        TruncatedSeries power(u.order(), u.zero_);
        power[0] = one;
        sum[0] = one;
        for (std::size_t q = 1; q <= u.order(); ++q) {
            power = (power * u).divided(static_cast<long>(q));
            sum += power;
        }
        return sum;
    }

    /// log(1 + u) for u with zero constant term.
    static TruncatedSeries log1p_of(const TruncatedSeries& u)
    {
        TruncatedSeries sum(u.order(), u.zero_);
        TruncatedSeries power = u;
        for (std::size_t q = 1; q <= u.order(); ++q) {
            TruncatedSeries term = power.divided(static_cast<long>(q));
            if (q % 2 == 0)
                term = term.negated();
            sum += term;
            power = power * u;
        }
        return sum;
    }

    TruncatedSeries negated() const
    {
        TruncatedSeries out(*this);
        for (auto& c : out.coeffs_)
            c = zero_ - c;
        return out;
    }

private:
    std::vector<T> coeffs_;
    T zero_;
};

} // namespace cumlab
