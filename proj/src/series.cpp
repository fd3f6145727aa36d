#include "cumlab/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cumlab {

GaussianRational GaussianRational::i_pow(int k)
{
    switch (((k % 4) + 4) % 4) {
    case 0: return {Rational{1}, Rational{0}};
    case 1: return {Rational{0}, Rational{1}};
    case 2: return {Rational{-1}, Rational{0}};
    default: return {Rational{0}, Rational{-1}};
    }
}

std::string GaussianRational::str() const
{
    std::ostringstream os;
    if (im == 0) {
        os << re;
    } else if (re == 0) {
        os << im << "i";
    } else {
        os << "(" << re << (im < 0 ? "-" : "+") << abs(im) << "i)";
    }
    return os.str();
}

MultiPoly MultiPoly::constant(int vars, GaussianRational c)
{
    MultiPoly p(vars);
    p.insert(Monomial(static_cast<std::size_t>(vars), 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int vars, int k, GaussianRational c)
{
    MultiPoly p(vars);
    Monomial mono(static_cast<std::size_t>(vars), 0);
    mono.at(static_cast<std::size_t>(k)) = 1;
    p.insert(mono, c);
    return p;
}

void MultiPoly::insert(const Monomial& mono, const GaussianRational& c)
{
    if (c.is_zero())
        return;
    auto [it, fresh] = terms_.try_emplace(mono, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

GaussianRational MultiPoly::coefficient(const Monomial& mono) const
{
    auto it = terms_.find(mono);
    return it == terms_.end() ? GaussianRational{} : it->second;
}

int MultiPoly::total_degree() const
{
    int best = terms_.empty() ? -1 : 0;
    for (const auto& [mono, c] : terms_)
        best = std::max(best, std::accumulate(mono.begin(), mono.end(), 0));
    return best;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o)
{
    vars_ = std::max(vars_, o.vars_);
    for (const auto& [mono, c] : o.terms_)
        insert(mono, c);
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b)
{
    MultiPoly out(std::max(a.vars_, b.vars_));
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            MultiPoly::Monomial m(static_cast<std::size_t>(out.vars_), 0);
            for (std::size_t k = 0; k < ma.size(); ++k)
                m[k] += ma[k];
            for (std::size_t k = 0; k < mb.size(); ++k)
                m[k] += mb[k];
            out.insert(m, ca * cb);
        }
    }
    return out;
}

MultiPoly operator*(const MultiPoly& a, const GaussianRational& c)
{
    MultiPoly out(a.vars_);
    for (const auto& [m, v] : a.terms_)
        out.insert(m, v * c);
    return out;
}

MultiPoly operator/(const MultiPoly& a, long q)
{
    MultiPoly out(a.vars_);
    for (const auto& [m, v] : a.terms_)
        out.insert(m, v / q);
    return out;
}

std::complex<double> MultiPoly::evaluate(const std::vector<std::complex<double>>& x) const
{
    std::complex<double> sum = 0.0;
    for (const auto& [mono, c] : terms_) {
        std::complex<double> term = c.to_complex();
        for (std::size_t k = 0; k < mono.size(); ++k)
            for (int e = 0; e < mono[k]; ++e)
                term *= x.at(k);
        sum += term;
    }
    return sum;
}

std::string MultiPoly::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << c.str();
        for (std::size_t k = 0; k < mono.size(); ++k) {
            if (mono[k] == 1)
                os << "*x" << k + 1;
            else if (mono[k] > 1)
                os << "*x" << k + 1 << "^" << mono[k];
        }
    }
    return os.str();
}

} // namespace cumlab
