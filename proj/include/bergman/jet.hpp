#pragma once

// Truncated multivariate Taylor jets: coefficients of x^alpha with every
// alpha_i <= max_degree. Enough to read off mixed partial derivatives of
// rational expressions at a point without symbolic differentiation.

#include <vector>

#include "common.hpp"

namespace bergman {

class Jet {
public:
    Jet(std::size_t nvars, unsigned max_degree)
        : nvars_(nvars), deg_(max_degree), coef_(size_for(nvars, max_degree), Complex{0.0, 0.0}) {}

    static Jet constant(std::size_t nvars, unsigned max_degree, Complex c) {
        Jet j(nvars, max_degree);
        j.coef_[0] = c;
        return j;
    }

    /// c + x_i
    static Jet variable(std::size_t nvars, unsigned max_degree, std::size_t i, Complex c) {
        Jet j = constant(nvars, max_degree, c);
        if (max_degree >= 1) j.coef_[stride(max_degree, i)] = 1.0;
        return j;
    }

    std::size_t nvars() const noexcept { return nvars_; }
    unsigned max_degree() const noexcept { return deg_; }

    /// Coefficient of x^alpha.
    Complex coefficient(const std::vector<unsigned>& alpha) const { return coef_[index(alpha)]; }
    Complex value() const { return coef_[0]; }

    Jet& operator+=(const Jet& o) {
        for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
        return *this;
    }
    Jet& operator*=(Complex c) {
        for (auto& x : coef_) x *= c;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, Complex c) { return a *= c; }
    friend Jet operator*(Complex c, Jet a) { return a *= c; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.nvars_, a.deg_);
        const std::size_t N = a.coef_.size();
        std::vector<unsigned> ia(a.nvars_), ib(a.nvars_);
        for (std::size_t i = 0; i < N; ++i) {
            if (a.coef_[i] == Complex{0.0, 0.0}) continue;
            a.decode(i, ia);
            for (std::size_t j = 0; j < N; ++j) {
                if (b.coef_[j] == Complex{0.0, 0.0}) continue;
                a.decode(j, ib);
                bool ok = true;
                std::size_t idx = 0, st = 1;
                for (std::size_t v = 0; v < a.nvars_; ++v) {
                    const unsigned e = ia[v] + ib[v];
                    if (e > a.deg_) {
                        ok = false;
                        break;
                    }
                    idx += e * st;
                    st *= a.deg_ + 1;
                }
                if (ok) r.coef_[idx] += a.coef_[i] * b.coef_[j];
            }
        }
        return r;
    }

    /// 1/f via the geometric series in the nilpotent part f - f(0).
    Jet reciprocal() const {
        const Complex f0 = coef_[0];
        if (f0 == Complex{0.0, 0.0}) throw PoleProximity("Jet::reciprocal: zero constant term");
        Jet r = *this;
        r.coef_[0] = 0.0;
        r *= -1.0 / f0;  // u = -(f - f0)/f0, so 1/f = (1/f0) sum u^k
        Jet sum = constant(nvars_, deg_, 1.0);
        Jet power = sum;
        const unsigned max_power = unsigned(nvars_) * deg_;
        for (unsigned k = 1; k <= max_power; ++k) {
            power = power * r;
            sum += power;
        }
        return sum * (1.0 / f0);
    }

private:
    static std::size_t size_for(std::size_t nvars, unsigned deg) {
        std::size_t s = 1;
        for (std::size_t i = 0; i < nvars; ++i) s *= deg + 1;
        return s;
    }
    static std::size_t stride(unsigned deg, std::size_t i) {
        std::size_t s = 1;
        for (std::size_t k = 0; k < i; ++k) s *= deg + 1;
        return s;
    }
    std::size_t index(const std::vector<unsigned>& alpha) const {
        require(alpha.size() == nvars_, "Jet: multi-index size");
        std::size_t idx = 0, st = 1;
        for (std::size_t v = 0; v < nvars_; ++v) {
            require(alpha[v] <= deg_, "Jet: multi-index beyond truncation");
            idx += alpha[v] * st;
            st *= deg_ + 1;
        }
        return idx;
    }
    void decode(std::size_t idx, std::vector<unsigned>& alpha) const {
        for (std::size_t v = 0; v < nvars_; ++v) {
            alpha[v] = unsigned(idx % (deg_ + 1));
            idx /= deg_ + 1;
        }
    }

    std::size_t nvars_;
    unsigned deg_;
    std::vector<Complex> coef_;
};

}  // namespace bergman
