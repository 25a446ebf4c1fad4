#pragma once

// Exact multivariate polynomials and rational functions over Q.
//
// Denominators are kept as products of polynomial factors with
// multiplicities. The kernels in this library only ever divide by products of
// linear forms (1 - z_j wb_k, 1 - w s, s), so the common denominator of a sum
// is the factorwise maximum multiplicity and no polynomial gcd is needed.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "common.hpp"
#include "permutation.hpp"

namespace bergman {

using Rational = mpq_class;

/// num/den in lowest terms (gmpxx leaves two-argument construction uncanonicalized).
inline Rational make_rational(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline constexpr std::size_t kMaxVars = 16;
using Exponents = std::array<std::uint8_t, kMaxVars>;

/// Named formal variables. The kernel ring is z_1..z_n, wb_1..wb_n, s.
class VariableSet {
public:
    VariableSet() = default;
    explicit VariableSet(std::vector<std::string> names) : names_(std::move(names)) {
        require(names_.size() <= kMaxVars, "VariableSet: too many variables");
    }

    static VariableSet kernel_ring(std::size_t n) {
        std::vector<std::string> v;
        for (std::size_t i = 1; i <= n; ++i) v.push_back("z" + std::to_string(i));
        for (std::size_t i = 1; i <= n; ++i) v.push_back("wb" + std::to_string(i));
        v.push_back("s");
        VariableSet r(std::move(v));
        r.block_size_ = n;
        return r;
    }

    /// w_1..w_n and s, for identities in one block of variables.
    static VariableSet single_block(std::size_t n, const std::string& stem = "w") {
        std::vector<std::string> v;
        for (std::size_t i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
        v.push_back("s");
        VariableSet r(std::move(v));
        r.block_size_ = n;
        return r;
    }

    std::size_t size() const noexcept { return names_.size(); }
    std::size_t block_size() const noexcept { return block_size_; }
    const std::string& name(std::size_t i) const { return names_[i]; }

    bool operator==(const VariableSet&) const = default;

private:
    std::vector<std::string> names_;
    std::size_t block_size_ = 0;
};

/// A contiguous run of variable indices that permutations act on.
struct Block {
    std::size_t start = 0;
    std::size_t count = 0;

    static Block z(std::size_t n) { return {0, n}; }
    static Block wb(std::size_t n) { return {n, n}; }
};

namespace detail {

struct ExponentHash {
    std::size_t operator()(const Exponents& e) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto b : e) {
            h ^= b;
            h *= 1099511628211ULL;
        }
        return std::size_t(h);
    }
};

inline unsigned total_degree(const Exponents& e) {
    unsigned d = 0;
    for (auto b : e) d += b;
    return d;
}

// Graded lexicographic: total degree first, then lexicographic on exponents.
inline bool grlex_less(const Exponents& a, const Exponents& b) {
    const unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
}

}  // namespace detail

class MultiPoly {
public:
    using Term = std::pair<Exponents, Rational>;

    MultiPoly() = default;
    explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {
        require(nvars <= kMaxVars, "MultiPoly: too many variables");
    }

    static MultiPoly constant(std::size_t nvars, const Rational& c) {
        MultiPoly p(nvars);
        if (c != 0) p.terms_.push_back({Exponents{}, c});
        return p;
    }

    static MultiPoly variable(std::size_t nvars, std::size_t index, unsigned power = 1) {
        require(index < nvars, "MultiPoly::variable: index out of range");
        require(power <= 255, "MultiPoly::variable: exponent too large");
        MultiPoly p(nvars);
        Exponents e{};
        e[index] = std::uint8_t(power);
        p.terms_.push_back({e, Rational(1)});
        return p;
    }

    static MultiPoly monomial(std::size_t nvars, const Exponents& e, const Rational& c) {
        MultiPoly p(nvars);
        if (c != 0) p.terms_.push_back({e, c});
        return p;
    }

    std::size_t nvars() const noexcept { return nvars_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    /// Total degree; -1 for the zero polynomial.
    int degree() const {
        return terms_.empty() ? -1 : int(detail::total_degree(terms_.back().first));
    }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, 1); }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, -1); }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        require(a.nvars_ == b.nvars_, "MultiPoly: variable count mismatch");
        MultiPoly r(a.nvars_);
        if (a.is_zero() || b.is_zero()) return r;
        std::unordered_map<Exponents, Rational, detail::ExponentHash> acc;
        acc.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e;
                for (std::size_t i = 0; i < kMaxVars; ++i) {
                    const unsigned s = unsigned(ea[i]) + unsigned(eb[i]);
                    if (s > 255) throw InvalidArgument("MultiPoly: exponent overflow");
                    e[i] = std::uint8_t(s);
                }
                auto [it, inserted] = acc.try_emplace(e, ca * cb);
                if (!inserted) it->second += ca * cb;
            }
        r.terms_.reserve(acc.size());
        for (auto& [e, c] : acc)
            if (c != 0) r.terms_.push_back({e, std::move(c)});
        r.sort_terms();
        return r;
    }

    friend MultiPoly operator*(const Rational& c, const MultiPoly& a) {
        if (c == 0) return MultiPoly(a.nvars_);
        MultiPoly r = a;
        for (auto& t : r.terms_) t.second *= c;
        return r;
    }

    MultiPoly pow(unsigned k) const {
        MultiPoly r = constant(nvars_, 1);
        MultiPoly base = *this;
        while (k > 0) {
            if (k & 1u) r = r * base;
            k >>= 1u;
            if (k > 0) base = base * base;
        }
        return r;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    /// Relabel variables: variable i becomes variable image[i].
    MultiPoly relabel(std::span<const std::size_t> image) const {
        require(image.size() == nvars_, "relabel: size mismatch");
        MultiPoly r(nvars_);
        r.terms_.reserve(terms_.size());
        for (const auto& [e, c] : terms_) {
            Exponents f{};
            for (std::size_t i = 0; i < nvars_; ++i) f[image[i]] = e[i];
            r.terms_.push_back({f, c});
        }
        r.sort_terms();
        return r;
    }

    /// Numerical value at a complex point, one coordinate per variable.
    Complex evaluate(std::span<const Complex> x) const {
        require(x.size() == nvars_, "evaluate: size mismatch");
        Complex total{0.0, 0.0};
        for (const auto& [e, c] : terms_) {
            Complex m = c.get_d();
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k) m *= x[i];
            total += m;
        }
        return total;
    }

    std::string to_string(const VariableSet* vars = nullptr) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << "-";
            first = false;
            const Rational mag = abs(c);
            bool wrote = false;
            if (mag != 1 || detail::total_degree(e) == 0) {
                os << mag.get_str();
                wrote = true;
            }
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (e[i] == 0) continue;
                if (wrote) os << "*";
                os << (vars ? vars->name(i) : "x" + std::to_string(i));
                if (e[i] > 1) os << "^" << int(e[i]);
                wrote = true;
            }
        }
        return os.str();
    }

private:
    static MultiPoly merge(const MultiPoly& a, const MultiPoly& b, int sign) {
        require(a.nvars_ == b.nvars_, "MultiPoly: variable count mismatch");
        MultiPoly r(a.nvars_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() ||
                (i < a.terms_.size() && detail::grlex_less(a.terms_[i].first, b.terms_[j].first))) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || detail::grlex_less(b.terms_[j].first, a.terms_[i].first)) {
                r.terms_.push_back({b.terms_[j].first, sign > 0 ? b.terms_[j].second : Rational(-b.terms_[j].second)});
                ++j;
            } else {
                Rational c = sign > 0 ? Rational(a.terms_[i].second + b.terms_[j].second)
                                      : Rational(a.terms_[i].second - b.terms_[j].second);
                if (c != 0) r.terms_.push_back({a.terms_[i].first, std::move(c)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    void sort_terms() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& x, const Term& y) { return detail::grlex_less(x.first, y.first); });
    }

    std::size_t nvars_ = 0;
    std::vector<Term> terms_;
};

/// Permute the variables of one block: variable block.start + i is replaced by
/// block.start + tau(i), matching the coordinate action (tau w)_i = w_{tau(i)}.
inline MultiPoly permute_block(const MultiPoly& f, const Permutation& tau, Block block) {
    require(block.start + block.count <= f.nvars() && tau.size() == block.count, "permute_block: bad block");
    std::vector<std::size_t> image(f.nvars());
    for (std::size_t i = 0; i < f.nvars(); ++i) image[i] = i;
    for (std::size_t i = 0; i < block.count; ++i) image[block.start + i] = block.start + tau(i);
    return f.relabel(image);
}

/// (1/k!) sum_tau sgn(tau) f o tau over the block.
inline MultiPoly antisymmetrize(const MultiPoly& f, Block block) {
    MultiPoly acc(f.nvars());
    for (const auto& tau : all_permutations(block.count)) {
        const auto g = permute_block(f, tau, block);
        acc = tau.sign() > 0 ? acc + g : acc - g;
    }
    return make_rational(1, long(factorial(block.count))) * acc;
}

/// numerator / prod_i factor_i^mult_i with structurally distinct factors.
class RationalFn {
public:
    struct Factor {
        MultiPoly poly;
        unsigned multiplicity;
    };

    RationalFn() = default;
    explicit RationalFn(MultiPoly numerator) : num_(std::move(numerator)) {}

    RationalFn(MultiPoly numerator, std::vector<Factor> factors) : num_(std::move(numerator)) {
        for (auto& f : factors) add_factor(f.poly, f.multiplicity);
    }

    const MultiPoly& numerator() const noexcept { return num_; }
    const std::vector<Factor>& factors() const noexcept { return den_; }
    std::size_t nvars() const noexcept { return num_.nvars(); }

    /// The denominator expanded as a single polynomial.
    MultiPoly denominator() const {
        MultiPoly d = MultiPoly::constant(num_.nvars(), 1);
        for (const auto& f : den_) d = d * f.poly.pow(f.multiplicity);
        return d;
    }

    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        RationalFn r(a.num_ * b.num_);
        r.den_ = a.den_;
        for (const auto& f : b.den_) r.add_factor(f.poly, f.multiplicity);
        return r;
    }

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) { return combine(a, b, 1); }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return combine(a, b, -1); }

    RationalFn operator-() const {
        RationalFn r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFn operator*(const Rational& c, const RationalFn& a) {
        RationalFn r = a;
        r.num_ = c * r.num_;
        return r;
    }

    /// q/p for p/q; the old numerator becomes a single denominator factor.
    RationalFn reciprocal() const {
        require(!num_.is_zero(), "RationalFn::reciprocal: zero numerator");
        RationalFn r(denominator());
        r.add_factor(num_, 1);
        return r;
    }

    bool is_zero() const noexcept { return num_.is_zero(); }

    /// p/q == r/t by cross-multiplication over the factorwise common denominator.
    friend bool operator==(const RationalFn& a, const RationalFn& b) { return (a - b).is_zero(); }

    RationalFn permute_block(const Permutation& tau, Block block) const {
        RationalFn r(bergman::permute_block(num_, tau, block));
        for (const auto& f : den_) r.add_factor(bergman::permute_block(f.poly, tau, block), f.multiplicity);
        return r;
    }

    Complex evaluate(std::span<const Complex> x) const {
        Complex d{1.0, 0.0};
        for (const auto& f : den_) d *= std::pow(f.poly.evaluate(x), double(f.multiplicity));
        return num_.evaluate(x) / d;
    }

    /// Term count of the numerator once everything is over the expanded denominator.
    std::size_t numerator_terms() const noexcept { return num_.term_count(); }

private:
    void add_factor(const MultiPoly& p, unsigned m) {
        if (m == 0) return;
        for (auto& f : den_)
            if (f.poly == p) {
                f.multiplicity += m;
                return;
            }
        den_.push_back({p, m});
    }

    unsigned multiplicity_of(const MultiPoly& p) const {
        for (const auto& f : den_)
            if (f.poly == p) return f.multiplicity;
        return 0;
    }

    static RationalFn combine(const RationalFn& a, const RationalFn& b, int sign) {
        require(a.nvars() == b.nvars(), "RationalFn: variable count mismatch");
        // Common denominator: each distinct factor at its larger multiplicity.
        std::vector<Factor> common = a.den_;
        for (const auto& f : b.den_) {
            bool found = false;
            for (auto& g : common)
                if (g.poly == f.poly) {
                    g.multiplicity = std::max(g.multiplicity, f.multiplicity);
                    found = true;
                }
            if (!found) common.push_back(f);
        }
        auto lift = [&](const RationalFn& x) {
            MultiPoly p = x.num_;
            for (const auto& g : common) {
                const unsigned missing = g.multiplicity - x.multiplicity_of(g.poly);
                if (missing > 0 && !p.is_zero()) p = p * g.poly.pow(missing);
            }
            return p;
        };
        RationalFn r(sign > 0 ? lift(a) + lift(b) : lift(a) - lift(b));
        r.den_ = std::move(common);
        return r;
    }

    MultiPoly num_;
    std::vector<Factor> den_;
};

inline RationalFn swap_variables(const RationalFn& f, std::size_t j, std::size_t k, Block block) {
    require(j < block.count && k < block.count, "swap_variables: index out of range");
    return f.permute_block(Permutation::transposition(block.count, j, k), block);
}

/// (1/k!) sum_tau sgn(tau) f o tau, for rational functions.
inline RationalFn antisymmetrize(const RationalFn& f, Block block) {
    RationalFn acc{MultiPoly(f.nvars())};
    for (const auto& tau : all_permutations(block.count)) {
        const auto g = f.permute_block(tau, block);
        acc = tau.sign() > 0 ? acc + g : acc - g;
    }
    return make_rational(1, long(factorial(block.count))) * acc;
}

}  // namespace bergman
