#pragma once

// Exact verification of the algebraic identities behind the kernel
// decomposition and the blow-up argument. Each verifier builds both sides as
// formal rational functions, runs a floating-point pre-screen at three random
// points, then compares exactly.

#include <chrono>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "multipoly.hpp"

namespace bergman {

/// Deliberate corruption of one side, for negative controls.
enum class Mutation { None, FlipSign, BumpExponent };

inline const char* to_string(Mutation m) {
    switch (m) {
        case Mutation::None: return "none";
        case Mutation::FlipSign: return "flip-sign";
        case Mutation::BumpExponent: return "bump-exponent";
    }
    return "?";
}

struct IdentityResult {
    std::string name;
    int n = 0;
    Mutation mutation = Mutation::None;
    bool passed = false;
    bool prescreen_passed = false;
    std::size_t lhs_terms = 0;
    std::size_t rhs_terms = 0;
    double elapsed_ms = 0.0;
    std::optional<std::vector<Complex>> witness;  // pre-screen point that separated the sides
};

namespace detail {

/// Polynomials in the kernel ring z_1..z_n, wb_1..wb_n, s (indices are 1-based).
class KernelAlgebra {
public:
    explicit KernelAlgebra(std::size_t n) : n_(n), vars_(VariableSet::kernel_ring(n)) {}

    std::size_t n() const { return n_; }
    std::size_t nvars() const { return vars_.size(); }
    const VariableSet& vars() const { return vars_; }

    MultiPoly one() const { return MultiPoly::constant(nvars(), 1); }
    MultiPoly z(std::size_t j) const { return MultiPoly::variable(nvars(), j - 1); }
    MultiPoly wb(std::size_t j) const { return MultiPoly::variable(nvars(), n_ + j - 1); }

    /// a_{j,k} = 1 - z_j wb_k
    MultiPoly a(std::size_t j, std::size_t k) const { return one() - z(j) * wb(k); }
    /// b_{j,k} = (z_j - z_k)(wb_j - wb_k)
    MultiPoly b(std::size_t j, std::size_t k) const { return (z(j) - z(k)) * (wb(j) - wb(k)); }

    /// prod_{j<=k} a_{k,j} a_{j,k} as a factor list (pi^n is dropped on every side).
    std::vector<RationalFn::Factor> common_denominator() const {
        std::vector<RationalFn::Factor> f;
        for (std::size_t j = 1; j <= n_; ++j) f.push_back({a(j, j), 2});
        for (std::size_t j = 1; j <= n_; ++j)
            for (std::size_t k = j + 1; k <= n_; ++k) {
                f.push_back({a(k, j), 1});
                f.push_back({a(j, k), 1});
            }
        return f;
    }

private:
    std::size_t n_;
    VariableSet vars_;
};

inline std::vector<std::vector<Complex>> prescreen_points(std::size_t nvars, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    std::vector<std::vector<Complex>> pts(3, std::vector<Complex>(nvars));
    for (auto& p : pts)
        for (auto& x : p) x = Complex(u(rng), u(rng));
    return pts;
}

template <class Lhs, class Rhs>
IdentityResult compare_sides(std::string name, int n, Mutation m, std::size_t nvars, const Lhs& lhs,
                             const Rhs& rhs) {
    const auto t0 = std::chrono::steady_clock::now();
    IdentityResult r;
    r.name = std::move(name);
    r.n = n;
    r.mutation = m;
    r.prescreen_passed = true;
    for (const auto& x : prescreen_points(nvars, 0x5eed + std::uint64_t(n))) {
        const Complex l = lhs.evaluate(x), rv = rhs.evaluate(x);
        if (std::abs(l - rv) > 1e-12 * std::max(1.0, std::abs(l) + std::abs(rv))) {
            r.prescreen_passed = false;
            r.witness = x;
            break;
        }
    }
    if constexpr (std::is_same_v<Lhs, MultiPoly>) {
        r.lhs_terms = lhs.term_count();
        r.rhs_terms = rhs.term_count();
    } else {
        r.lhs_terms = lhs.numerator_terms();
        r.rhs_terms = rhs.numerator_terms();
    }
    // The exact comparison is the verdict; the pre-screen only short-circuits.
    r.passed = r.prescreen_passed && (lhs == rhs);
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace detail

/// a_{j,k} a_{k,j} = a_{j,j} a_{k,k} + b_{j,k} for every pair j < k <= n.
inline IdentityResult verify_ab_identity(int n, Mutation m = Mutation::None) {
    require(n >= 2, "verify_ab_identity: n >= 2");
    detail::KernelAlgebra A{std::size_t(n)};
    // All pairs are folded into one comparison by summing with distinct
    // scalar tags, which keeps a single witness while testing every pair.
    MultiPoly lhs(A.nvars()), rhs(A.nvars());
    long tag = 1;
    for (std::size_t j = 1; j <= A.n(); ++j)
        for (std::size_t k = j + 1; k <= A.n(); ++k, tag *= 3) {
            lhs = lhs + Rational(tag) * (A.a(j, k) * A.a(k, j));
            MultiPoly bterm = A.b(j, k);
            MultiPoly diag = A.a(j, j) * A.a(k, k);
            if (tag == 1 && m == Mutation::FlipSign) bterm = -bterm;
            if (tag == 1 && m == Mutation::BumpExponent) diag = diag * A.a(j, j);
            rhs = rhs + Rational(tag) * (diag + bterm);
        }
    auto r = detail::compare_sides("ab_identity", n, m, A.nvars(), lhs, rhs);
    // Tagged sums could hide compensating errors; confirm pairwise as well.
    if (r.passed)
        for (std::size_t j = 1; j <= A.n() && r.passed; ++j)
            for (std::size_t k = j + 1; k <= A.n() && r.passed; ++k)
                r.passed = A.a(j, k) * A.a(k, j) == A.a(j, j) * A.a(k, k) + A.b(j, k);
    return r;
}

/// prod_{j<=m} a_{j,m+1} a_{m+1,j} = sum over subsets I of {1..m} of
/// a_{m+1,m+1}^{|I|} prod_{j in I} a_{j,j} prod_{k not in I} b_{k,m+1}.
inline IdentityResult verify_pI_expansion(int m, Mutation mut = Mutation::None) {
    require(m >= 1 && m <= 6, "verify_pI_expansion: 1 <= m <= 6");
    detail::KernelAlgebra A(std::size_t(m) + 1);
    const std::size_t top = std::size_t(m) + 1;
    MultiPoly lhs = A.one();
    for (std::size_t j = 1; j <= std::size_t(m); ++j) lhs = lhs * A.a(j, top) * A.a(top, j);

    MultiPoly rhs(A.nvars());
    const unsigned full = (1u << unsigned(m)) - 1;
    for (unsigned mask = 0; mask <= full; ++mask) {
        unsigned card = 0;
        MultiPoly term = A.one();
        for (std::size_t j = 1; j <= std::size_t(m); ++j) {
            if (mask & (1u << (j - 1))) {
                term = term * A.a(j, j);
                ++card;
            } else {
                term = term * A.b(j, top);
            }
        }
        if (mut == Mutation::BumpExponent && mask == full) ++card;
        term = term * A.a(top, top).pow(card);
        if (mut == Mutation::FlipSign && mask == 0) term = -term;
        rhs = rhs + term;
    }
    return detail::compare_sides("pI_expansion", m, mut, A.nvars(), lhs, rhs);
}

namespace detail {

inline RationalFn kernel_T1_formal(const KernelAlgebra& A, bool repeated_factor_denominator = false) {
    MultiPoly prod_a = A.one(), prod_b = A.one();
    for (std::size_t j = 1; j <= A.n(); ++j)
        for (std::size_t k = j + 1; k <= A.n(); ++k) {
            prod_a = prod_a * A.a(k, j) * A.a(j, k);
            prod_b = prod_b * A.b(j, k);
        }
    std::vector<RationalFn::Factor> den;
    if (!repeated_factor_denominator) {
        den = A.common_denominator();
    } else {
        // prod_{j<=k} (1 - z_k wb_j)^2: the denominator as literally typeset.
        for (std::size_t j = 1; j <= A.n(); ++j)
            for (std::size_t k = j; k <= A.n(); ++k) den.push_back({A.a(k, j), 2});
    }
    return RationalFn(prod_a - prod_b, den);
}

inline RationalFn kernel_T2_formal(const KernelAlgebra& A, bool flip = false) {
    MultiPoly prod_b = A.one();
    for (std::size_t j = 1; j <= A.n(); ++j)
        for (std::size_t k = j + 1; k <= A.n(); ++k) prod_b = prod_b * A.b(j, k);
    return RationalFn(flip ? -prod_b : prod_b, A.common_denominator());
}

/// prod_j (1 - z_j wb_j)^{-2}, the polydisc kernel with pi^n dropped.
inline RationalFn kernel_polydisc_formal(const KernelAlgebra& A, bool bump = false) {
    std::vector<RationalFn::Factor> den;
    for (std::size_t j = 1; j <= A.n(); ++j) den.push_back({A.a(j, j), (bump && j == 1) ? 3u : 2u});
    return RationalFn(A.one(), den);
}

/// Kernel of P_l: prod_{j<k<=l} a_{j,k} a_{k,j} prod_{j<k, k>l} b_{j,k} over the common denominator.
inline RationalFn kernel_Pl_formal(const KernelAlgebra& A, std::size_t l) {
    MultiPoly num = A.one();
    for (std::size_t j = 1; j <= A.n(); ++j)
        for (std::size_t k = j + 1; k <= A.n(); ++k)
            num = num * (k <= l ? A.a(j, k) * A.a(k, j) : A.b(j, k));
    return RationalFn(num, A.common_denominator());
}

}  // namespace detail

/// K_T1 + K_T2 = K_{D^n} as rational functions.
inline IdentityResult verify_kernel_decomposition(int n, Mutation m = Mutation::None) {
    require(n >= 2 && n <= 5, "verify_kernel_decomposition: 2 <= n <= 5");
    detail::KernelAlgebra A{std::size_t(n)};
    const RationalFn lhs =
        detail::kernel_T1_formal(A) + detail::kernel_T2_formal(A, m == Mutation::FlipSign);
    const RationalFn rhs = detail::kernel_polydisc_formal(A, m == Mutation::BumpExponent);
    return detail::compare_sides("kernel_decomposition", n, m, A.nvars(), lhs, rhs);
}

/// The same decomposition with the T1 denominator read as prod_{j<=k}(1 - z_k wb_j)^2.
/// Expected to fail: it is the negative control for the denominator reading.
inline IdentityResult verify_kernel_decomposition_repeated_factor(int n) {
    detail::KernelAlgebra A{std::size_t(n)};
    const RationalFn lhs = detail::kernel_T1_formal(A, true) + detail::kernel_T2_formal(A);
    auto r = detail::compare_sides("kernel_decomposition_repeated_factor", n, Mutation::None, A.nvars(), lhs,
                                   detail::kernel_polydisc_formal(A));
    return r;
}

namespace detail {

// prod_{j<k<=N}(x_j - x_k) / prod_l (1 - x_l s)^{N-1}
//   = s^{-N(N-1)/2} sum_perm sgn(perm) / prod_t (1 - x_{perm_t} s)^{N-t}
inline IdentityResult verify_vandermonde_form(const std::string& name, int report_n, std::size_t N,
                                             Mutation m) {
    const auto vars = VariableSet::single_block(N);
    const std::size_t nv = vars.size();
    const MultiPoly one = MultiPoly::constant(nv, 1);
    const MultiPoly s = MultiPoly::variable(nv, N);
    auto x = [&](std::size_t j) { return MultiPoly::variable(nv, j); };
    auto lin = [&](std::size_t j) { return one - x(j) * s; };

    MultiPoly vdm = one;
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = j + 1; k < N; ++k) vdm = vdm * (x(j) - x(k));
    std::vector<RationalFn::Factor> lden;
    if (N >= 2)
        for (std::size_t l = 0; l < N; ++l) lden.push_back({lin(l), unsigned(N - 1)});
    const RationalFn lhs(vdm, lden);

    RationalFn sum{MultiPoly(nv)};
    bool first = true;
    for (const auto& perm : all_permutations(N)) {
        std::vector<RationalFn::Factor> den;
        for (std::size_t t = 1; t <= N; ++t) {
            unsigned e = unsigned(N - t);
            if (first && m == Mutation::BumpExponent && t == 1) ++e;
            if (e > 0) den.push_back({lin(perm(t - 1)), e});
        }
        int sign = perm.sign();
        if (first && m == Mutation::FlipSign) sign = -sign;
        first = false;
        sum = sum + RationalFn(sign > 0 ? one : -one, den);
    }
    const unsigned spow = unsigned(N * (N - 1) / 2);
    const RationalFn rhs = spow > 0 ? sum * RationalFn(one, {{s, spow}}) : sum;
    return compare_sides(name, report_n, m, nv, lhs, rhs);
}

}  // namespace detail

/// Partial-fraction identity in the n-1 variables w_1..w_{n-1}.
inline IdentityResult verify_partial_fraction(int n, Mutation m = Mutation::None) {
    require(n >= 3 && n <= 6, "verify_partial_fraction: 3 <= n <= 6");
    return detail::verify_vandermonde_form("partial_fraction", n, std::size_t(n - 1), m);
}

/// The n-variable version in z_1..z_n.
inline IdentityResult verify_vandermonde_expansion(int n, Mutation m = Mutation::None) {
    require(n >= 2 && n <= 6, "verify_vandermonde_expansion: 2 <= n <= 6");
    return detail::verify_vandermonde_form("vandermonde_expansion", n, std::size_t(n), m);
}

/// Antisymmetrizing the T1 kernel over the wb block gives zero, which is the
/// algebraic reason T1 annihilates anti-symmetric functions.
inline IdentityResult verify_T1_antisymmetrization(int n) {
    require(n >= 2 && n <= 3, "verify_T1_antisymmetrization: n in {2, 3}");
    detail::KernelAlgebra A{std::size_t(n)};
    const auto t0 = std::chrono::steady_clock::now();
    const RationalFn anti = antisymmetrize(detail::kernel_T1_formal(A), Block::wb(A.n()));
    IdentityResult r;
    r.name = "T1_antisymmetrization";
    r.n = n;
    r.prescreen_passed = true;
    r.passed = anti.is_zero();
    r.lhs_terms = anti.numerator_terms();
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// K_{l+1} - K_l antisymmetrizes to zero over the wb block, for every l < n.
inline IdentityResult verify_Pl_chain(int n) {
    require(n >= 2 && n <= 3, "verify_Pl_chain: n in {2, 3}");
    detail::KernelAlgebra A{std::size_t(n)};
    const auto t0 = std::chrono::steady_clock::now();
    IdentityResult r;
    r.name = "Pl_chain";
    r.n = n;
    r.prescreen_passed = true;
    r.passed = true;
    for (std::size_t l = 1; l < A.n() && r.passed; ++l) {
        const RationalFn diff = detail::kernel_Pl_formal(A, l + 1) - detail::kernel_Pl_formal(A, l);
        r.passed = antisymmetrize(diff, Block::wb(A.n())).is_zero();
        r.lhs_terms = std::max(r.lhs_terms, diff.numerator_terms());
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace bergman
