#pragma once

// The symmetrization map Phi_n(w) = (p_1(w), ..., p_n(w)), its complex
// Jacobian, and pointwise inversion through the roots of the associated
// monic polynomial.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "common.hpp"
#include "permutation.hpp"

namespace bergman {

/// Elementary symmetric polynomials p_1..p_n of the coordinates.
inline SymmetrizedPoint elementary_symmetric(std::span<const Complex> w) {
    require(!w.empty(), "elementary_symmetric: n >= 1");
    const std::size_t n = w.size();
    // e[j] accumulates p_j over the coordinates consumed so far; e[0] = 1.
    std::vector<Complex> e(n + 1, Complex{0.0, 0.0});
    e[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j >= 1; --j) e[j] += w[i] * e[j - 1];
    return SymmetrizedPoint(std::vector<Complex>(e.begin() + 1, e.end()));
}

inline SymmetrizedPoint elementary_symmetric(const PolyDiscPoint& w) {
    return elementary_symmetric(std::span<const Complex>(w.coords));
}

/// J_C Phi_n(w) = prod_{j<k} (w_j - w_k).
inline Complex jacobian_phi(std::span<const Complex> w) {
    require(w.size() >= 2, "jacobian_phi: n >= 2");
    Complex j{1.0, 0.0};
    for (std::size_t a = 0; a < w.size(); ++a)
        for (std::size_t b = a + 1; b < w.size(); ++b) j *= (w[a] - w[b]);
    return j;
}

inline Complex jacobian_phi(const PolyDiscPoint& w) {
    return jacobian_phi(std::span<const Complex>(w.coords));
}

namespace detail {

// Coefficients c_0..c_n (c_n = 1) of t^n - p_1 t^{n-1} + ... + (-1)^n p_n.
inline std::vector<Complex> monic_coefficients(const SymmetrizedPoint& p) {
    const std::size_t n = p.dim();
    std::vector<Complex> c(n + 1);
    c[n] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) c[n - j] = (j % 2 == 0 ? 1.0 : -1.0) * p[j - 1];
    return c;
}

inline void horner(std::span<const Complex> c, Complex t, Complex& value, Complex& deriv) {
    value = c.back();
    deriv = 0.0;
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        deriv = deriv * t + value;
        value = value * t + c[i];
    }
}

inline double arg_canonical(Complex z) {
    double a = std::arg(z);
    if (a <= -kPi + 1e-12) a = kPi;
    return a;
}

}  // namespace detail

/// Sort by argument, ties (within 1e-12) broken by modulus.
inline void canonical_sort(std::vector<Complex>& roots) {
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        const double da = detail::arg_canonical(a), db = detail::arg_canonical(b);
        if (std::abs(da - db) > 1e-12) return da < db;
        return std::abs(a) < std::abs(b);
    });
}

/// Roots of the monic polynomial whose elementary symmetric functions are p,
/// via Aberth-Ehrlich iteration and a final Newton polish. Repeated roots are
/// returned with multiplicity.
inline std::vector<Complex> local_inverse_roots(const SymmetrizedPoint& p, double tol = 1e-12,
                                                int max_iterations = 500) {
    const std::size_t n = p.dim();
    require(n >= 1, "local_inverse_roots: n >= 1");
    for (const auto& c : p.coords)
        require(std::isfinite(c.real()) && std::isfinite(c.imag()), "local_inverse_roots: p finite");

    const auto c = detail::monic_coefficients(p);

    // Fujiwara bound on root moduli.
    double bound = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double mag = std::abs(c[n - k]);
        if (mag > 0.0) bound = std::max(bound, std::pow(mag, 1.0 / double(k)));
    }
    std::vector<Complex> z(n, Complex{0.0, 0.0});
    if (bound == 0.0) return z;  // t^n

    const double radius = bound;
    for (std::size_t k = 0; k < n; ++k)
        z[k] = std::polar(radius, 2.0 * kPi * double(k) / double(n) + 0.4);

    bool converged = false;
    for (int it = 0; it < max_iterations && !converged; ++it) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex v, d;
            detail::horner(c, z[i], v, d);
            if (v == Complex{0.0, 0.0}) continue;
            const Complex ratio = v / d;
            Complex repulsion{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && z[i] != z[j]) repulsion += 1.0 / (z[i] - z[j]);
            const Complex step = ratio / (1.0 - ratio * repulsion);
            if (std::isfinite(step.real()) && std::isfinite(step.imag())) {
                z[i] -= step;
                max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[i])));
            }
        }
        converged = max_step < 1e-15;
        if (!converged) {
            bool small = true;
            for (std::size_t i = 0; i < n && small; ++i) {
                Complex v, d;
                detail::horner(c, z[i], v, d);
                small = std::abs(v) < tol * 1e-3;
            }
            converged = small && it > 2;
        }
    }

    for (auto& r : z) {
        Complex v, d;
        detail::horner(c, r, v, d);
        if (std::abs(d) > 1e-300) {
            const Complex candidate = r - v / d;
            Complex vc, dc;
            detail::horner(c, candidate, vc, dc);
            if (std::abs(vc) <= std::abs(v)) r = candidate;
        }
    }

    for (const auto& r : z) {
        Complex v, d;
        detail::horner(c, r, v, d);
        if (!(std::abs(v) < tol)) throw NonConvergence("local_inverse_roots: residual above tolerance");
    }
    canonical_sort(z);
    return z;
}

/// Discriminant prod_{j<k} (w_j - w_k)^2 of the monic polynomial, from its
/// coefficients: (-1)^{n(n-1)/2} Res(P, P') as a Sylvester determinant.
/// Unlike J Phi_n of computed roots it stays accurate near repeated roots.
inline Complex discriminant(const SymmetrizedPoint& p) {
    const std::size_t n = p.dim();
    if (n < 2) return 1.0;
    const auto c = detail::monic_coefficients(p);
    std::vector<Complex> dc(n);
    for (std::size_t i = 1; i <= n; ++i) dc[i - 1] = double(i) * c[i];
    // rows 0..n-2: shifts of P; rows n-1..2n-2: shifts of P'; highest degree first
    const std::size_t N = 2 * n - 1;
    std::vector<Complex> m(N * N, Complex{0.0, 0.0});
    for (std::size_t r = 0; r + 1 < n; ++r)
        for (std::size_t i = 0; i <= n; ++i) m[r * N + r + i] = c[n - i];
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < n; ++i) m[(n - 1 + r) * N + r + i] = dc[n - 1 - i];
    Complex det{1.0, 0.0};
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(m[r * N + col]) > std::abs(m[piv * N + col])) piv = r;
        if (m[piv * N + col] == Complex{0.0, 0.0}) return 0.0;
        if (piv != col) {
            for (std::size_t k = 0; k < N; ++k) std::swap(m[piv * N + k], m[col * N + k]);
            det = -det;
        }
        det *= m[col * N + col];
        for (std::size_t r = col + 1; r < N; ++r) {
            const Complex f = m[r * N + col] / m[col * N + col];
            for (std::size_t k = col; k < N; ++k) m[r * N + k] -= f * m[col * N + k];
        }
    }
    return ((n * (n - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * det;
}

/// The n! local inverses phi_j(p): every ordering of the root multiset.
inline std::vector<PolyDiscPoint> local_inverses(const SymmetrizedPoint& p, double tol = 1e-12) {
    const auto roots = local_inverse_roots(p, tol);
    std::vector<PolyDiscPoint> out;
    for (const auto& perm : all_permutations(roots.size()))
        out.emplace_back(perm.apply(std::span<const Complex>(roots)));
    return out;
}

/// Conservative interior test for G^n: every root strictly inside radius 1 - tol.
inline bool in_symmetrized_polydisc(const SymmetrizedPoint& p, double tol = 1e-12) {
    for (const auto& r : local_inverse_roots(p, tol))
        if (!(std::abs(r) < 1.0 - tol)) return false;
    return true;
}

}  // namespace bergman
