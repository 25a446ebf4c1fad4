#pragma once

// Closed-form kernels on the disc, the polydisc and the symmetrized polydisc,
// the T1/T2/T~/P_l splitting of the polydisc kernel, the test functions h_s,
// and the q-polynomial / D-operator machinery used to evaluate T~(h_s).
//
// Kernels take z and wbar as independent inputs; wbar is the conjugated
// second argument.

#include <cmath>
#include <span>
#include <vector>

#include "common.hpp"
#include "jet.hpp"
#include "multipoly.hpp"
#include "permutation.hpp"
#include "symmetrization.hpp"

namespace bergman {

inline constexpr double kPoleThreshold = 1e-14;

namespace detail {

inline Complex guard_pole(Complex f) {
    if (std::abs(f) < kPoleThreshold) throw PoleProximity("kernel factor 1 - z*wbar too close to zero");
    return f;
}

// The pieces every T-family kernel shares, computed once per (z, wbar).
struct KernelParts {
    Complex denominator;  // pi^n prod_{j<=k} (1 - z_k wb_j)(1 - z_j wb_k)
    Complex diag_sq;      // prod_j (1 - z_j wb_j)^2
    Complex offdiag;      // prod_{j<k} (1 - z_k wb_j)(1 - z_j wb_k)
    Complex vdm_z;        // prod_{j<k} (z_j - z_k)
    Complex vdm_wb;       // prod_{j<k} (wb_j - wb_k)
};

inline KernelParts kernel_parts(std::span<const Complex> z, std::span<const Complex> wb) {
    require(z.size() == wb.size() && !z.empty(), "kernel: dimension mismatch");
    const std::size_t n = z.size();
    KernelParts k{1.0, 1.0, 1.0, 1.0, 1.0};
    for (std::size_t j = 0; j < n; ++j) {
        const Complex a = guard_pole(1.0 - z[j] * wb[j]);
        k.diag_sq *= a * a;
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = j + 1; l < n; ++l) {
            k.offdiag *= guard_pole(1.0 - z[l] * wb[j]) * guard_pole(1.0 - z[j] * wb[l]);
            k.vdm_z *= z[j] - z[l];
            k.vdm_wb *= wb[j] - wb[l];
        }
    k.denominator = std::pow(kPi, double(n)) * k.diag_sq * k.offdiag;
    return k;
}

}  // namespace detail

/// 1/(pi (1 - z wbar)^2)
inline Complex bergman_disc(Complex z, Complex wbar) {
    const Complex a = detail::guard_pole(1.0 - z * wbar);
    return 1.0 / (kPi * a * a);
}

inline Complex bergman_polydisc(std::span<const Complex> z, std::span<const Complex> wbar) {
    require(z.size() == wbar.size(), "bergman_polydisc: dimension mismatch");
    Complex k{1.0, 0.0};
    for (std::size_t j = 0; j < z.size(); ++j) k *= bergman_disc(z[j], wbar[j]);
    return k;
}

inline Complex kernel_T1(std::span<const Complex> z, std::span<const Complex> wbar) {
    const auto k = detail::kernel_parts(z, wbar);
    return (k.offdiag - k.vdm_z * k.vdm_wb) / k.denominator;
}

inline Complex kernel_T2(std::span<const Complex> z, std::span<const Complex> wbar) {
    const auto k = detail::kernel_parts(z, wbar);
    return k.vdm_z * k.vdm_wb / k.denominator;
}

inline Complex kernel_tildeT(std::span<const Complex> z, std::span<const Complex> wbar) {
    const auto k = detail::kernel_parts(z, wbar);
    return k.vdm_wb * k.vdm_wb / k.denominator;
}

/// Kernel of P_l (1 <= l <= n): a-pairs for k <= l, b-pairs for k > l.
inline Complex kernel_Pl(std::size_t l, std::span<const Complex> z, std::span<const Complex> wbar) {
    const std::size_t n = z.size();
    require(l >= 1 && l <= n, "kernel_Pl: 1 <= l <= n");
    const auto k = detail::kernel_parts(z, wbar);
    Complex num{1.0, 0.0};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = j + 1; m < n; ++m) {
            // 0-based m < l is the 1-based condition k <= l
            if (m < l) num *= (1.0 - z[j] * wbar[m]) * (1.0 - z[m] * wbar[j]);
            else num *= (z[j] - z[m]) * (wbar[j] - wbar[m]);
        }
    return num / k.denominator;
}

/// K_{G^n}(p, conj q) through the local inverses of Phi_n.
inline Complex bergman_symmetrized(const SymmetrizedPoint& p, const SymmetrizedPoint& q) {
    require(p.dim() == q.dim() && p.dim() >= 2, "bergman_symmetrized: n >= 2");
    // |J| < 1e-12, decided on the discriminant J^2 of the coefficients
    if (std::abs(discriminant(p)) < 1e-24) throw BranchLocus("bergman_symmetrized: p on the branch locus");
    if (std::abs(discriminant(q)) < 1e-24) throw BranchLocus("bergman_symmetrized: q on the branch locus");
    const auto z = local_inverse_roots(p);
    const Complex jz = jacobian_phi(z);
    const auto w = local_inverse_roots(q);

    Complex sum{0.0, 0.0};
    std::vector<Complex> wbar(w.size());
    for (const auto& tau : all_permutations(w.size())) {
        const auto tw = tau.apply(std::span<const Complex>(w));
        for (std::size_t i = 0; i < tw.size(); ++i) wbar[i] = std::conj(tw[i]);
        // J phi_j(q) = 1 / J Phi_n(phi_j(q))
        const Complex jphi = 1.0 / jacobian_phi(tw);
        sum += bergman_polydisc(z, wbar) * std::conj(jphi);
    }
    return sum / jz;
}

enum class KernelFamily { BergmanDisc, BergmanPolydisc, T1, T2, TildeT, Pl, BergmanSymmetrized };

struct KernelSpec {
    KernelFamily family = KernelFamily::BergmanPolydisc;
    std::size_t n = 1;
    std::size_t l = 1;  // only for Pl

    static KernelSpec bergman_disc() { return {KernelFamily::BergmanDisc, 1, 1}; }
    static KernelSpec polydisc(std::size_t n) { return {KernelFamily::BergmanPolydisc, n, 1}; }
    static KernelSpec T1(std::size_t n) { return {KernelFamily::T1, n, 1}; }
    static KernelSpec T2(std::size_t n) { return {KernelFamily::T2, n, 1}; }
    static KernelSpec tildeT(std::size_t n) { return {KernelFamily::TildeT, n, 1}; }
    static KernelSpec Pl(std::size_t n, std::size_t l) { return {KernelFamily::Pl, n, l}; }
    static KernelSpec symmetrized(std::size_t n) { return {KernelFamily::BergmanSymmetrized, n, 1}; }

    /// Kernel value at (z, wbar). The symmetrized family is evaluated at
    /// (Phi_n(z), conj Phi_n(w)), i.e. on preimages in D^n.
    Complex evaluate(std::span<const Complex> z, std::span<const Complex> wbar) const {
        require(z.size() == n && wbar.size() == n, "KernelSpec: dimension mismatch");
        switch (family) {
            case KernelFamily::BergmanDisc: return ::bergman::bergman_disc(z[0], wbar[0]);
            case KernelFamily::BergmanPolydisc: return ::bergman::bergman_polydisc(z, wbar);
            case KernelFamily::T1: return kernel_T1(z, wbar);
            case KernelFamily::T2: return kernel_T2(z, wbar);
            case KernelFamily::TildeT: return kernel_tildeT(z, wbar);
            case KernelFamily::Pl: return kernel_Pl(l, z, wbar);
            case KernelFamily::BergmanSymmetrized: {
                std::vector<Complex> w(n);
                for (std::size_t i = 0; i < n; ++i) w[i] = std::conj(wbar[i]);
                return bergman_symmetrized(elementary_symmetric(z), elementary_symmetric(w));
            }
        }
        return 0.0;
    }
};

/// h_s(w) = sum_tau prod_{j<n} (1 - (tau w)_j s)^{-n}, literally as a sum over S_n.
inline Complex test_function_hs(std::size_t n, double s, std::span<const Complex> w) {
    require(n >= 2 && w.size() == n, "test_function_hs: dimension");
    require(s > 0.0 && s < 1.0, "test_function_hs: 0 < s < 1");
    Complex sum{0.0, 0.0};
    for (const auto& tau : all_permutations(n)) {
        Complex term{1.0, 0.0};
        for (std::size_t j = 0; j + 1 < n; ++j) term *= std::pow(1.0 - w[tau(j)] * s, -double(n));
        sum += term;
    }
    return sum;
}

/// The same value from g_k = (1 - w_k s)^{-n}: (n-1)! e_{n-1}(g).
inline Complex test_function_hs_fast(std::size_t n, double s, std::span<const Complex> w) {
    std::vector<Complex> g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = std::pow(1.0 - w[k] * s, -double(n));
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        Complex prod{1.0, 0.0};
        for (std::size_t k = 0; k < n; ++k)
            if (k != i) prod *= g[k];
        sum += prod;
    }
    return double(factorial(n - 1)) * sum;
}

/// s^2/(pi (1 - z1 s)^2 (1 - z2 s)) + s^2/(pi (1 - z2 s)^2 (1 - z1 s))
inline Complex tildeT2_closed_form(double s, std::span<const Complex> z) {
    require(z.size() == 2, "tildeT2_closed_form: n = 2");
    const Complex a1 = 1.0 - z[0] * s, a2 = 1.0 - z[1] * s;
    return s * s / (kPi * a1 * a1 * a2) + s * s / (kPi * a2 * a2 * a1);
}

/// Polynomial in one variable with exact rational coefficients (monomial basis).
struct QPolynomial {
    std::vector<Rational> coefficients;  // coefficients[i] multiplies x^i

    int degree() const { return int(coefficients.size()) - 1; }

    Rational operator()(const Rational& x) const {
        Rational v = 0;
        for (std::size_t i = coefficients.size(); i-- > 0;) v = v * x + coefficients[i];
        return v;
    }

    double value(double x) const {
        double v = 0.0;
        for (std::size_t i = coefficients.size(); i-- > 0;) v = v * x + coefficients[i].get_d();
        return v;
    }
};

namespace detail {

inline Rational binomial(long n, long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(r);
}

// Lagrange interpolation through (x_i, y_i) in the monomial basis.
inline std::vector<Rational> interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    const std::size_t m = xs.size();
    std::vector<Rational> out(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Rational> basis{Rational(1)};
        Rational denom = 1;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            std::vector<Rational> next(basis.size() + 1, Rational(0));
            for (std::size_t k = 0; k < basis.size(); ++k) {
                next[k + 1] += basis[k];
                next[k] -= basis[k] * xs[j];
            }
            basis = std::move(next);
            denom *= xs[i] - xs[j];
        }
        for (std::size_t k = 0; k < m; ++k) out[k] += ys[i] * basis[k] / denom;
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

}  // namespace detail

/// The degree k-2 polynomial with q(m+1)(m+1) = binom(m+k-1, k-1) for m >= 0.
inline QPolynomial q_polynomial(int k) {
    require(k >= 2, "q_polynomial: k >= 2");
    auto target = [k](long m) -> Rational { return detail::binomial(m + k - 1, k - 1) / Rational(m + 1); };
    std::vector<Rational> xs, ys;
    for (long m = 0; m <= k - 2; ++m) {
        xs.push_back(Rational(m + 1));
        ys.push_back(target(m));
    }
    QPolynomial q{detail::interpolate(xs, ys)};
    for (long m = k - 1; m <= k + 4; ++m)
        if (q(Rational(m + 1)) != target(m))
            throw InterpolationInconsistent("q_polynomial: interpolant misses a verification point");
    return q;
}

/// Multiply the m-th series coefficient by q(m+1).
template <class T>
std::vector<T> apply_D_operator(const std::vector<T>& coeffs, const QPolynomial& q) {
    std::vector<T> out(coeffs.size());
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        if constexpr (std::is_same_v<T, Rational>) out[m] = coeffs[m] * q(Rational(long(m) + 1));
        else out[m] = coeffs[m] * q.value(double(m) + 1.0);
    }
    return out;
}

/// d_l with q(m+1) = sum_l d_l m(m-1)...(m-l+1), so that q(D) = sum_l d_l w^l d^l/dw^l.
inline std::vector<Rational> falling_factorial_coefficients(const QPolynomial& q) {
    const int deg = std::max(0, q.degree());
    std::vector<Rational> diff;
    for (int m = 0; m <= deg; ++m) diff.push_back(q(Rational(m + 1)));
    std::vector<Rational> d;
    Rational lfact = 1;
    for (int l = 0; l <= deg; ++l) {
        if (l > 0) lfact *= l;
        d.push_back(diff[0] / lfact);
        for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
        if (!diff.empty()) diff.pop_back();
    }
    return d;
}

/// T~^n(h_s)(z) by the reproducing property: every factor (1 - w s)^{-n} of h_s is
/// q_{n-2}(D) applied to pi K_D(w, s), which moves onto the kernel as
/// sum_l d_l wb^l d^l at wb = s; the unused coordinate integrates to wb = 0.
inline Complex tildeT_hs_reduced(std::size_t n, double s, std::span<const Complex> z) {
    require(n >= 2 && z.size() == n, "tildeT_hs_reduced: dimension");
    require(s > 0.0 && s < 1.0, "tildeT_hs_reduced: 0 < s < 1");
    const auto d = falling_factorial_coefficients(q_polynomial(int(n)));
    const std::size_t nv = n - 1;
    const unsigned deg = unsigned(n - 2);

    Complex total{0.0, 0.0};
    for (std::size_t zero_at = 0; zero_at < n; ++zero_at) {
        std::vector<Jet> wb;
        std::size_t var = 0;
        for (std::size_t k = 0; k < n; ++k)
            wb.push_back(k == zero_at ? Jet::constant(nv, deg, 0.0) : Jet::variable(nv, deg, var++, s));

        Jet num = Jet::constant(nv, deg, 1.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const Jet diff = wb[j] - wb[k];
                num = num * diff * diff;
            }
        Jet den = Jet::constant(nv, deg, 1.0);
        const Jet one = Jet::constant(nv, deg, 1.0);
        for (std::size_t j = 0; j < n; ++j) den = den * (one - wb[j] * z[j]);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) den = den * (one - wb[k] * z[j]);
        const Jet F = num * den.reciprocal();

        // sum over l in {0..n-2}^{n-1} of prod_t d_{l_t} s^{l_t} l_t! [x^l]F
        std::vector<unsigned> l(nv, 0);
        Complex acc{0.0, 0.0};
        while (true) {
            double w = 1.0;
            for (std::size_t t = 0; t < nv; ++t) {
                double lf = 1.0;
                for (unsigned i = 2; i <= l[t]; ++i) lf *= i;
                w *= d[l[t]].get_d() * std::pow(s, double(l[t])) * lf;
            }
            acc += w * F.coefficient(l);
            std::size_t t = 0;
            while (t < nv && l[t] == deg) l[t++] = 0;
            if (t == nv) break;
            ++l[t];
        }
        total += acc;
    }
    return double(factorial(n - 1)) * total;
}

/// sum_tau s^{n(n-1)} / (prod_{m<n} (1 - (tau z)_m s) prod_l (1 - z_l s)^{n-1}), as a sum over S_n.
inline Complex tildeT_hs_shape(std::size_t n, double s, std::span<const Complex> z) {
    require(n >= 2 && z.size() == n, "tildeT_hs_shape: dimension");
    Complex common{1.0, 0.0};
    for (std::size_t l = 0; l < n; ++l) common *= std::pow(1.0 - z[l] * s, double(n - 1));
    Complex sum{0.0, 0.0};
    for (const auto& tau : all_permutations(n)) {
        Complex prod{1.0, 0.0};
        for (std::size_t m = 0; m + 1 < n; ++m) prod *= 1.0 - z[tau(m)] * s;
        sum += 1.0 / prod;
    }
    return std::pow(s, double(n * (n - 1))) * sum / common;
}

/// The same shape from e_k = 1/(1 - z_k s) without enumerating S_n.
inline Complex tildeT_hs_shape_fast(std::size_t n, double s, std::span<const Complex> z) {
    std::vector<Complex> e(n);
    Complex common{1.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        e[k] = 1.0 / (1.0 - z[k] * s);
        common *= std::pow(e[k], double(n - 1));
    }
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        Complex prod{1.0, 0.0};
        for (std::size_t k = 0; k < n; ++k)
            if (k != i) prod *= e[k];
        sum += prod;
    }
    return std::pow(s, double(n * (n - 1))) * double(factorial(n - 1)) * sum * common;
}

struct ShapeFit {
    Complex constant;      // c with T~(h_s) = c * shape
    double max_rel_residual;
};

/// Least-squares c over the sample points, with the worst relative misfit.
inline ShapeFit fit_tildeT_constant(std::size_t n, double s, const std::vector<std::vector<Complex>>& points) {
    require(!points.empty(), "fit_tildeT_constant: no points");
    Complex num{0.0, 0.0};
    double den = 0.0;
    std::vector<std::pair<Complex, Complex>> pairs;
    for (const auto& z : points) {
        const Complex t = tildeT_hs_reduced(n, s, z), sh = tildeT_hs_shape(n, s, z);
        pairs.push_back({t, sh});
        num += std::conj(sh) * t;
        den += std::norm(sh);
    }
    ShapeFit fit{num / den, 0.0};
    for (const auto& [t, sh] : pairs)
        fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(t - fit.constant * sh) / std::abs(t));
    return fit;
}

}  // namespace bergman
