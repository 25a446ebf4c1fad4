#pragma once

// Cubature on the unit disc and its tensor powers, weighted L^p norms, integral
// operators, and a Monte Carlo cross-check.
//
// Tensor sums are split into blocks by the outermost node index. Each block is
// summed sequentially with Neumaier compensation and block sums are combined
// by a fixed pairwise tree, so results do not depend on the thread count.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

#include "common.hpp"
#include "kernels.hpp"

namespace bergman {

struct GaussRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
inline GaussRule1D gauss_legendre(int order) {
    require(order >= 1, "gauss_legendre: order >= 1");
    GaussRule1D r;
    r.nodes.resize(order);
    r.weights.resize(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

/// Gauss-Legendre mapped to [a, b].
inline GaussRule1D gauss_legendre(int order, double a, double b) {
    auto r = gauss_legendre(order);
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        r.nodes[i] = c + h * r.nodes[i];
        r.weights[i] *= h;
    }
    return r;
}

enum class RuleKind { Polar, BoundaryGraded };

struct RuleDescriptor {
    RuleKind kind = RuleKind::Polar;
    int radial_order = 8;    // Polar: GL points in r^2. Graded: GL points per radial panel.
    int angular_order = 16;  // Polar: uniform angles. Graded: GL points across each ray fan.
    double cluster = 1.0;    // Polar only: u = 1 - (1 - t)^cluster
    double scale = 0.1;      // Graded only: distance scale of the singularity, e.g. (1 - s)/s
    double ratio = 0.25;     // Graded only: geometric ratio between radial panels
    Complex direction{1.0, 0.0};  // Graded only: boundary point the rule is refined toward

    RuleDescriptor refined() const {
        RuleDescriptor d = *this;
        d.radial_order *= 2;
        d.angular_order *= 2;
        return d;
    }
};

struct QuadratureRule {
    std::vector<Complex> nodes;
    std::vector<double> weights;
    RuleDescriptor descriptor;

    std::size_t size() const noexcept { return nodes.size(); }
    double total_weight() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

/// Polar tensor rule: GL in u = r^2 (optionally clustered toward u = 1) times a uniform angular grid.
inline QuadratureRule disc_rule(int radial_order, int angular_order, double cluster = 1.0) {
    require(radial_order >= 1 && angular_order >= 1, "disc_rule: orders >= 1");
    require(cluster >= 1.0, "disc_rule: cluster >= 1");
    QuadratureRule rule;
    rule.descriptor = RuleDescriptor{RuleKind::Polar, radial_order, angular_order, cluster};
    const auto gl = gauss_legendre(radial_order, 0.0, 1.0);
    const double dtheta = 2.0 * kPi / angular_order;
    for (int i = 0; i < radial_order; ++i) {
        const double t = gl.nodes[i];
        const double u = 1.0 - std::pow(1.0 - t, cluster);
        const double du = cluster * std::pow(1.0 - t, cluster - 1.0) * gl.weights[i];
        const double r = std::sqrt(u);
        for (int k = 0; k < angular_order; ++k) {
            rule.nodes.push_back(std::polar(r, dtheta * k));
            rule.weights.push_back(0.5 * du * dtheta);  // dA = (1/2) du dtheta
        }
    }
    return rule;
}

/// Rule refined toward the boundary point `direction`, for integrands with a
/// near-singularity at distance ~scale outside the disc there (w = 1/s with
/// scale (1 - s)/s). Points are written w = direction (1 - rho e^{i psi}) with
/// rho = 2 cos(beta), |psi| < beta; gamma = pi/2 - beta carries geometric panels
/// down to 0.1 scale, and psi uses two GL panels.
inline QuadratureRule boundary_graded_rule(double scale, int panel_order, int angular_order, double ratio = 0.25,
                                           Complex direction = 1.0) {
    require(scale > 0.0, "boundary_graded_rule: scale > 0");
    require(panel_order >= 1 && angular_order >= 2, "boundary_graded_rule: orders");
    require(ratio > 0.0 && ratio < 1.0, "boundary_graded_rule: 0 < ratio < 1");
    QuadratureRule rule;
    rule.descriptor = RuleDescriptor{RuleKind::BoundaryGraded, panel_order, angular_order, 1.0, scale, ratio,
                                     direction / std::abs(direction)};
    const Complex dir = rule.descriptor.direction;

    std::vector<double> edges{kPi / 2};
    const double floor = 0.1 * std::min(scale, 1.0);
    while (edges.back() > floor) edges.push_back(edges.back() * ratio);
    edges.push_back(0.0);

    const int half = std::max(1, angular_order / 2);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const auto g = gauss_legendre(panel_order, edges[p + 1], edges[p]);
        for (int i = 0; i < panel_order; ++i) {
            const double beta = kPi / 2 - g.nodes[i];
            const double rho = 2.0 * std::cos(beta);
            const double jac = 4.0 * std::cos(beta) * std::sin(beta) * g.weights[i];
            for (int side = 0; side < 2; ++side) {
                const auto a = side == 0 ? gauss_legendre(half, -beta, 0.0) : gauss_legendre(half, 0.0, beta);
                for (int k = 0; k < half; ++k) {
                    rule.nodes.push_back(dir * (1.0 - std::polar(rho, a.nodes[k])));
                    rule.weights.push_back(jac * a.weights[k]);
                }
            }
        }
    }
    return rule;
}

inline QuadratureRule make_rule(const RuleDescriptor& d) {
    if (d.kind == RuleKind::Polar) return disc_rule(d.radial_order, d.angular_order, d.cluster);
    return boundary_graded_rule(d.scale, d.radial_order, d.angular_order, d.ratio, d.direction);
}

inline QuadratureRule refined(const QuadratureRule& r) { return make_rule(r.descriptor.refined()); }

namespace detail {

template <class T>
struct CompensatedSum {
    T sum{};
    T c{};
    void add(T x) {
        if constexpr (std::is_same_v<T, Complex>) {
            double sr = sum.real(), cr = c.real(), si = sum.imag(), ci = c.imag();
            add_real(sr, cr, x.real());
            add_real(si, ci, x.imag());
            sum = {sr, si};
            c = {cr, ci};
        } else {
            double s = sum, cc = c;
            add_real(s, cc, x);
            sum = s;
            c = cc;
        }
    }
    T value() const { return sum + c; }

private:
    static void add_real(double& s, double& comp, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x)) comp += (s - t) + x;
        else comp += (x - t) + s;
        s = t;
    }
};

template <class T>
T pairwise(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() == 1) return v[0];
    const std::size_t mid = v.size() / 2;
    return pairwise(v.subspan(0, mid)) + pairwise(v.subspan(mid));
}

inline void check_finite(Complex v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw IntegrationOverflow("integrand not finite at a node");
}
inline void check_finite(double v) {
    if (!std::isfinite(v)) throw IntegrationOverflow("integrand not finite at a node");
}

}  // namespace detail

/// Sum over index tuples (i_0, ..., i_{n-1}) in [0, K)^n of term(idx), or only
/// over non-decreasing tuples when `sorted_only`. Blocks are indexed by i_0.
template <class T, class Term>
T tensor_reduce(std::size_t K, std::size_t n, bool sorted_only, Term&& term) {
    require(n >= 1 && K >= 1, "tensor_reduce: sizes");
    std::vector<T> block(K, T{});
    auto run_block = [&](std::size_t i0) {
        detail::CompensatedSum<T> acc;
        std::vector<std::size_t> idx(n, i0);
        if (!sorted_only)
            for (std::size_t d = 1; d < n; ++d) idx[d] = 0;
        while (true) {
            const T v = term(std::span<const std::size_t>(idx));
            detail::check_finite(v);
            acc.add(v);
            std::size_t d = n - 1;
            while (d >= 1) {
                if (++idx[d] < K) break;
                --d;
            }
            if (d == 0) break;
            for (std::size_t e = d + 1; e < n; ++e) idx[e] = sorted_only ? idx[d] : 0;
        }
        block[i0] = acc.value();
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t threads = std::min<std::size_t>(hw, K);
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < K; ++i) run_block(i);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mutex;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < K; i += threads) run_block(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!err) err = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }
    return detail::pairwise<T>(block);
}

/// Multiplicity n!/prod(c_i!) of a non-decreasing index tuple.
inline double sorted_multiplicity(std::span<const std::size_t> idx) {
    double m = double(factorial(idx.size()));
    std::size_t run = 1;
    for (std::size_t i = 1; i <= idx.size(); ++i) {
        if (i < idx.size() && idx[i] == idx[i - 1]) {
            ++run;
        } else {
            m /= double(factorial(run));
            run = 1;
        }
    }
    return m;
}

/// Tensor-product cubature of f over D^n. f takes the point as a span.
template <class F>
auto integrate_polydisc(F&& f, const QuadratureRule& rule, std::size_t n) {
    using T = std::decay_t<decltype(f(std::span<const Complex>{}))>;
    return tensor_reduce<T>(rule.size(), n, false, [&](std::span<const std::size_t> idx) {
        thread_local std::vector<Complex> w;
        w.resize(idx.size());
        double weight = 1.0;
        for (std::size_t d = 0; d < idx.size(); ++d) {
            w[d] = rule.nodes[idx[d]];
            weight *= rule.weights[idx[d]];
        }
        return T(f(std::span<const Complex>(w)) * weight);
    });
}

/// Same value for permutation-symmetric f, visiting only sorted index tuples.
template <class F>
auto integrate_polydisc_symmetric(F&& f, const QuadratureRule& rule, std::size_t n) {
    using T = std::decay_t<decltype(f(std::span<const Complex>{}))>;
    return tensor_reduce<T>(rule.size(), n, true, [&](std::span<const std::size_t> idx) {
        thread_local std::vector<Complex> w;
        w.resize(idx.size());
        double weight = sorted_multiplicity(idx);
        for (std::size_t d = 0; d < idx.size(); ++d) {
            w[d] = rule.nodes[idx[d]];
            weight *= rule.weights[idx[d]];
        }
        return T(f(std::span<const Complex>(w)) * weight);
    });
}

enum class WeightKind { JacobianPower, PointProduct, Constant };

struct WeightSpec {
    WeightKind kind = WeightKind::Constant;
    double exponent = 0.0;             // a for JacobianPower, b for PointProduct
    std::vector<Complex> points;       // PointProduct only
    double constant = 1.0;             // Constant only

    static WeightSpec jacobian_power(double a) { return {WeightKind::JacobianPower, a, {}, 1.0}; }
    static WeightSpec point_product(std::vector<Complex> pts, double b) {
        return {WeightKind::PointProduct, b, std::move(pts), 1.0};
    }
    static WeightSpec constant_weight(double c = 1.0) { return {WeightKind::Constant, 0.0, {}, c}; }

    double evaluate(std::span<const Complex> w) const {
        switch (kind) {
            case WeightKind::Constant: return constant;
            case WeightKind::JacobianPower: {
                double m = 1.0;
                for (std::size_t j = 0; j < w.size(); ++j)
                    for (std::size_t k = j + 1; k < w.size(); ++k) m *= std::abs(w[j] - w[k]);
                return std::pow(m, exponent);
            }
            case WeightKind::PointProduct: {
                require(w.size() == 1, "PointProduct weight lives on the disc");
                double m = 1.0;
                for (const auto& a : points) m *= std::pow(std::abs(a - w[0]), exponent);
                return m;
            }
        }
        return 0.0;
    }
};

/// int |f|^p weight dV
template <class F>
double weighted_lp_integral(F&& f, double p, const WeightSpec& weight, const QuadratureRule& rule, std::size_t n) {
    require(p > 0.0, "weighted_lp_integral: p > 0");
    return integrate_polydisc(
        [&](std::span<const Complex> w) { return std::pow(std::abs(Complex(f(w))), p) * weight.evaluate(w); },
        rule, n);
}

/// (int |f|^p weight dV)^{1/p}
template <class F>
double weighted_lp_norm(F&& f, double p, const WeightSpec& weight, const QuadratureRule& rule, std::size_t n) {
    return std::pow(weighted_lp_integral(std::forward<F>(f), p, weight, rule, n), 1.0 / p);
}

/// int K(z, conj w) f(w) dV(w); with `positive` the kernel is replaced by |K|.
template <class F>
Complex apply_operator(const KernelSpec& kernel, F&& f, std::span<const Complex> z, const QuadratureRule& rule,
                       bool positive = false) {
    require(z.size() == kernel.n, "apply_operator: dimension mismatch");
    return integrate_polydisc(
        [&](std::span<const Complex> w) {
            thread_local std::vector<Complex> wb;
            wb.resize(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) wb[i] = std::conj(w[i]);
            const Complex k = kernel.evaluate(z, wb);
            return Complex(positive ? Complex(std::abs(k)) : k) * Complex(f(w));
        },
        rule, kernel.n);
}

struct MonteCarloEstimate {
    double estimate;
    double standard_error;
};

/// Uniform rejection sampling on D^n, scaled by pi^n. Reproducible for a fixed seed.
template <class F>
MonteCarloEstimate monte_carlo_polydisc(F&& f, std::size_t n, std::size_t samples, std::uint64_t seed) {
    require(samples >= 1 && n >= 1, "monte_carlo_polydisc: sizes");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> w(n);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        for (auto& c : w) {
            do c = Complex(u(rng), u(rng));
            while (std::norm(c) >= 1.0);
        }
        const double v = f(std::span<const Complex>(w));
        const double delta = v - mean;
        mean += delta / double(i + 1);
        m2 += delta * (v - mean);
    }
    const double vol = std::pow(kPi, double(n));
    const double var = samples > 1 ? m2 / double(samples - 1) : 0.0;
    return {vol * mean, vol * std::sqrt(var / double(samples))};
}

}  // namespace bergman
