#include <catch_amalgamated.hpp>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bergman/quadrature.hpp"

using namespace bergman;

namespace {

// Bergman projection on the disc of w^a conj(w)^b, a >= b: (a-b+1)/(a+1) z^{a-b}.
Complex projected_monomial(int a, int b, Complex z) {
    if (a < b) return 0.0;
    return double(a - b + 1) / double(a + 1) * std::pow(z, a - b);
}

}  // namespace

TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
    for (int n : {1, 2, 5, 12, 40}) {
        const auto g = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : g.weights) wsum += w;
        CHECK(std::abs(wsum - 2.0) < 1e-14);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(std::abs(s - exact) < 1e-14);
        }
        CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
    }
}

TEST_CASE("polar disc rule") {
    const auto rule = disc_rule(8, 16);
    CHECK(std::abs(rule.total_weight() - kPi) < 1e-13);
    for (const auto& w : rule.nodes) CHECK(std::abs(w) < 1.0);
    // int |w|^{2k} w^a conj(w)^b = pi/(k+1) when a = b = 0
    for (int k = 0; k < 8; ++k) {
        const double v = integrate_polydisc([k](std::span<const Complex> w) { return std::pow(std::norm(w[0]), k); },
                                            rule, 1);
        CHECK(std::abs(v - kPi / (k + 1)) < 1e-13);
    }
    const Complex z = integrate_polydisc([](std::span<const Complex> w) { return w[0] * w[0] * std::conj(w[0]); },
                                         rule, 1);
    CHECK(std::abs(z) < 1e-14);
}

TEST_CASE("clustered rule handles (1 - |w|^2)^{-1/2} against a 1-d oracle") {
    // int_D (1 - |w|^2)^{-1/2} dA = pi int_0^1 (1 - u)^{-1/2} du, the 1-d integral done adaptively
    boost::math::quadrature::tanh_sinh<double> ts;
    // the two-argument form passes the distance to the nearer endpoint, avoiding cancellation in 1 - u
    const double oracle = kPi * ts.integrate([](double u, double uc) { return 1.0 / std::sqrt(u > 0.5 ? uc : 1.0 - u); },
                                             0.0, 1.0);
    const auto rule = disc_rule(8, 4, 4.0);
    const double v = integrate_polydisc(
        [](std::span<const Complex> w) { return 1.0 / std::sqrt(1.0 - std::norm(w[0])); }, rule, 1);
    CHECK(std::abs(v - oracle) < 1e-8);
    CHECK(std::abs(v - 2.0 * kPi) < 1e-10);
}

TEST_CASE("boundary-graded rule") {
    const auto rule = boundary_graded_rule(0.01, 16, 32);
    CHECK(std::abs(rule.total_weight() - kPi) < 1e-12);
    for (const auto& w : rule.nodes) CHECK(std::abs(w) < 1.0);
    const double m2 = integrate_polydisc([](std::span<const Complex> w) { return std::norm(w[0]); }, rule, 1);
    CHECK(std::abs(m2 - kPi / 2) < 1e-10);
    // int |1 - s w|^{-4} dA = pi sum (k+1) s^{2k} = pi/(1 - s^2)^2
    const double s = 0.99;
    const double v = integrate_polydisc(
        [s](std::span<const Complex> w) { return std::pow(std::abs(1.0 - s * w[0]), -4.0); }, rule, 1);
    CHECK(std::abs(v - kPi / std::pow(1.0 - s * s, 2)) < 1e-12 * v);
    // rotated toward -i
    const auto rot = boundary_graded_rule(0.01, 16, 32, 0.25, Complex(0, -1));
    const double vr = integrate_polydisc([s](std::span<const Complex> w) {
        return std::pow(std::abs(1.0 - s * Complex(0, 1) * w[0]), -4.0);
    }, rot, 1);
    CHECK(std::abs(vr - v) < 1e-10 * v);
}

TEST_CASE("refinement doubles both orders") {
    const auto r = disc_rule(4, 8);
    const auto rr = refined(r);
    CHECK(rr.descriptor.radial_order == 8);
    CHECK(rr.descriptor.angular_order == 16);
    CHECK(rr.size() == 4 * r.size());
    const auto g = refined(boundary_graded_rule(0.1, 4, 8));
    CHECK(g.descriptor.kind == RuleKind::BoundaryGraded);
    CHECK(g.descriptor.radial_order == 8);
}

TEST_CASE("bidisc volumes") {
    const auto rule = disc_rule(6, 12);
    const double one = integrate_polydisc([](std::span<const Complex>) { return 1.0; }, rule, 2);
    CHECK(std::abs(one - kPi * kPi) < 1e-12);
    const double d = integrate_polydisc([](std::span<const Complex> w) { return std::norm(w[0] - w[1]); }, rule, 2);
    CHECK(std::abs(d - kPi * kPi) < 1e-12);
}

TEST_CASE("|J|^2 on the tridisc: cubature, exact value and Monte Carlo") {
    // exact: n! prod_{k<n} pi/(k+1) = pi^3 for n = 3
    const auto rule = disc_rule(4, 8);
    const auto f = [](std::span<const Complex> w) { return std::norm(jacobian_phi(w)); };
    const double q = integrate_polydisc(f, rule, 3);
    CHECK(std::abs(q - std::pow(kPi, 3)) < 1e-11);
    const double qs = integrate_polydisc_symmetric(f, rule, 3);
    CHECK(std::abs(qs - q) < 1e-11);
    const auto mc = monte_carlo_polydisc(f, 3, 2'000'000, 42);
    CHECK(std::abs(mc.estimate - q) < 3.0 * mc.standard_error);
    CHECK(std::abs(mc.estimate - q) < 5e-3 * q);
}

TEST_CASE("Monte Carlo basics") {
    const auto c = monte_carlo_polydisc([](std::span<const Complex>) { return 1.0; }, 2, 1000, 1);
    CHECK(std::abs(c.estimate - kPi * kPi) < 1e-12);
    CHECK(c.standard_error == 0.0);
    const auto a = monte_carlo_polydisc([](std::span<const Complex> w) { return std::norm(w[0]); }, 1, 100000, 3);
    const auto b = monte_carlo_polydisc([](std::span<const Complex> w) { return std::norm(w[0]); }, 1, 100000, 3);
    CHECK(a.estimate == b.estimate);
    CHECK(std::abs(a.estimate - kPi / 2) < 4.0 * a.standard_error);
}

TEST_CASE("tensor sums are deterministic and finite-checked") {
    const auto rule = disc_rule(5, 10);
    const auto f = [](std::span<const Complex> w) { return std::exp(w[0] * std::conj(w[1])) * (1.0 + w[1]); };
    const Complex a = integrate_polydisc(f, rule, 2), b = integrate_polydisc(f, rule, 2);
    CHECK(a == b);
    CHECK_THROWS_AS(integrate_polydisc([](std::span<const Complex>) { return std::nan(""); }, rule, 1),
                    IntegrationOverflow);
    CHECK(sorted_multiplicity(std::vector<std::size_t>{0, 0, 1}) == 3.0);
    CHECK(sorted_multiplicity(std::vector<std::size_t>{0, 1, 2}) == 6.0);
    CHECK(sorted_multiplicity(std::vector<std::size_t>{2, 2, 2}) == 1.0);
}

TEST_CASE("weighted norms") {
    const auto rule = disc_rule(8, 16);
    const auto one = [](std::span<const Complex>) { return Complex(1.0); };
    CHECK(std::abs(weighted_lp_norm(one, 2.0, WeightSpec::constant_weight(), rule, 1) - std::sqrt(kPi)) < 1e-13);
    CHECK(std::abs(weighted_lp_integral(one, 2.0, WeightSpec::jacobian_power(2.0), rule, 2) - kPi * kPi) < 1e-12);
    const auto pw = WeightSpec::point_product({0.0}, 2.0);
    CHECK(std::abs(weighted_lp_integral(one, 1.0, pw, rule, 1) - kPi / 2) < 1e-13);
}

TEST_CASE("reproducing property of the disc kernel") {
    const auto rule = disc_rule(8, 64);
    for (Complex z : {Complex(0.0), Complex(0.3, -0.2), Complex(-0.5, 0.0)}) {
        const std::vector<Complex> zz{z};
        for (int k = 0; k < 5; ++k) {
            const Complex v = apply_operator(KernelSpec::bergman_disc(), [k](std::span<const Complex> w) {
                return std::pow(w[0], k);
            }, zz, rule);
            CHECK(std::abs(v - std::pow(z, k)) < 1e-10);
        }
    }
}

TEST_CASE("disc projection of w^a conj(w)^b and idempotence") {
    const auto rule = disc_rule(10, 64);
    const int a = 2, b = 1;
    const auto f = [&](std::span<const Complex> w) { return std::pow(w[0], a) * std::pow(std::conj(w[0]), b); };
    // sample Pf on |z| = 1/2 and rebuild it as a polynomial by a DFT
    const int M = 16;
    const double r = 0.5;
    std::vector<Complex> samples(M);
    for (int j = 0; j < M; ++j) {
        const std::vector<Complex> zz{std::polar(r, 2.0 * kPi * j / M)};
        samples[j] = apply_operator(KernelSpec::bergman_disc(), f, zz, rule);
        CHECK(std::abs(samples[j] - projected_monomial(a, b, zz[0])) < 1e-10);
    }
    std::vector<Complex> coef(M);
    for (int k = 0; k < M; ++k) {
        Complex c{0.0};
        for (int j = 0; j < M; ++j) c += samples[j] * std::polar(1.0, -2.0 * kPi * j * k / M);
        coef[k] = c / (double(M) * std::pow(r, k));
    }
    const auto pf = [&](std::span<const Complex> w) {
        Complex v{0.0};
        for (int k = M; k-- > 0;) v = v * w[0] + coef[k];
        return v;
    };
    for (Complex z : {Complex(0.1, 0.2), Complex(-0.4, 0.1)}) {
        const std::vector<Complex> zz{z};
        const Complex ppf = apply_operator(KernelSpec::bergman_disc(), pf, zz, rule);
        CHECK(std::abs(ppf - pf(zz)) < 1e-9);
    }
}

TEST_CASE("bidisc projection of a separable function and idempotence") {
    const auto rule = disc_rule(8, 32);
    const auto f = [](std::span<const Complex> w) {
        return w[0] * w[0] * std::conj(w[0]) * (w[1] * w[1] * w[1] * std::conj(w[1]));
    };
    const std::vector<Complex> z{Complex(0.2, 0.1), Complex(-0.3, 0.2)};
    const Complex pf = apply_operator(KernelSpec::polydisc(2), f, z, rule);
    const Complex exact = projected_monomial(2, 1, z[0]) * projected_monomial(3, 1, z[1]);
    CHECK(std::abs(pf - exact) < 1e-10);
    // P of the holomorphic result returns it
    const auto g = [](std::span<const Complex> w) { return (2.0 / 3.0) * w[0] * (2.0 / 4.0) * w[1] * w[1]; };
    CHECK(std::abs(apply_operator(KernelSpec::polydisc(2), g, z, rule) - g(z)) < 1e-10);
}

TEST_CASE("positive operator uses |K|") {
    const auto rule = disc_rule(8, 32);
    const std::vector<Complex> z{0.0};
    const auto one = [](std::span<const Complex>) { return Complex(1.0); };
    // |K(0, w)| = 1/pi, so P+ 1 at 0 is 1
    CHECK(std::abs(apply_operator(KernelSpec::bergman_disc(), one, z, rule, true) - 1.0) < 1e-13);
}
