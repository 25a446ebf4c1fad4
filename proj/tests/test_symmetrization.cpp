#include <catch_amalgamated.hpp>

#include <random>

#include "bergman/symmetrization.hpp"

using namespace bergman;
using Catch::Approx;

namespace {

PolyDiscPoint random_point(std::mt19937_64& rng, std::size_t n, double rmax = 0.95) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PolyDiscPoint w;
    for (std::size_t i = 0; i < n; ++i)
        w.coords.push_back(std::polar(rmax * std::sqrt(u(rng)), 2.0 * kPi * u(rng)));
    return w;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("elementary symmetric polynomials on small inputs") {
    auto p = elementary_symmetric(PolyDiscPoint{1.0, 2.0});
    CHECK(p[0] == Complex(3.0));
    CHECK(p[1] == Complex(2.0));

    auto z = elementary_symmetric(PolyDiscPoint{0.0, 0.0, 0.0});
    for (auto c : z.coords) CHECK(c == Complex(0.0));

    const Complex a{0.3, 0.1};
    auto r = elementary_symmetric(PolyDiscPoint{a, a});
    CHECK(std::abs(r[0] - 2.0 * a) < 1e-15);
    CHECK(std::abs(r[1] - a * a) < 1e-15);
}

TEST_CASE("jacobian is the Vandermonde product") {
    CHECK(jacobian_phi(PolyDiscPoint{1.0, 2.0}) == Complex(-1.0));
    CHECK(jacobian_phi(PolyDiscPoint{0.0, 1.0, 2.0}) == Complex(-2.0));
    CHECK(jacobian_phi(PolyDiscPoint{0.3, Complex(0.1, 0.2), 0.3}) == Complex(0.0));
}

TEST_CASE("permutation action on symmetric functions and the Jacobian") {
    std::mt19937_64 rng(11);
    for (std::size_t n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto w = random_point(rng, n);
            const auto p = elementary_symmetric(w);
            const auto jw = jacobian_phi(w);
            for (const auto& tau : all_permutations(n)) {
                const PolyDiscPoint tw(tau.apply(std::span<const Complex>(w.coords)));
                CHECK(max_diff(elementary_symmetric(tw).coords, p.coords) < 1e-14);
                CHECK(std::abs(jacobian_phi(tw) - double(tau.sign()) * jw) < 1e-14);
            }
        }
    }
}

TEST_CASE("sign is a homomorphism, exhaustively for n <= 5") {
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto perms = all_permutations(n);
        CHECK(perms.size() == factorial(n));
        for (const auto& a : perms)
            for (const auto& b : perms) REQUIRE(a.compose(b).sign() == a.sign() * b.sign());
    }
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = j + 1; k < 4; ++k) {
            auto t = Permutation::transposition(4, j, k);
            CHECK(t.sign() == -1);
            CHECK(t.compose(t) == Permutation::identity(4));
        }
}

TEST_CASE("composition is associative and inverse undoes") {
    const auto perms = all_permutations(4);
    for (std::size_t a = 0; a < perms.size(); a += 5)
        for (std::size_t b = 0; b < perms.size(); b += 3)
            for (std::size_t c = 0; c < perms.size(); c += 7) {
                CHECK(perms[a].compose(perms[b]).compose(perms[c]) ==
                      perms[a].compose(perms[b].compose(perms[c])));
            }
    for (const auto& p : perms) CHECK(p.compose(p.inverse()) == Permutation::identity(4));
}

TEST_CASE("roots of the monic polynomial") {
    auto r = local_inverse_roots(SymmetrizedPoint{0.0, -1.0});
    REQUIRE(r.size() == 2);
    // canonical order: argument 0 before argument pi
    CHECK(std::abs(r[0] - 1.0) < 1e-12);
    CHECK(std::abs(r[1] + 1.0) < 1e-12);

    auto q = local_inverse_roots(SymmetrizedPoint{3.0, 2.0});
    CHECK(std::abs(q[0] - 1.0) < 1e-12);
    CHECK(std::abs(q[1] - 2.0) < 1e-12);

    const std::vector<Complex> w{0.1, -0.2, Complex(0.0, 0.3)};
    auto roots = local_inverse_roots(elementary_symmetric(w));
    auto expected = w;
    canonical_sort(expected);
    CHECK(max_diff(roots, expected) < 1e-12);

    auto zero = local_inverse_roots(SymmetrizedPoint{0.0, 0.0, 0.0});
    for (auto c : zero) CHECK(c == Complex(0.0));
}

TEST_CASE("roundtrip through the roots for n <= 5") {
    std::mt19937_64 rng(3);
    for (std::size_t n = 1; n <= 5; ++n)
        for (int trial = 0; trial < 50; ++trial) {
            const auto p = elementary_symmetric(random_point(rng, n));
            const auto roots = local_inverse_roots(p);
            CHECK(max_diff(elementary_symmetric(roots).coords, p.coords) < 1e-9);
        }
}

TEST_CASE("repeated roots keep their multiplicity") {
    const Complex a{0.3, 0.1};
    auto r = local_inverse_roots(elementary_symmetric(PolyDiscPoint{a, a, -0.5}));
    REQUIRE(r.size() == 3);
    int near_a = 0;
    for (auto c : r)
        if (std::abs(c - a) < 1e-5) ++near_a;
    CHECK(near_a == 2);
}

TEST_CASE("local inverses enumerate every ordering") {
    auto inv = local_inverses(elementary_symmetric(PolyDiscPoint{0.1, 0.2, 0.3}));
    CHECK(inv.size() == 6);
    for (const auto& w : inv) CHECK(std::abs(elementary_symmetric(w)[2] - 0.006) < 1e-14);
}

TEST_CASE("membership in the symmetrized polydisc") {
    CHECK(in_symmetrized_polydisc(elementary_symmetric(PolyDiscPoint{0.5, -0.5})));
    CHECK_FALSE(in_symmetrized_polydisc(elementary_symmetric(PolyDiscPoint{1.5, 0.0})));
    const double t = kPi / 7;
    const PolyDiscPoint w{std::polar(0.999, t), std::polar(0.999, -t)};
    // both root moduli are 0.999 by construction
    CHECK(in_symmetrized_polydisc(elementary_symmetric(w)));
}

TEST_CASE("discriminant equals the squared Jacobian") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (std::size_t n = 2; n <= 5; ++n)
        for (int i = 0; i < 50; ++i) {
            std::vector<Complex> w(n);
            for (auto& c : w) c = Complex(u(rng), u(rng)) * 0.7;
            const Complex j = jacobian_phi(w);
            CHECK(std::abs(discriminant(elementary_symmetric(w)) - j * j) < 1e-12 * std::max(1.0, std::norm(j)));
        }
    CHECK(std::abs(discriminant(elementary_symmetric(std::vector<Complex>{0.2, 0.2, -0.5}))) < 1e-15);
    // n = 2: p1^2 - 4 p2
    CHECK(std::abs(discriminant(elementary_symmetric(std::vector<Complex>{0.5, -0.25})) - 0.5625) < 1e-15);
}
