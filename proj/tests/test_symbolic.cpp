#include <catch_amalgamated.hpp>

#include <random>

#include "bergman/identities.hpp"
#include "bergman/symmetrization.hpp"

using namespace bergman;

namespace {

MultiPoly random_poly(std::mt19937_64& rng, std::size_t nvars, int terms, int maxdeg) {
    std::uniform_int_distribution<int> deg(0, maxdeg), coef(-5, 5);
    MultiPoly p(nvars);
    for (int t = 0; t < terms; ++t) {
        Exponents e{};
        for (std::size_t i = 0; i < nvars; ++i) e[i] = std::uint8_t(deg(rng));
        p = p + MultiPoly::monomial(nvars, e, make_rational(coef(rng), 1 + std::abs(coef(rng))));
    }
    return p;
}

}  // namespace

TEST_CASE("MultiPoly ring axioms on random triples") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_poly(rng, 4, 5, 2), b = random_poly(rng, 4, 4, 2), c = random_poly(rng, 4, 3, 3);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
        if (!a.is_zero() && !b.is_zero()) CHECK((a * b).degree() == a.degree() + b.degree());
    }
}

TEST_CASE("MultiPoly stores no zero coefficients and sorts by graded lex") {
    const std::size_t nv = 3;
    auto x = MultiPoly::variable(nv, 0), y = MultiPoly::variable(nv, 1);
    auto p = (x + y) * (x - y);
    CHECK(p.term_count() == 2);  // x^2 - y^2, the xy terms cancel
    for (const auto& t : p.terms()) CHECK(t.second != 0);
    auto q = x * x * y + x + MultiPoly::constant(nv, 4);
    CHECK(q.terms().front().first == Exponents{});
    CHECK(q.degree() == 3);
}

TEST_CASE("expansion matches the binomial theorem") {
    const std::size_t nv = 2;
    auto x = MultiPoly::variable(nv, 0);
    auto one = MultiPoly::constant(nv, 1);
    auto p = (one + x).pow(6);
    REQUIRE(p.term_count() == 7);
    const long binom[] = {1, 6, 15, 20, 15, 6, 1};
    for (std::size_t k = 0; k < 7; ++k) CHECK(p.terms()[k].second == binom[k]);
}

TEST_CASE("RationalFn equality is cross-multiplication") {
    const std::size_t nv = 3;
    auto x = MultiPoly::variable(nv, 0), y = MultiPoly::variable(nv, 1);
    auto one = MultiPoly::constant(nv, 1);
    // x/(1-x) = (x - x^2)/(1-x)^2
    RationalFn a(x, {{one - x, 1}});
    RationalFn b(x - x * x, {{one - x, 2}});
    CHECK(a == b);
    CHECK(b == a);
    RationalFn c(x + y, {{one - x, 1}});
    CHECK_FALSE(a == c);
    // (p/q)(q/p) = 1
    RationalFn pq(x + y * y, {{one - x * y, 1}});
    CHECK(pq * pq.reciprocal() == RationalFn(one));
    // transitivity through a third representation
    RationalFn d(x * (one - y), {{one - x, 1}, {one - y, 1}});
    CHECK(a == d);
    CHECK(b == d);
}

TEST_CASE("swap_variables on symmetric and anti-symmetric inputs") {
    detail::KernelAlgebra A(2);
    const auto zb = Block::z(2), wb = Block::wb(2);
    RationalFn sym(A.z(1) + A.z(2), {{A.one() - A.z(1) * A.z(2), 1}});
    CHECK(swap_variables(sym, 0, 1, zb) == sym);
    RationalFn jac(A.z(1) - A.z(2));
    CHECK(swap_variables(jac, 0, 1, zb) == -jac);
    CHECK(swap_variables(jac, 0, 1, wb) == jac);
}

TEST_CASE("K2 - K1 is (1,2)-symmetric in w for n = 3") {
    detail::KernelAlgebra A(3);
    const RationalFn d = detail::kernel_Pl_formal(A, 2) - detail::kernel_Pl_formal(A, 1);
    CHECK(swap_variables(d, 0, 1, Block::wb(3)) == d);
    // and the individual kernels are not
    const RationalFn k1 = detail::kernel_Pl_formal(A, 1);
    CHECK_FALSE(swap_variables(k1, 0, 1, Block::wb(3)) == k1);
}

TEST_CASE("antisymmetrize") {
    const auto vars = VariableSet::single_block(3);
    const std::size_t nv = vars.size();
    auto w = [&](std::size_t i) { return MultiPoly::variable(nv, i); };
    // n = 2 block: (w1 - w2)/2
    CHECK(antisymmetrize(w(0), Block{0, 2}) == make_rational(1, 2) * (w(0) - w(1)));
    // symmetric input goes to zero
    CHECK(antisymmetrize(w(0) * w(1) * w(2) + w(0) + w(1) + w(2), Block{0, 3}).is_zero());
    // staircase monomial w1^2 w2 gives the Vandermonde over 3!
    const auto vdm = (w(0) - w(1)) * (w(0) - w(2)) * (w(1) - w(2));
    const auto anti = antisymmetrize(w(0) * w(0) * w(1), Block{0, 3});
    CHECK(anti == make_rational(1, 6) * vdm);
    // the output is anti-symmetric
    CHECK(permute_block(anti, Permutation::transposition(3, 0, 2), Block{0, 3}) == -anti);
}

TEST_CASE("ab identity") {
    for (int n = 2; n <= 4; ++n) {
        CHECK(verify_ab_identity(n).passed);
        CHECK_FALSE(verify_ab_identity(n, Mutation::FlipSign).passed);
        CHECK_FALSE(verify_ab_identity(n, Mutation::BumpExponent).passed);
    }
}

TEST_CASE("p_I expansion") {
    for (int m = 1; m <= 3; ++m) {
        CHECK(verify_pI_expansion(m).passed);
        CHECK_FALSE(verify_pI_expansion(m, Mutation::FlipSign).passed);
        CHECK_FALSE(verify_pI_expansion(m, Mutation::BumpExponent).passed);
    }
    // m = 1 is the ab identity for the pair (1, 2)
    detail::KernelAlgebra A(2);
    CHECK(A.a(1, 2) * A.a(2, 1) == A.a(2, 2) * A.a(1, 1) + A.b(1, 2));
}

TEST_CASE("kernel decomposition T1 + T2 = polydisc kernel") {
    for (int n = 2; n <= 4; ++n) {
        auto r = verify_kernel_decomposition(n);
        CHECK(r.passed);
        CHECK(r.lhs_terms > 0);
        CHECK_FALSE(verify_kernel_decomposition(n, Mutation::FlipSign).passed);
        CHECK_FALSE(verify_kernel_decomposition(n, Mutation::BumpExponent).passed);
    }
    // the repeated-factor reading of the T1 denominator breaks the decomposition
    CHECK_FALSE(verify_kernel_decomposition_repeated_factor(2).passed);
    CHECK_FALSE(verify_kernel_decomposition_repeated_factor(3).passed);
}

TEST_CASE("Vandermonde expansion and partial fractions") {
    for (int n = 2; n <= 5; ++n) {
        CHECK(verify_vandermonde_expansion(n).passed);
        CHECK_FALSE(verify_vandermonde_expansion(n, Mutation::FlipSign).passed);
        CHECK_FALSE(verify_vandermonde_expansion(n, Mutation::BumpExponent).passed);
    }
    for (int n = 3; n <= 5; ++n) {
        auto r = verify_partial_fraction(n);
        CHECK(r.passed);
        CHECK(r.prescreen_passed);
        auto bad = verify_partial_fraction(n, Mutation::FlipSign);
        CHECK_FALSE(bad.passed);
        CHECK_FALSE(bad.prescreen_passed);
        CHECK(bad.witness.has_value());
        CHECK_FALSE(verify_partial_fraction(n, Mutation::BumpExponent).passed);
    }
}

TEST_CASE("n = 2 Vandermonde expansion is the two-term check") {
    const auto vars = VariableSet::single_block(2);
    const std::size_t nv = vars.size();
    auto z1 = MultiPoly::variable(nv, 0), z2 = MultiPoly::variable(nv, 1), s = MultiPoly::variable(nv, 2);
    auto one = MultiPoly::constant(nv, 1);
    CHECK((z1 - z2) * s == (one - z2 * s) - (one - z1 * s));
}

TEST_CASE("T1 kernel antisymmetrizes to zero over the wb block") {
    CHECK(verify_T1_antisymmetrization(2).passed);
    CHECK(verify_T1_antisymmetrization(3).passed);
    CHECK(verify_Pl_chain(2).passed);
    CHECK(verify_Pl_chain(3).passed);
    // the polydisc kernel itself does not
    detail::KernelAlgebra A(2);
    CHECK_FALSE(antisymmetrize(detail::kernel_polydisc_formal(A), Block::wb(2)).is_zero());
}

TEST_CASE("formal kernels evaluate consistently with the Jacobian") {
    detail::KernelAlgebra A(2);
    const std::vector<Complex> x{Complex(0.3, 0.1), Complex(-0.2, 0.05), Complex(0.1, -0.4), Complex(0.25, 0.2),
                                 Complex(0.0)};
    const Complex t1 = detail::kernel_T1_formal(A).evaluate(x);
    const Complex t2 = detail::kernel_T2_formal(A).evaluate(x);
    const Complex k = detail::kernel_polydisc_formal(A).evaluate(x);
    CHECK(std::abs(t1 + t2 - k) < 1e-13);
}

TEST_CASE("numerator-times-Vandermonde reading of the swap invariant is not an identity") {
    // Antisymmetrizing the bare T1 numerator times prod(wb_j - wb_k) ignores the
    // wb-dependence of the denominator, and the result is nonzero.
    detail::KernelAlgebra A(2);
    const RationalFn t1 = detail::kernel_T1_formal(A);
    const MultiPoly vdm = A.wb(1) - A.wb(2);
    CHECK_FALSE(antisymmetrize(t1.numerator() * vdm, Block::wb(2)).is_zero());
}
