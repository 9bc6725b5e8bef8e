#include "catch_amalgamated.hpp"
#include "testkit.hpp"

#include "qperiod/tau.hpp"

#include <algorithm>
#include <array>

using namespace qperiod;
using cyclo::CyclotomicInt;
using testkit::Full;

namespace {

const lie::RootSystem& sl2()
{
    static const lie::RootSystem rs = lie::build_root_system('A', 1);
    return rs;
}

std::int64_t residue(std::int64_t a, std::int64_t r) { return mod_floor(a, r); }

std::vector<std::int64_t> expansion(const CyclotomicInt& x) { return cyclo::ohtsuki_expansion(x).a; }

// sum_n xi^front(n) (1 - xi^(n+1)) ... (1 - xi^(2n+1)) in Z[T]/(T^r - 1), with
// many more terms than needed; this is (1 - xi) tau before any division.
template <class Front>
Full naive_series(int r, Front front)
{
    const auto n_r = static_cast<std::size_t>(r);
    Full sum(n_r);
    for (std::int64_t n = 0; n < 3 * r; ++n) {
        Full term = testkit::full_monomial(n_r, front(n));
        for (std::int64_t k = n + 1; k <= 2 * n + 1; ++k)
            term = testkit::full_mul(term, testkit::full_sub(testkit::full_monomial(n_r, 0), testkit::full_monomial(n_r, k)));
        for (std::size_t i = 0; i < n_r; ++i) sum[i] += term[i];
    }
    return sum;
}

Full times_one_minus_xi(const CyclotomicInt& x)
{
    const Full f = testkit::full_of(x);
    const auto r = f.size();
    return testkit::full_mul(f, testkit::full_sub(testkit::full_monomial(r, 0), testkit::full_monomial(r, 1)));
}

} // namespace

TEST_CASE("tau of the Poincare sphere at r = 5")
{
    const auto t = tau::tau_poincare(5);
    CHECK(t.manifold_id == tau::ManifoldId::poincare);
    CHECK(t.r == 5);
    CHECK(t.value == cyclo::make(5, {{0, 1}, {1, 2}, {2, 2}, {3, 1}}));
    CHECK(expansion(t.value)[1] == residue(6, 5));
    CHECK_THROWS_AS(tau::tau_poincare(3), std::invalid_argument);
    CHECK_THROWS_AS(tau::tau_poincare(9), std::invalid_argument);
    CHECK_THROWS_AS(tau::tau_brieskorn237(2), std::invalid_argument);
}

TEST_CASE("closed forms agree with the undivided series")
{
    for (int r : {5, 7, 11, 13, 17, 19}) {
        INFO("r=" << r);
        const Full p = naive_series(r, [](std::int64_t n) { return n; });
        const Full b = naive_series(r, [](std::int64_t n) { return -n * (n + 2); });
        CHECK(testkit::full_equal_at_xi(times_one_minus_xi(tau::tau_poincare(r).value), p));
        CHECK(testkit::full_equal_at_xi(times_one_minus_xi(tau::tau_brieskorn237(r).value), b));
    }
}

TEST_CASE("truncation is safe")
{
    for (int r : {5, 7, 11}) {
        CHECK(tau::poincare_series(r, r - 1) == tau::poincare_series(r, 4 * r));
        CHECK(tau::brieskorn237_series(r, r - 1) == tau::brieskorn237_series(r, 4 * r));
        for (std::int64_t n = r - 1; n < 3 * r; ++n) {
            CHECK((tau::poincare_series(r, n + 1) - tau::poincare_series(r, n)).is_zero());
            CHECK((tau::brieskorn237_series(r, n + 1) - tau::brieskorn237_series(r, n)).is_zero());
        }
    }
}

TEST_CASE("tau of the 3-sphere")
{
    for (int r : {3, 5, 7}) CHECK(tau::tau_s3(r).value == CyclotomicInt::constant(r, 1));
    CHECK(tau::tau_value(tau::ManifoldId::s3, 11).value == CyclotomicInt::constant(11, 1));
    CHECK_THROWS_AS(tau::tau_value(tau::ManifoldId::custom, 11), std::invalid_argument);
    CHECK(tau::manifold_name(tau::ManifoldId::brieskorn_2_3_7) == "brieskorn237");
    CHECK(tau::parse_manifold("poincare") == tau::ManifoldId::poincare);
    CHECK_THROWS_AS(tau::parse_manifold("lens"), std::invalid_argument);
}

TEST_CASE("Ohtsuki coefficients of the Poincare sphere")
{
    for (int r : {5, 7, 11}) CHECK(tau::tau_poincare(r).value.epsilon_residue() == 1);
    for (int r : {7, 11, 13, 17, 19}) {
        const auto a = expansion(tau::tau_poincare(r).value);
        CHECK(a[0] == 1);
        CHECK(a[1] == residue(6, r));
        CHECK(a[3] == residue(464, r));
        const auto twisted = expansion(tau::twisted_conjugate(tau::tau_poincare(r).value, -12));
        CHECK(twisted[3] == residue(-16, r));
    }
    for (int r : {11, 13})
        for (int j : {0, 1, 2}) CHECK(expansion(tau::twisted_conjugate(tau::tau_poincare(r).value, j))[1] == residue(-6 - j, r));
}

TEST_CASE("Ohtsuki coefficients of the Brieskorn sphere")
{
    for (int r : {7, 11, 13, 17, 19}) {
        const auto x = tau::tau_brieskorn237(r).value;
        const auto a = expansion(x);
        CHECK(a[0] == 1);
        CHECK(a[1] == residue(6, r));
        CHECK(a[3] == residue(1064, r));
        CHECK(expansion(tau::twisted_conjugate(x, -12))[3] == residue(-280, r));
        for (int j : {0, 1, 2}) CHECK(expansion(tau::twisted_conjugate(x, j))[1] == residue(-6 - j, r));
    }
}

TEST_CASE("coefficient tables")
{
    const auto t13 = tau::coeff_table(tau::tau_poincare(13).value, 3);
    REQUIRE(t13.size() == 4);
    CHECK(t13[1] == std::pair<int, std::int64_t>{1, 6});
    CHECK(t13[3] == std::pair<int, std::int64_t>{3, 464 % 13});
    CHECK(tau::coeff_table(tau::twisted_conjugate(tau::tau_poincare(13).value, -12), 3)[3].second == residue(-16, 13));
    for (int j : {0, 1, 2}) CHECK(tau::coeff_table(tau::twisted_conjugate(tau::tau_poincare(11).value, j), 1)[1].second == residue(-6 - j, 11));
    CHECK(tau::coeff_table(tau::tau_poincare(7).value, 5).size() == 6);
    CHECK_THROWS_AS(tau::coeff_table(tau::tau_poincare(7).value, 6), std::invalid_argument);
    CHECK_THROWS_AS(tau::coeff_table(tau::tau_poincare(7).value, -1), std::invalid_argument);
}

TEST_CASE("twisting preserves a0 and shifts a1 to first order")
{
    testkit::Gen gen(501);
    for (int r : {5, 7, 11})
        for (int i = 0; i < 40; ++i) {
            const CyclotomicInt x = gen.cyclotomic(r, 50);
            const auto a = expansion(x);
            for (int v = 0; v < r; ++v) {
                const auto b = expansion(tau::twisted_conjugate(x, v));
                CHECK(b[0] == a[0]);
                CHECK(b[1] == residue(-a[1] - v * a[0], r));
            }
        }
}

TEST_CASE("obstruction verdicts")
{
    auto test = [](const CyclotomicInt& x) { return tau::obstruction_test(x, sl2()); };
    for (int r : {7, 11, 13, 17, 19}) {
        const auto rep = test(tau::tau_poincare(r).value);
        CHECK(rep.admissible_v.empty());
        CHECK(rep.verdict == tau::Verdict::obstructed);
    }
    const auto p5 = test(tau::tau_poincare(5).value);
    CHECK(p5.verdict == tau::Verdict::not_obstructed);
    CHECK(p5.admissible_v == std::vector<std::int64_t>{residue(-12, 5)});
    for (int r : {5, 11, 13, 17, 19}) CHECK(test(tau::tau_brieskorn237(r).value).verdict == tau::Verdict::obstructed);
    const auto b7 = test(tau::tau_brieskorn237(7).value);
    CHECK(b7.verdict == tau::Verdict::not_obstructed);
    CHECK(b7.admissible_v == std::vector<std::int64_t>{residue(-12, 7)});

    CHECK(test(tau::tau_s3(7).value).admissible_v == std::vector<std::int64_t>{0});

    // Report layout.
    CHECK(p5.a_table.size() == 4);
    CHECK(p5.twisted.size() == 5);
    CHECK(p5.twisted[3].a == tau::coeff_table(tau::twisted_conjugate(tau::tau_poincare(5).value, 3), 3));

    // d h_dual = 12 for G2.
    const auto g2 = tau::obstruction_test(tau::tau_poincare(11).value, lie::build_root_system('G', 2));
    CHECK(g2.verdict == tau::Verdict::inadmissible_r);
    CHECK(g2.admissible_v.empty());
    CHECK(tau::obstruction_test(CyclotomicInt::constant(3, 1), lie::build_root_system('A', 2)).verdict
          == tau::Verdict::inadmissible_r);
}

TEST_CASE("constructed symmetric elements pass the obstruction test")
{
    testkit::Gen gen(502);
    for (int r : {5, 7, 11, 13})
        for (int i = 0; i < 30; ++i) {
            const auto v = gen.uniform(0, r - 1);
            const CyclotomicInt y = gen.cyclotomic(r, 30), z = gen.cyclotomic(r, 30);
            const CyclotomicInt x = y + tau::twisted_conjugate(y, v) + z * BigInt(r);
            const auto rep = tau::obstruction_test(x, sl2());
            CHECK(std::find(rep.admissible_v.begin(), rep.admissible_v.end(), v) != rep.admissible_v.end());
            CHECK(rep.verdict == tau::Verdict::not_obstructed);
        }
}

TEST_CASE("chinese remainder lifting")
{
    CHECK(tau::crt_lift({{7, 6}, {11, 6}, {13, 6}}) == 6);
    CHECK(tau::crt_lift({{7, 464 % 7}, {11, 464 % 11}, {13, 464 % 13}, {17, 464 % 17}}) == 464);
    CHECK(tau::crt_lift({{7, residue(-16, 7)}, {11, residue(-16, 11)}}) == -16);
    CHECK(tau::crt_lift({{5, 2}}) == 2);
    CHECK(tau::crt_lift({{5, 3}}) == -2);
    CHECK(tau::crt_lift({{7, 0}, {11, 0}}) == 0);
    CHECK(tau::crt_lift({{7, 6}, {11, 6}}, BigInt(38)) == 6);
    CHECK_THROWS_AS(tau::crt_lift({{7, 6}, {11, 6}}, BigInt(39)), std::invalid_argument);
    CHECK_THROWS_AS(tau::crt_lift({{7, 1}, {7, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(tau::crt_lift({}), std::invalid_argument);

    testkit::Gen gen(503);
    const std::vector<std::int64_t> primes{5, 7, 11, 13, 17, 19, 23};
    for (int i = 0; i < 200; ++i) {
        const std::int64_t n = gen.uniform(-50000, 50000);
        std::vector<std::pair<std::int64_t, std::int64_t>> res;
        for (auto p : primes) res.emplace_back(p, residue(n, p));
        CHECK(tau::crt_lift(res, BigInt(50000)) == n);
    }
    // a1 of tau_P lifts to 6 from any two primes.
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) {
            const int r = std::array{7, 11, 13, 17, 19}[i], s = std::array{7, 11, 13, 17, 19}[j];
            CHECK(tau::crt_lift({{r, expansion(tau::tau_poincare(r).value)[1]}, {s, expansion(tau::tau_poincare(s).value)[1]}}) == 6);
        }
}

TEST_CASE("period discriminants")
{
    const auto p = tau::period_discriminant(tau::ManifoldId::poincare, {7, 11, 13, 17});
    CHECK(p.manifold == "poincare");
    CHECK(p.lifted == 480);
    CHECK(p.modulus == 7 * 11 * 13 * 17);
    CHECK(p.factorization == std::vector<std::pair<BigInt, int>>{{2, 5}, {3, 1}, {5, 1}});
    CHECK(p.dropped.empty());
    for (const auto& row : p.residues) {
        CHECK(row.v == residue(-12, row.r));
        CHECK(row.delta == residue(480, row.r));
        CHECK(row.a3 == residue(464, row.r));
        CHECK(row.a3_twisted == residue(-16, row.r));
    }

    const auto b = tau::period_discriminant(tau::ManifoldId::brieskorn_2_3_7, {11, 13, 17, 19});
    CHECK(b.lifted == 1344);
    CHECK(b.factorization == std::vector<std::pair<BigInt, int>>{{2, 6}, {3, 1}, {7, 1}});
    for (const auto& row : b.residues) {
        CHECK(row.a3 == residue(1064, row.r));
        CHECK(row.a3_twisted == residue(-280, row.r));
    }

    const auto s = tau::period_discriminant(tau::ManifoldId::s3, {7, 11, 13});
    CHECK(s.lifted == 0);
    CHECK(s.factorization.empty());

    CHECK_THROWS_AS(tau::period_discriminant(tau::ManifoldId::poincare, {}), std::invalid_argument);
    CHECK_THROWS_AS(tau::period_discriminant(tau::ManifoldId::poincare, {7, 7}), std::invalid_argument);
    CHECK_THROWS_AS(tau::period_discriminant(tau::ManifoldId::poincare, {3, 7}), std::invalid_argument);
    CHECK_THROWS_AS(tau::period_discriminant(tau::ManifoldId::poincare, {7, 15}), std::invalid_argument);
}

TEST_CASE("quotient congruence")
{
    for (int r : {5, 7})
        for (std::int64_t p : {3, 11, 13}) {
            if (p == r) continue;
            const auto one = CyclotomicInt::constant(r, 1);
            const auto u = tau::quotient_congruence_test(one, one, p, sl2());
            CHECK(std::find(u.begin(), u.end(), 0) != u.end());
            for (auto k : u) CHECK((k >= 0 && k < 2 * r));
        }
    testkit::Gen gen(504);
    for (int i = 0; i < 20; ++i) {
        const int r = 7;
        const std::int64_t p = 3;
        const CyclotomicInt y = gen.cyclotomic(r, 4);
        const CyclotomicInt x = CyclotomicInt::monomial(r, 3, -1) * y.pow(3);
        const auto u = tau::quotient_congruence_test(x, y, p, sl2());
        CHECK(std::find(u.begin(), u.end(), 3) != u.end());
    }
    CHECK_THROWS_AS(tau::quotient_congruence_test(CyclotomicInt::constant(5, 1), CyclotomicInt::constant(5, 1), 5, sl2()),
                    std::invalid_argument);
    CHECK_THROWS_AS(tau::quotient_congruence_test(CyclotomicInt::constant(5, 1), CyclotomicInt::constant(5, 1), 2, sl2()),
                    std::invalid_argument);
    CHECK_THROWS_AS(tau::quotient_congruence_test(CyclotomicInt::constant(5, 1), CyclotomicInt::constant(5, 1), 9, sl2()),
                    std::invalid_argument);
    CHECK_THROWS_AS(tau::quotient_congruence_test(CyclotomicInt::constant(5, 1), CyclotomicInt::constant(7, 1), 3, sl2()),
                    std::invalid_argument);

    // Poincare sphere against the 3-sphere for an 11-fold cover, r = 5: no exponent fits.
    CHECK(tau::quotient_congruence_test(tau::tau_poincare(5).value, CyclotomicInt::constant(5, 1), 11, sl2()).empty());
}
