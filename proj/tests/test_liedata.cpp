#include "catch_amalgamated.hpp"
#include "testkit.hpp"

#include "qperiod/liedata.hpp"

#include <numeric>

using namespace qperiod;
using lie::RootSystem;

namespace {

struct Frac {
    std::int64_t n = 0, d = 1;

    Frac(std::int64_t num = 0, std::int64_t den = 1) : n(num), d(den)
    {
        if (d < 0) n = -n, d = -d;
        const std::int64_t g = std::gcd(n, d);
        if (g > 1) n /= g, d /= g;
    }
    friend Frac operator+(Frac a, Frac b) { return {a.n * b.d + b.n * a.d, a.d * b.d}; }
    friend Frac operator-(Frac a, Frac b) { return {a.n * b.d - b.n * a.d, a.d * b.d}; }
    friend Frac operator*(Frac a, Frac b) { return {a.n * b.n, a.d * b.d}; }
    friend Frac operator/(Frac a, Frac b) { return {a.n * b.d, a.d * b.n}; }
    friend bool operator==(Frac a, Frac b) { return a.n == b.n && a.d == b.d; }
};

std::vector<std::vector<Frac>> inverse(const lie::IntMatrix& m)
{
    const std::size_t n = m.size();
    std::vector<std::vector<Frac>> a(n, std::vector<Frac>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (a[p][c].n == 0) ++p;
        std::swap(a[p], a[c]);
        const Frac piv = a[c][c];
        for (auto& x : a[c]) x = x / piv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c].n == 0) continue;
            const Frac f = a[r][c];
            for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] = a[r][k] - f * a[c][k];
        }
    }
    std::vector<std::vector<Frac>> out(n, std::vector<Frac>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j];
    return out;
}

// Fundamental weights satisfy (lambda_i | alpha_j) = d_j delta_ij, so their
// Gram matrix is diag(d) B^-1 diag(d); D is the lcm of its denominators.
std::int64_t weight_denominator(const RootSystem& rs)
{
    const auto inv = inverse(rs.bilinear);
    std::int64_t D = 1;
    for (std::size_t i = 0; i < inv.size(); ++i)
        for (std::size_t j = 0; j < inv.size(); ++j) D = std::lcm(D, (Frac(rs.d[i]) * inv[i][j] * Frac(rs.d[j])).d);
    return D;
}

std::int64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

struct Expected {
    char family;
    int rank;
    std::int64_t d, h, h_dual, det, weyl;
};

// Standard tables.
const std::vector<Expected> table = {
    {'A', 1, 1, 2, 2, 2, 2},        {'A', 2, 1, 3, 3, 3, 6},         {'A', 3, 1, 4, 4, 4, 24},
    {'A', 4, 1, 5, 5, 5, 120},      {'B', 2, 2, 4, 3, 2, 8},         {'B', 3, 2, 6, 5, 2, 48},
    {'C', 3, 2, 6, 4, 2, 48},       {'D', 4, 1, 6, 6, 4, 192},       {'D', 5, 1, 8, 8, 4, 1920},
    {'G', 2, 3, 6, 4, 1, 12},       {'F', 4, 2, 12, 9, 1, 1152},     {'E', 6, 1, 12, 12, 3, 51840},
    {'E', 7, 1, 18, 18, 2, 2903040}, {'E', 8, 1, 30, 30, 1, 696729600},
};

// Direct complex evaluation of the Gauss sum, using (alpha_i|alpha_j) = d_i a_ij.
std::complex<double> gauss_numeric(const RootSystem& rs, int r)
{
    const auto n = static_cast<std::size_t>(rs.rank);
    std::vector<std::int64_t> mu(n, 0);
    std::complex<double> z{};
    std::int64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= r;
    for (std::int64_t t = 0; t < total; ++t) {
        std::int64_t norm = 0, rho = 0;
        for (std::size_t i = 0; i < n; ++i) {
            rho += mu[i] * rs.d[i];
            for (std::size_t j = 0; j < n; ++j) norm += mu[i] * rs.d[i] * rs.cartan[i][j] * mu[j];
        }
        const std::int64_t e = norm / 2 + rho;
        z += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e % r) / r);
        for (std::size_t i = 0; i < n; ++i) {
            if (++mu[i] < r) break;
            mu[i] = 0;
        }
    }
    return z;
}

std::int64_t brute_kernel(const RootSystem& rs, std::int64_t r)
{
    const auto n = static_cast<std::size_t>(rs.rank);
    std::vector<std::int64_t> mu(n, 0);
    std::int64_t total = 1, count = 0;
    for (std::size_t i = 0; i < n; ++i) total *= r;
    for (std::int64_t t = 0; t < total; ++t) {
        bool zero = true;
        for (std::size_t i = 0; i < n && zero; ++i) {
            std::int64_t s = 0;
            for (std::size_t j = 0; j < n; ++j) s += rs.bilinear[i][j] * mu[j];
            zero = mod_floor(s, r) == 0;
        }
        count += zero;
        for (std::size_t i = 0; i < n; ++i) {
            if (++mu[i] < r) break;
            mu[i] = 0;
        }
    }
    return count;
}

std::complex<double> xi_power(std::int64_t e, int r)
{
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mod_floor(e, r)) / r);
}

} // namespace

TEST_CASE("root system examples")
{
    const RootSystem a1 = lie::build_root_system('A', 1);
    CHECK(a1.positive_roots == std::vector<lie::Root>{{1}});
    CHECK(a1.bilinear == lie::IntMatrix{{2}});
    CHECK(a1.rho_coords == std::vector<lie::Rational>{lie::Rational(1, 2)});

    const RootSystem a2 = lie::build_root_system('A', 2);
    auto roots = a2.positive_roots;
    std::sort(roots.begin(), roots.end());
    CHECK(roots == std::vector<lie::Root>{{0, 1}, {1, 0}, {1, 1}});
    CHECK(a2.rho_coords == std::vector<lie::Rational>{lie::Rational(1), lie::Rational(1)});

    const RootSystem b2 = lie::build_root_system('B', 2);
    CHECK(b2.positive_roots.size() == 4);
    CHECK(b2.d == std::vector<std::int64_t>{2, 1});
    CHECK(b2.cartan == lie::IntMatrix{{2, -1}, {-2, 2}});

    const RootSystem g2 = lie::build_root_system('g', 2);
    CHECK(g2.family == 'G');
    CHECK(g2.positive_roots.size() == 6);

    CHECK_THROWS_AS(lie::build_root_system('H', 2), std::invalid_argument);
    CHECK_THROWS_AS(lie::build_root_system('A', 0), std::invalid_argument);
    CHECK_THROWS_AS(lie::build_root_system('D', 3), std::invalid_argument);
    CHECK_THROWS_AS(lie::build_root_system('E', 5), std::invalid_argument);
    CHECK_THROWS_AS(lie::build_root_system('G', 3), std::invalid_argument);
}

TEST_CASE("constants match the standard tables")
{
    for (const auto& e : table) {
        INFO(e.family << e.rank);
        const RootSystem rs = lie::build_root_system(e.family, e.rank);
        const lie::LieConstants c = lie::constants(rs);
        CHECK(c.d == e.d);
        CHECK(c.h == e.h);
        CHECK(c.h_dual == e.h_dual);
        CHECK(c.det_cartan == e.det);
        CHECK(c.weyl_order == e.weyl);
        CHECK(c.D == weight_denominator(rs));
        CHECK(rs.positive_roots.size() == static_cast<std::size_t>(e.rank * e.h / 2));
    }
    CHECK(lie::constants(lie::build_root_system('A', 1)).D == 2);
    CHECK(lie::constants(lie::build_root_system('A', 2)).D == 3);
    for (int l = 1; l <= 6; ++l) CHECK(lie::constants(lie::build_root_system('A', l)).weyl_order == factorial(l + 1));
}

TEST_CASE("structural invariants of built systems")
{
    for (const auto& e : table) {
        INFO(e.family << e.rank);
        const RootSystem rs = lie::build_root_system(e.family, e.rank);
        const auto n = static_cast<std::size_t>(e.rank);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(rs.bilinear[i][i] == 2 * rs.d[i]);
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(rs.d[i] * rs.cartan[i][j] == rs.d[j] * rs.cartan[j][i]);
                CHECK(rs.bilinear[i][j] == rs.d[i] * rs.cartan[i][j]);
            }
        }
        // Simple roots included; coordinates nonnegative; square lengths from the simple ones.
        for (std::size_t i = 0; i < n; ++i) {
            lie::Root simple(n, 0);
            simple[i] = 1;
            CHECK(std::find(rs.positive_roots.begin(), rs.positive_roots.end(), simple) != rs.positive_roots.end());
        }
        for (const auto& root : rs.positive_roots) {
            for (auto x : root) CHECK(x >= 0);
            const std::int64_t len = rs.form(root, root);
            CHECK(std::find_if(rs.d.begin(), rs.d.end(), [&](std::int64_t di) { return 2 * di == len; }) != rs.d.end());
        }
        // rho is half the sum of positive roots and pairs to d_i with simple roots.
        std::vector<std::int64_t> sum(n, 0);
        for (const auto& root : rs.positive_roots)
            for (std::size_t i = 0; i < n; ++i) sum[i] += root[i];
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(rs.rho_coords[i] == lie::Rational(sum[i], 2));
            lie::Rational pairing = 0;
            for (std::size_t j = 0; j < n; ++j) pairing += rs.rho_coords[j] * rs.bilinear[j][i];
            CHECK(pairing == lie::Rational(rs.d[i]));
        }
    }
    CHECK(lie::build_root_system('A', 1).rho_norm_squared() == lie::Rational(1, 2));
    CHECK(lie::build_root_system('A', 2).rho_norm_squared() == lie::Rational(2));
}

TEST_CASE("gauss exponents are integral")
{
    testkit::Gen gen(401);
    for (const auto& e : table) {
        if (e.rank > 4) continue;
        const RootSystem rs = lie::build_root_system(e.family, e.rank);
        for (int i = 0; i < 1000; ++i) {
            lie::Root mu(static_cast<std::size_t>(e.rank));
            for (auto& x : mu) x = gen.uniform(-50, 50);
            const std::int64_t norm = rs.form(mu, mu);
            CHECK(norm % 2 == 0);
            CHECK(lie::gauss_exponent(rs, mu) == norm / 2 + rs.pairing_with_rho(mu));
        }
    }
}

TEST_CASE("gauss sum examples")
{
    const RootSystem a1 = lie::build_root_system('A', 1);
    CHECK(lie::gauss_sum(a1, 5).coeffs() == std::vector<BigInt>{2, 1, 2, 0});
    std::map<std::int64_t, BigInt> m7;
    for (int k = 0; k < 7; ++k) m7[(k * k + k) % 7] += 1;
    CHECK(lie::gauss_sum(a1, 7) == cyclo::make(7, m7));
    CHECK_THROWS_AS(lie::gauss_sum(a1, 2), std::invalid_argument);
    CHECK_THROWS_AS(lie::gauss_sum(a1, 9), std::invalid_argument);

    for (char f : {'A', 'B', 'G'})
        for (int rank : {1, 2, 3}) {
            if ((f == 'B' && rank != 2) || (f == 'G' && rank != 2)) continue;
            const RootSystem rs = lie::build_root_system(f, rank);
            for (int r : {5, 7, 11, 13}) {
                if (rank == 3 && r > 7) continue;
                const auto exact = lie::gauss_sum(rs, r).complex_eval();
                CHECK(std::abs(exact - gauss_numeric(rs, r)) < 1e-6);
            }
        }
}

TEST_CASE("kernel sizes")
{
    CHECK(lie::kernel_size(lie::build_root_system('A', 1), 5) == 1);
    CHECK(lie::kernel_size(lie::build_root_system('A', 1), 2) == 2);
    CHECK(lie::kernel_size(lie::build_root_system('A', 2), 3) == 3);
    CHECK_THROWS_AS(lie::kernel_size(lie::build_root_system('A', 2), 4), std::invalid_argument);
    for (const auto& e : table) {
        if (e.rank > 4) continue;
        const RootSystem rs = lie::build_root_system(e.family, e.rank);
        for (std::int64_t r : {2, 3, 5, 7}) CHECK(lie::kernel_size(rs, r) == brute_kernel(rs, r));
    }
}

TEST_CASE("unknot values")
{
    const RootSystem a1 = lie::build_root_system('A', 1);
    const auto f5 = lie::f_unknot(a1, 5, 1);
    CHECK(f5.numerator == lie::gauss_sum(a1, 5));
    CHECK(f5.denominator == cyclo::one_minus_xi_pow(5, 1));
    REQUIRE(f5.quotient.has_value());
    CHECK(*f5.quotient == f5.numerator.divide_by_one_minus_xi());
    CHECK(lie::f_unknot(a1, 7, 1).numerator == lie::gauss_sum(a1, 7));
    CHECK_THROWS_AS(lie::f_unknot(a1, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(lie::f_unknot(lie::build_root_system('A', 3), 3, 1), std::domain_error);

    for (char f : {'A', 'B', 'G'})
        for (int rank : {1, 2}) {
            if (f != 'A' && rank != 2) continue;
            const RootSystem rs = lie::build_root_system(f, rank);
            for (int r : {5, 7, 11, 13}) {
                const auto c = lie::constants(rs);
                if (r <= c.d * c.h_dual) continue;
                const auto plus = lie::f_unknot(rs, r, 1);
                const auto minus = lie::f_unknot(rs, r, -1);
                CHECK(minus.numerator == plus.numerator.conjugate());
                CHECK(minus.denominator == plus.denominator.conjugate());
                if (plus.quotient) {
                    CHECK(*plus.quotient * plus.denominator == plus.numerator);
                    REQUIRE(minus.quotient.has_value());
                    CHECK(*minus.quotient == plus.quotient->conjugate());
                }
            }
        }
}

TEST_CASE("gauss sum magnitude")
{
    for (char f : {'A', 'B', 'G'})
        for (int rank : {1, 2, 3}) {
            if (f != 'A' && rank != 2) continue;
            const RootSystem rs = lie::build_root_system(f, rank);
            for (int r : {3, 5, 7, 11, 13}) {
                if (rank == 3 && r > 7) continue;
                INFO(rs.name() << " r=" << r);
                CHECK(lie::verify_gauss_magnitude(rs, r, 1e-9));
                const double g = std::norm(gauss_numeric(rs, r));
                const double expected = static_cast<double>(brute_kernel(rs, r)) * std::pow(r, rank);
                CHECK((std::abs(g - expected) < 1e-6 || g < 1e-6));
            }
        }
}

TEST_CASE("ratio of unknot values")
{
    for (char f : {'A', 'B', 'G'})
        for (int rank : {1, 2}) {
            if (f != 'A' && rank != 2) continue;
            const RootSystem rs = lie::build_root_system(f, rank);
            const auto c = lie::constants(rs);
            for (int r : {5, 7, 11, 13}) {
                if (r <= c.d * c.h_dual) {
                    CHECK_THROWS_AS(lie::verify_ratio(rs, r, 1e-9), std::invalid_argument);
                    continue;
                }
                INFO(rs.name() << " r=" << r);
                const auto res = lie::verify_ratio(rs, r, 1e-9);
                CHECK(res.ok);
                CHECK_FALSE(res.indeterminate);
                CHECK((res.omega == 1 || res.omega == -1));
                // Independent evaluation: F+ / F- xi^e should be omega.
                std::complex<double> denom = 1.0;
                for (const auto& root : rs.positive_roots) denom *= 1.0 - xi_power(rs.pairing_with_rho(root), r);
                const std::complex<double> fp = gauss_numeric(rs, r) / denom;
                const std::complex<double> w = fp / std::conj(fp) * xi_power(res.exponent, r);
                CHECK(std::abs(w - static_cast<double>(res.omega)) < 1e-6);
            }
        }
    const auto a1 = lie::verify_ratio(lie::build_root_system('A', 1), 5, 1e-9);
    CHECK(a1.exponent == 19);
}

TEST_CASE("admissible primes")
{
    const RootSystem a1 = lie::build_root_system('A', 1), a2 = lie::build_root_system('A', 2);
    CHECK(lie::admissible_r(a1, 5));
    CHECK(lie::admissible_r(a1, 7));
    CHECK_FALSE(lie::admissible_r(a1, 2));
    // 3 > d h_dual = 2 and 3 does not divide |G||W| = 4.
    CHECK(lie::admissible_r(a1, 3));
    CHECK_FALSE(lie::admissible_r(a1, 9));
    CHECK_FALSE(lie::admissible_r(a2, 3));
    CHECK(lie::admissible_r(a2, 5));
    CHECK_FALSE(lie::admissible_r(lie::build_root_system('G', 2), 11));
    CHECK(lie::admissible_r(lie::build_root_system('G', 2), 13));
}

TEST_CASE("gauss report")
{
    const RootSystem a1 = lie::build_root_system('A', 1);
    const auto rep = lie::gauss_report(a1, 5);
    CHECK(rep.gamma == lie::gauss_sum(a1, 5));
    CHECK(rep.ker_size == 1);
    CHECK(rep.group_size == 5);
    CHECK(rep.magnitude_ok);
    CHECK(rep.ratio_ok);
    CHECK((rep.omega_sign == 1 || rep.omega_sign == -1));
    const RootSystem a2 = lie::build_root_system('A', 2);
    CHECK(lie::gauss_report(a2, 7).group_size == 49);
    CHECK(lie::gauss_report(a2, 3).ker_size == 3);
    CHECK(lie::gauss_report(a2, 3).omega_sign == 0);
}
