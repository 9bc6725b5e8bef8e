#pragma once

// Root systems from Cartan data and the Gauss sums attached to the root lattice.
//
// Simple roots are in Bourbaki order. The symmetrised form is
// (alpha_i | alpha_j) = d_i a_ij with a_ij = 2 (alpha_i|alpha_j) / (alpha_i|alpha_i),
// normalised so the short roots have square length 2 (min d_i = 1).

#include "cyclo.hpp"
#include "number_theory.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qperiod::lie {

using Rational = boost::rational<std::int64_t>;
using IntMatrix = std::vector<std::vector<std::int64_t>>;
using Root = std::vector<std::int64_t>;

struct RootSystem {
    char family = 'A';
    int rank = 1;
    IntMatrix cartan;
    std::vector<std::int64_t> d;
    /// Gram matrix (alpha_i | alpha_j) = d_i a_ij.
    IntMatrix bilinear;
    std::vector<Root> positive_roots;
    std::vector<Rational> rho_coords;

    std::string name() const { return std::string(1, family) + std::to_string(rank); }

    friend bool operator==(const RootSystem&, const RootSystem&) = default;

    /// (x | y) for x, y in simple-root coordinates.
    std::int64_t form(const Root& x, const Root& y) const
    {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * bilinear[i][j] * y[j];
        return s;
    }

    /// (x | rho) = sum_i x_i d_i.
    std::int64_t pairing_with_rho(const Root& x) const
    {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * d[i];
        return s;
    }

    /// |rho|^2 as an exact rational.
    Rational rho_norm_squared() const
    {
        Rational s = 0;
        for (std::size_t i = 0; i < rho_coords.size(); ++i)
            for (std::size_t j = 0; j < rho_coords.size(); ++j) s += rho_coords[i] * bilinear[i][j] * rho_coords[j];
        return s;
    }
};

struct LieConstants {
    std::int64_t d = 1;
    std::int64_t D = 1;
    std::int64_t h = 0;
    std::int64_t h_dual = 0;
    std::int64_t det_cartan = 0;
    std::int64_t weyl_order = 0;

    friend bool operator==(const LieConstants&, const LieConstants&) = default;
};

namespace detail {

/// Symmetric Gram matrix from square lengths of simple roots and the Dynkin edges.
struct DynkinEdge {
    int i, j;
    std::int64_t product;  // (alpha_i | alpha_j), negative
};

inline IntMatrix gram(const std::vector<std::int64_t>& square_lengths, const std::vector<DynkinEdge>& edges)
{
    const std::size_t n = square_lengths.size();
    IntMatrix b(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) b[i][i] = square_lengths[i];
    for (const auto& e : edges) {
        b[static_cast<std::size_t>(e.i)][static_cast<std::size_t>(e.j)] = e.product;
        b[static_cast<std::size_t>(e.j)][static_cast<std::size_t>(e.i)] = e.product;
    }
    return b;
}

inline std::vector<DynkinEdge> chain(int from, int to)
{
    std::vector<DynkinEdge> out;
    for (int i = from; i + 1 <= to; ++i) out.push_back({i, i + 1, -1});
    return out;
}

inline IntMatrix gram_for(char family, int l)
{
    const auto n = static_cast<std::size_t>(l);
    switch (family) {
    case 'A':
        if (l < 1) break;
        return gram(std::vector<std::int64_t>(n, 2), chain(0, l - 1));
    case 'B': {
        if (l < 2) break;
        // alpha_1 .. alpha_{l-1} long, alpha_l short.
        std::vector<std::int64_t> len(n, 4);
        len[n - 1] = 2;
        std::vector<DynkinEdge> e;
        for (int i = 0; i + 1 < l; ++i) e.push_back({i, i + 1, -2});
        return gram(len, e);
    }
    case 'C': {
        if (l < 2) break;
        // alpha_1 .. alpha_{l-1} short, alpha_l long.
        std::vector<std::int64_t> len(n, 2);
        len[n - 1] = 4;
        std::vector<DynkinEdge> e = chain(0, l - 2);
        e.push_back({l - 2, l - 1, -2});
        return gram(len, e);
    }
    case 'D': {
        if (l < 4) break;
        std::vector<DynkinEdge> e = chain(0, l - 2);
        e.push_back({l - 3, l - 1, -1});
        return gram(std::vector<std::int64_t>(n, 2), e);
    }
    case 'E': {
        if (l < 6 || l > 8) break;
        // 1 - 3 - 4 - 5 - ... with 2 attached to 4 (1-based).
        std::vector<DynkinEdge> e{{0, 2, -1}, {1, 3, -1}};
        for (int i = 2; i + 1 < l; ++i) e.push_back({i, i + 1, -1});
        return gram(std::vector<std::int64_t>(n, 2), e);
    }
    case 'F':
        if (l != 4) break;
        return gram({4, 4, 2, 2}, {{0, 1, -2}, {1, 2, -2}, {2, 3, -1}});
    case 'G':
        if (l != 2) break;
        return gram({2, 6}, {{0, 1, -3}});
    default:
        break;
    }
    throw std::invalid_argument(std::string("unsupported root system type ") + family + std::to_string(l));
}

inline std::vector<std::vector<Rational>> inverse(const IntMatrix& m)
{
    const std::size_t n = m.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].numerator() == 0) ++piv;
        if (piv == n) throw std::domain_error("singular matrix");
        std::swap(a[piv], a[col]);
        const Rational inv = 1 / a[col][col];
        for (auto& x : a[col]) x *= inv;
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col].numerator() == 0) continue;
            const Rational f = a[row][col];
            for (std::size_t k = 0; k < 2 * n; ++k) a[row][k] -= f * a[col][k];
        }
    }
    std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j];
    return out;
}

inline std::int64_t determinant(const IntMatrix& m)
{
    const std::size_t n = m.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].numerator() == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const Rational f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
        }
    }
    return boost::rational_cast<std::int64_t>(det);
}

/// |W| as prod (m_i + 1), exponents m_i read off the heights of positive roots.
inline std::int64_t weyl_order_from_heights(const RootSystem& rs)
{
    std::map<std::int64_t, std::int64_t> by_height;
    for (const auto& root : rs.positive_roots) ++by_height[std::accumulate(root.begin(), root.end(), std::int64_t{0})];
    // Exactly n_k exponents are >= k, where n_k counts roots of height k.
    std::int64_t order = 1;
    for (const auto& [k, count] : by_height) {
        const auto next = by_height.find(k + 1);
        const std::int64_t next_count = next == by_height.end() ? 0 : next->second;
        for (std::int64_t i = 0; i < count - next_count; ++i) order *= k + 1;
    }
    return order;
}

} // namespace detail

/// Reflection closure from the simple roots.
inline RootSystem build_root_system(char family, int rank)
{
    if (family >= 'a' && family <= 'z') family = static_cast<char>(family - 'a' + 'A');
    RootSystem rs;
    rs.family = family;
    rs.rank = rank;
    rs.bilinear = detail::gram_for(family, rank);
    const auto n = static_cast<std::size_t>(rank);
    rs.d.resize(n);
    rs.cartan.assign(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        rs.d[i] = rs.bilinear[i][i] / 2;
        for (std::size_t j = 0; j < n; ++j) rs.cartan[i][j] = 2 * rs.bilinear[i][j] / rs.bilinear[i][i];
    }

    std::set<Root> seen;
    std::vector<Root> frontier;
    for (std::size_t i = 0; i < n; ++i) {
        Root a(n, 0);
        a[i] = 1;
        seen.insert(a);
        frontier.push_back(a);
    }
    while (!frontier.empty()) {
        std::vector<Root> next;
        for (const auto& beta : frontier) {
            for (std::size_t i = 0; i < n; ++i) {
                // <beta, alpha_i^vee> = sum_j a_ij beta_j by symmetry of d_i a_ij.
                std::int64_t pairing = 0;
                for (std::size_t j = 0; j < n; ++j) pairing += rs.cartan[i][j] * beta[j];
                Root image = beta;
                image[i] -= pairing;
                if (std::all_of(image.begin(), image.end(), [](std::int64_t c) { return c >= 0; })
                    && seen.insert(image).second)
                    next.push_back(image);
            }
        }
        frontier = std::move(next);
    }
    rs.positive_roots.assign(seen.begin(), seen.end());
    std::sort(rs.positive_roots.begin(), rs.positive_roots.end(), [](const Root& x, const Root& y) {
        const auto hx = std::accumulate(x.begin(), x.end(), std::int64_t{0});
        const auto hy = std::accumulate(y.begin(), y.end(), std::int64_t{0});
        return hx != hy ? hx < hy : x > y;
    });

    // (rho | alpha_i) = d_i, i.e. bilinear * rho = d.
    const auto inv = detail::inverse(rs.bilinear);
    rs.rho_coords.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rs.rho_coords[i] += inv[i][j] * rs.d[j];
    return rs;
}

/// Orbit enumeration of rho is used while |W| stays at or below this size.
inline constexpr std::int64_t weyl_orbit_cap = 200000;

inline LieConstants constants(const RootSystem& rs)
{
    LieConstants c;
    const auto n = static_cast<std::size_t>(rs.rank);
    c.d = *std::max_element(rs.d.begin(), rs.d.end());

    std::int64_t max_short = 0, max_any = 0;
    for (const auto& root : rs.positive_roots) {
        const std::int64_t pr = rs.pairing_with_rho(root);
        max_any = std::max(max_any, pr);
        if (rs.form(root, root) == 2) max_short = std::max(max_short, pr);
    }
    c.h = 1 + max_short;
    c.h_dual = 1 + max_any / c.d;

    // Fundamental weights have Gram matrix diag(d) B^-1 diag(d).
    const auto inv = detail::inverse(rs.bilinear);
    std::int64_t D = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational w = inv[i][j] * rs.d[i] * rs.d[j];
            D = std::lcm(D, w.denominator());
        }
    c.D = D;
    c.det_cartan = detail::determinant(rs.cartan);

    const std::int64_t expected = detail::weyl_order_from_heights(rs);
    if (expected > weyl_orbit_cap) {
        c.weyl_order = expected;
        return c;
    }
    // rho has fundamental-weight coordinates (1, ..., 1); s_i subtracts m_i alpha_i,
    // and alpha_i has fundamental-weight coordinates a_ji.
    std::set<std::vector<std::int64_t>> orbit;
    std::vector<std::vector<std::int64_t>> stack{std::vector<std::int64_t>(n, 1)};
    orbit.insert(stack.front());
    while (!stack.empty()) {
        const auto m = stack.back();
        stack.pop_back();
        for (std::size_t i = 0; i < n; ++i) {
            auto image = m;
            for (std::size_t j = 0; j < n; ++j) image[j] -= m[i] * rs.cartan[j][i];
            if (orbit.insert(image).second) stack.push_back(std::move(image));
        }
    }
    c.weyl_order = static_cast<std::int64_t>(orbit.size());
    return c;
}

/// Largest number of lattice points gauss_sum will enumerate.
inline constexpr std::int64_t gauss_term_cap = std::int64_t{1} << 26;

/// e(mu) = (mu|mu)/2 + (mu|rho) for mu in simple-root coordinates.
inline std::int64_t gauss_exponent(const RootSystem& rs, const Root& mu)
{
    std::int64_t e = 0;
    const auto n = mu.size();
    for (std::size_t i = 0; i < n; ++i) {
        e += mu[i] * mu[i] * rs.d[i] + mu[i] * rs.d[i];
        for (std::size_t j = i + 1; j < n; ++j) e += mu[i] * mu[j] * rs.bilinear[i][j];
    }
    return e;
}

/// Sum over mu in Y / rY of xi^((|mu + rho|^2 - |rho|^2) / 2).
inline cyclo::CyclotomicInt gauss_sum(const RootSystem& rs, int r)
{
    if (r < 3 || !is_prime(r)) throw std::invalid_argument("gauss_sum: r must be an odd prime");
    std::int64_t terms = 1;
    for (int i = 0; i < rs.rank; ++i) {
        terms *= r;
        if (terms > gauss_term_cap) throw std::length_error("gauss_sum: r^rank exceeds the enumeration cap");
    }
    std::vector<BigInt> hist(static_cast<std::size_t>(r));
    Root mu(static_cast<std::size_t>(rs.rank), 0);
    for (std::int64_t t = 0; t < terms; ++t) {
        ++hist[static_cast<std::size_t>(mod_floor(gauss_exponent(rs, mu), r))];
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (++mu[i] < r) break;
            mu[i] = 0;
        }
    }
    return cyclo::CyclotomicInt(r, std::move(hist));
}

/// r^(rank - rank_r(bilinear)): the size of the kernel of the form mod r.
inline BigInt kernel_size(const RootSystem& rs, std::int64_t r)
{
    if (!is_prime(r)) throw std::invalid_argument("kernel_size: r must be prime");
    const auto n = static_cast<std::size_t>(rs.rank);
    IntMatrix a = rs.bilinear;
    for (auto& row : a)
        for (auto& x : row) x = mod_floor(x, r);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < n; ++col) {
        std::size_t piv = rank;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(a[piv], a[rank]);
        const std::int64_t inv = *mod_inverse(a[rank][col], r);
        for (auto& x : a[rank]) x = mod_floor(x * inv, r);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == rank || a[row][col] == 0) continue;
            const std::int64_t f = a[row][col];
            for (std::size_t k = 0; k < n; ++k) a[row][k] = mod_floor(a[row][k] - f * a[rank][k], r);
        }
        ++rank;
    }
    return boost::multiprecision::pow(BigInt(r), static_cast<unsigned>(n - rank));
}

inline bool admissible_r(const RootSystem& rs, std::int64_t r)
{
    if (!is_prime(r)) return false;
    const LieConstants c = constants(rs);
    if (r <= c.d * c.h_dual) return false;
    return std::gcd(r, c.det_cartan * c.weyl_order) == 1;
}

/// F_{U+-} = gamma / prod_{alpha>0} (1 - xi^(alpha|rho)), conjugated for sign -1.
struct UnknotValue {
    cyclo::CyclotomicInt numerator;
    cyclo::CyclotomicInt denominator;
    /// The exact quotient when it lies in Z[xi].
    std::optional<cyclo::CyclotomicInt> quotient;
};

inline UnknotValue f_unknot(const RootSystem& rs, int r, int sign)
{
    if (sign != 1 && sign != -1) throw std::invalid_argument("f_unknot: sign must be +1 or -1");
    const cyclo::CyclotomicInt gamma = gauss_sum(rs, r);
    cyclo::CyclotomicInt denominator = cyclo::CyclotomicInt::constant(r, 1);
    // numerator * prod (unit inverses) / (1 - xi)^count
    cyclo::CyclotomicInt adjusted = gamma;
    std::size_t count = 0;
    for (const auto& root : rs.positive_roots) {
        const std::int64_t k = mod_floor(rs.pairing_with_rho(root), r);
        if (k == 0) throw std::domain_error("f_unknot: denominator vanishes, (alpha|rho) divisible by r");
        denominator *= cyclo::one_minus_xi_pow(r, k);
        // (1 - xi^k) = (1 - xi) u with u = 1 + ... + xi^(k-1); u^-1 = sum_{j < k'} xi^(kj), k k' = 1 mod r.
        const std::int64_t kinv = *mod_inverse(k, r);
        cyclo::CyclotomicInt u_inv(r);
        for (std::int64_t j = 0; j < kinv; ++j) u_inv += cyclo::CyclotomicInt::monomial(r, k * j);
        adjusted *= u_inv;
        ++count;
    }
    UnknotValue out{gamma, denominator, std::nullopt};
    try {
        for (std::size_t i = 0; i < count; ++i) adjusted = adjusted.divide_by_one_minus_xi();
        out.quotient = adjusted;
    } catch (const cyclo::NotDivisible&) {
    }
    if (sign < 0) {
        out.numerator = out.numerator.conjugate();
        out.denominator = out.denominator.conjugate();
        if (out.quotient) out.quotient = out.quotient->conjugate();
    }
    return out;
}

inline bool verify_gauss_magnitude(const RootSystem& rs, int r, double tol)
{
    const std::complex<double> g = gauss_sum(rs, r).complex_eval();
    const double expected = kernel_size(rs, r).convert_to<double>() * std::pow(static_cast<double>(r), rs.rank);
    return std::abs(std::norm(g) - expected) < tol || std::abs(g) < tol;
}

struct RatioResult {
    bool ok = false;
    bool indeterminate = false;
    int omega = 0;
    /// ((r+1)^2 + 2) |rho|^2, the power of xi^-1 in the ratio.
    std::int64_t exponent = 0;
};

/// Checks F_{U+} / F_{U-} = xi^(-((r+1)^2+2)|rho|^2) omega with omega = +-1.
inline RatioResult verify_ratio(const RootSystem& rs, int r, double tol)
{
    if (r < 3 || !is_prime(r)) throw std::invalid_argument("verify_ratio: r must be an odd prime");
    const LieConstants c = constants(rs);
    if (r <= c.d * c.h_dual)
        throw std::invalid_argument("verify_ratio: r must exceed d*h_dual = " + std::to_string(c.d * c.h_dual));
    const Rational e = Rational((r + 1) * (r + 1) + 2) * rs.rho_norm_squared();
    if (e.denominator() != 1)
        throw std::domain_error("verify_ratio: ((r+1)^2+2)|rho|^2 is not an integer for " + rs.name());
    RatioResult out;
    out.exponent = e.numerator();

    const UnknotValue plus = f_unknot(rs, r, 1);
    const std::complex<double> f_plus = plus.numerator.complex_eval() / plus.denominator.complex_eval();
    const std::complex<double> f_minus = std::conj(f_plus);
    if (std::abs(f_minus) < tol || std::abs(f_plus) < tol) {
        out.indeterminate = true;
        return out;
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod_floor(out.exponent, r)) / r;
    const std::complex<double> w = f_plus / f_minus * std::polar(1.0, angle);
    if (std::abs(w - 1.0) < tol) {
        out.ok = true;
        out.omega = 1;
    } else if (std::abs(w + 1.0) < tol) {
        out.ok = true;
        out.omega = -1;
    }
    return out;
}

struct GaussReport {
    cyclo::CyclotomicInt gamma;
    BigInt ker_size;
    BigInt group_size;
    bool magnitude_ok = false;
    bool ratio_ok = false;
    int omega_sign = 0;

    friend bool operator==(const GaussReport&, const GaussReport&) = default;
};

inline GaussReport gauss_report(const RootSystem& rs, int r, double tol = 1e-9)
{
    GaussReport rep{gauss_sum(rs, r), kernel_size(rs, r), boost::multiprecision::pow(BigInt(r), static_cast<unsigned>(rs.rank)),
                    false, false, 0};
    rep.magnitude_ok = verify_gauss_magnitude(rs, r, tol);
    const LieConstants c = constants(rs);
    if (r > c.d * c.h_dual) {
        const RatioResult ratio = verify_ratio(rs, r, tol);
        rep.ratio_ok = ratio.ok;
        rep.omega_sign = ratio.omega;
    }
    return rep;
}

} // namespace qperiod::lie
