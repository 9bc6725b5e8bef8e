#pragma once

// Exact arithmetic in Z[xi], xi a primitive r-th root of unity, r an odd prime.
//
// Elements are stored in the basis 1, xi, ..., xi^(r-2). Because the minimal
// polynomial of xi is 1 + T + ... + T^(r-1), this basis gives unique
// coordinates, so equality and divisibility are coefficientwise.

#include "fp_poly.hpp"
#include "number_theory.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qperiod::cyclo {

/// Raised when an exact division in Z[xi] has no solution.
class NotDivisible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class CyclotomicInt {
public:
    /// The zero element of Z[xi_r].
    explicit CyclotomicInt(int r) : r_(checked_order(r)), coeffs_(static_cast<std::size_t>(r - 1)) {}

    /// Builds from r-1 canonical coordinates, or from r coordinates over all
    /// powers 1, ..., xi^(r-1) which are then canonicalized.
    CyclotomicInt(int r, std::vector<BigInt> coeffs) : r_(checked_order(r))
    {
        const auto n = static_cast<std::size_t>(r);
        if (coeffs.size() == n) {
            coeffs_ = canonicalize(std::move(coeffs));
        } else if (coeffs.size() == n - 1) {
            coeffs_ = std::move(coeffs);
        } else {
            throw std::invalid_argument("CyclotomicInt: expected " + std::to_string(r - 1) + " or "
                                        + std::to_string(r) + " coefficients, got "
                                        + std::to_string(coeffs.size()));
        }
    }

    static CyclotomicInt constant(int r, const BigInt& c)
    {
        CyclotomicInt x(r);
        x.coeffs_[0] = c;
        return x;
    }

    /// c * xi^k for any integer k.
    static CyclotomicInt monomial(int r, std::int64_t k, const BigInt& c = 1)
    {
        std::vector<BigInt> full(static_cast<std::size_t>(checked_order(r)));
        full[static_cast<std::size_t>(mod_floor(k, r))] = c;
        return CyclotomicInt(r, std::move(full));
    }

    /// 1 + xi + ... + xi^(n-1); zero for n = 0.
    static CyclotomicInt geometric(int r, std::int64_t n)
    {
        if (n < 0) throw std::invalid_argument("geometric: negative length");
        std::vector<BigInt> full(static_cast<std::size_t>(checked_order(r)));
        for (std::int64_t k = 0; k < n; ++k) full[static_cast<std::size_t>(k % r)] += 1;
        return CyclotomicInt(r, std::move(full));
    }

    int order() const noexcept { return r_; }
    const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }

    bool is_zero() const
    {
        for (const auto& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    friend bool operator==(const CyclotomicInt&, const CyclotomicInt&) = default;

    CyclotomicInt& operator+=(const CyclotomicInt& y)
    {
        require_same_order(y);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += y.coeffs_[i];
        return *this;
    }

    CyclotomicInt& operator-=(const CyclotomicInt& y)
    {
        require_same_order(y);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= y.coeffs_[i];
        return *this;
    }

    CyclotomicInt& operator*=(const BigInt& c)
    {
        for (auto& x : coeffs_) x *= c;
        return *this;
    }

    friend CyclotomicInt operator+(CyclotomicInt x, const CyclotomicInt& y) { return x += y; }
    friend CyclotomicInt operator-(CyclotomicInt x, const CyclotomicInt& y) { return x -= y; }
    friend CyclotomicInt operator*(CyclotomicInt x, const BigInt& c) { return x *= c; }
    friend CyclotomicInt operator*(const BigInt& c, CyclotomicInt x) { return x *= c; }

    friend CyclotomicInt operator-(CyclotomicInt x)
    {
        for (auto& c : x.coeffs_) c = -c;
        return x;
    }

    friend CyclotomicInt operator*(const CyclotomicInt& x, const CyclotomicInt& y)
    {
        x.require_same_order(y);
        const auto n = static_cast<std::size_t>(x.r_);
        std::vector<BigInt> full(n);
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
            if (x.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < y.coeffs_.size(); ++j) {
                if (y.coeffs_[j] == 0) continue;
                full[(i + j) % n] += x.coeffs_[i] * y.coeffs_[j];
            }
        }
        return CyclotomicInt(x.r_, std::move(full));
    }

    CyclotomicInt& operator*=(const CyclotomicInt& y) { return *this = *this * y; }

    /// x^e for e >= 0.
    CyclotomicInt pow(unsigned e) const
    {
        CyclotomicInt result = constant(r_, 1);
        CyclotomicInt base = *this;
        while (e > 0) {
            if (e & 1u) result *= base;
            e >>= 1u;
            if (e > 0) base *= base;
        }
        return result;
    }

    /// Image under xi -> xi^j, j coprime to r.
    CyclotomicInt galois(std::int64_t j) const
    {
        const std::int64_t jr = mod_floor(j, r_);
        if (jr == 0) throw std::invalid_argument("galois: exponent must be coprime to r");
        std::vector<BigInt> full(static_cast<std::size_t>(r_));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            full[static_cast<std::size_t>((static_cast<std::int64_t>(i) * jr) % r_)] = coeffs_[i];
        return CyclotomicInt(r_, std::move(full));
    }

    /// Complex conjugation, xi -> xi^-1.
    CyclotomicInt conjugate() const { return galois(r_ - 1); }

    /// Reduction Z[xi] -> Z[xi]/(1 - xi) = Z/r, i.e. xi -> 1, in [0, r).
    std::int64_t epsilon_residue() const { return mod_floor(coefficient_sum(), r_); }

    /// Membership in m Z[xi].
    bool divisible_by_int(const BigInt& m) const
    {
        if (m <= 0) throw std::invalid_argument("divisible_by_int: modulus must be positive");
        for (const auto& c : coeffs_)
            if (c % m != 0) return false;
        return true;
    }

    /// Exact quotient by m; throws NotDivisible unless divisible_by_int(m).
    CyclotomicInt divide_exact(const BigInt& m) const
    {
        if (!divisible_by_int(m)) throw NotDivisible("divide_exact: element not divisible by integer");
        CyclotomicInt q = *this;
        for (auto& c : q.coeffs_) c /= m;
        return q;
    }

    /// The unique w with (1 - xi) w = x; requires epsilon_residue() == 0.
    ///
    /// Subtracting c = x(1)/r copies of 1 + T + ... + T^(r-1) gives a lift
    /// with a root at T = 1, which then divides by (1 - T) over the integers
    /// via prefix sums. The quotient has degree r - 2, already canonical.
    CyclotomicInt divide_by_one_minus_xi() const
    {
        const BigInt sum = coefficient_sum();
        if (sum % r_ != 0) throw NotDivisible("divide_by_one_minus_xi: element is not in the ideal (1 - xi)");
        const BigInt c = sum / r_;
        CyclotomicInt w(r_);
        BigInt acc = 0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            acc += coeffs_[k] - c;
            w.coeffs_[k] = acc;
        }
        return w;
    }

    /// sum_i coeffs[i] * exp(2 pi i * i * which_root / r).
    std::complex<double> complex_eval(std::int64_t which_root = 1) const
    {
        const std::int64_t j = mod_floor(which_root, r_);
        if (j == 0) throw std::invalid_argument("complex_eval: root index must be coprime to r");
        std::complex<double> z{};
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            const double angle =
                2.0 * std::numbers::pi * static_cast<double>((static_cast<std::int64_t>(i) * j) % r_) / r_;
            z += coeffs_[i].convert_to<double>() * std::polar(1.0, angle);
        }
        return z;
    }

private:
    static int checked_order(int r)
    {
        if (r < 3 || !is_prime(r))
            throw std::invalid_argument("cyclotomic order r must be an odd prime, got " + std::to_string(r));
        return r;
    }

    /// Rewrites xi^(r-1) = -(1 + xi + ... + xi^(r-2)).
    static std::vector<BigInt> canonicalize(std::vector<BigInt> full)
    {
        const BigInt top = full.back();
        full.pop_back();
        if (top != 0)
            for (auto& c : full) c -= top;
        return full;
    }

    BigInt coefficient_sum() const
    {
        BigInt s = 0;
        for (const auto& c : coeffs_) s += c;
        return s;
    }

    void require_same_order(const CyclotomicInt& y) const
    {
        if (r_ != y.r_)
            throw std::invalid_argument("cyclotomic orders differ: " + std::to_string(r_) + " vs "
                                        + std::to_string(y.r_));
    }

    int r_;
    std::vector<BigInt> coeffs_;
};

/// Element from a power -> coefficient map; powers are arbitrary integers.
inline CyclotomicInt make(int r, const std::map<std::int64_t, BigInt>& monomials)
{
    CyclotomicInt x(r);
    for (const auto& [k, c] : monomials) x += CyclotomicInt::monomial(r, k, c);
    return x;
}

inline CyclotomicInt one_minus_xi_pow(int r, std::int64_t k)
{
    return CyclotomicInt::constant(r, 1) - CyclotomicInt::monomial(r, k);
}

/// x = sum_{n=0}^{r-2} a[n] (1 - xi)^n + remainder (1 - xi)^(r-1), a[n] in [0, r).
struct OhtsukiExpansion {
    int r;
    std::vector<std::int64_t> a;
    CyclotomicInt remainder;

    friend bool operator==(const OhtsukiExpansion&, const OhtsukiExpansion&) = default;

    CyclotomicInt reconstruct() const
    {
        const CyclotomicInt pi = one_minus_xi_pow(r, 1);
        // Horner in (1 - xi), innermost term is the remainder.
        CyclotomicInt acc = remainder;
        for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * pi + CyclotomicInt::constant(r, *it);
        return acc;
    }
};

inline OhtsukiExpansion ohtsuki_expansion(const CyclotomicInt& x)
{
    const int r = x.order();
    OhtsukiExpansion out{r, {}, x};
    out.a.reserve(static_cast<std::size_t>(r - 1));
    for (int n = 0; n < r - 1; ++n) {
        const std::int64_t an = out.remainder.epsilon_residue();
        out.a.push_back(an);
        out.remainder = (out.remainder - CyclotomicInt::constant(r, an)).divide_by_one_minus_xi();
    }
    return out;
}

inline FpPoly reduce_to_field(const CyclotomicInt& x, std::int64_t p)
{
    return FpPoly(p, std::span<const BigInt>(x.coeffs()));
}

/// Tests x in the ideal (p, gen) of Z[xi].
///
/// Modulo p the ring is F_p[T]/(Phi_r), a principal ideal ring, where the
/// ideal generated by gen equals the one generated by gcd(gen, Phi_r).
inline bool ideal_member(const CyclotomicInt& x, std::int64_t p, const CyclotomicInt& gen)
{
    if (!is_prime(p)) throw std::invalid_argument("ideal_member: p must be prime");
    if (x.order() != gen.order()) throw std::invalid_argument("ideal_member: cyclotomic orders differ");
    const std::vector<std::int64_t> phi(static_cast<std::size_t>(x.order()), 1);
    const FpPoly g = FpPoly::gcd(reduce_to_field(gen, p), FpPoly(p, std::span<const std::int64_t>(phi)));
    return g.divides(reduce_to_field(x, p));
}

} // namespace qperiod::cyclo
