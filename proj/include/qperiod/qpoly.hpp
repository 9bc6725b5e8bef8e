#pragma once

// Laurent polynomials over Z in a variable with half-integer exponents.
//
// A term c * t^(k/2) is stored under the doubled exponent k. The variable
// name (q, t, A) is a rendering concern and is not part of the value.

#include "fp_poly.hpp"
#include "number_theory.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qperiod::qpoly {

class HalfLaurent {
public:
    using Terms = std::map<std::int64_t, BigInt>;

    HalfLaurent() = default;

    explicit HalfLaurent(const Terms& terms)
    {
        for (const auto& [k, c] : terms) add_term(k, c);
    }

    static HalfLaurent constant(const BigInt& c) { return monomial(0, c); }

    /// c * x^(doubled / 2).
    static HalfLaurent monomial(std::int64_t doubled, const BigInt& c = 1)
    {
        HalfLaurent f;
        f.add_term(doubled, c);
        return f;
    }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    BigInt coefficient(std::int64_t doubled) const
    {
        auto it = terms_.find(doubled);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    /// True when every exponent is an integer.
    bool integral_exponents() const
    {
        for (const auto& [k, c] : terms_)
            if (k % 2 != 0) return false;
        return true;
    }

    std::int64_t min_doubled() const { return require_nonzero().terms_.begin()->first; }
    std::int64_t max_doubled() const { return require_nonzero().terms_.rbegin()->first; }

    /// Sum of coefficients, the value at x = 1.
    BigInt coefficient_sum() const
    {
        BigInt s = 0;
        for (const auto& [k, c] : terms_) s += c;
        return s;
    }

    void add_term(std::int64_t doubled, const BigInt& c)
    {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(doubled, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend bool operator==(const HalfLaurent&, const HalfLaurent&) = default;

    HalfLaurent& operator+=(const HalfLaurent& g)
    {
        for (const auto& [k, c] : g.terms_) add_term(k, c);
        return *this;
    }

    HalfLaurent& operator-=(const HalfLaurent& g)
    {
        for (const auto& [k, c] : g.terms_) add_term(k, -c);
        return *this;
    }

    friend HalfLaurent operator+(HalfLaurent f, const HalfLaurent& g) { return f += g; }
    friend HalfLaurent operator-(HalfLaurent f, const HalfLaurent& g) { return f -= g; }

    friend HalfLaurent operator-(HalfLaurent f)
    {
        for (auto& [k, c] : f.terms_) c = -c;
        return f;
    }

    friend HalfLaurent operator*(const HalfLaurent& f, const HalfLaurent& g)
    {
        HalfLaurent h;
        for (const auto& [a, x] : f.terms_)
            for (const auto& [b, y] : g.terms_) h.add_term(a + b, x * y);
        return h;
    }

    HalfLaurent& operator*=(const HalfLaurent& g) { return *this = *this * g; }

    friend HalfLaurent operator*(HalfLaurent f, const BigInt& c) { return f.scalar_mul(c); }
    friend HalfLaurent operator*(const BigInt& c, HalfLaurent f) { return f.scalar_mul(c); }

    HalfLaurent scalar_mul(const BigInt& c) const
    {
        if (c == 0) return {};
        HalfLaurent f = *this;
        for (auto& [k, x] : f.terms_) x *= c;
        return f;
    }

    HalfLaurent pow(unsigned e) const
    {
        HalfLaurent result = constant(1);
        HalfLaurent base = *this;
        while (e > 0) {
            if (e & 1u) result *= base;
            e >>= 1u;
            if (e > 0) base *= base;
        }
        return result;
    }

    /// Multiplication by x^(doubled / 2).
    HalfLaurent shifted(std::int64_t doubled) const
    {
        HalfLaurent f;
        for (const auto& [k, c] : terms_) f.terms_.emplace(k + doubled, c);
        return f;
    }

    /// x -> x^-1.
    HalfLaurent mirror() const
    {
        HalfLaurent f;
        for (const auto& [k, c] : terms_) f.terms_.emplace(-k, c);
        return f;
    }

    /// x^(1/2) -> -y^(-1/2): x^(k/2) maps to (-1)^k y^(-k/2). This is an
    /// involution, so it also serves as the inverse substitution.
    HalfLaurent substitute_neg_inv_sqrt() const
    {
        HalfLaurent f;
        for (const auto& [k, c] : terms_) f.terms_.emplace(-k, (k % 2 == 0) ? c : BigInt(-c));
        return f;
    }

    /// Substitutes x -> x^m for a positive integer m.
    HalfLaurent dilate(std::int64_t m) const
    {
        if (m <= 0) throw std::invalid_argument("dilate: factor must be positive");
        HalfLaurent f;
        for (const auto& [k, c] : terms_) f.terms_.emplace(k * m, c);
        return f;
    }

private:
    const HalfLaurent& require_nonzero() const
    {
        if (terms_.empty()) throw std::domain_error("HalfLaurent: zero polynomial has no degree");
        return *this;
    }

    Terms terms_;
};

/// [n] = (q^(n/2) - q^(-n/2)) / (q^(1/2) - q^(-1/2)) = sum_{k=0}^{n-1} q^((n-1)/2 - k).
inline HalfLaurent quantum_integer(std::int64_t n)
{
    if (n < 0) throw std::invalid_argument("quantum_integer: n must be non-negative");
    HalfLaurent f;
    for (std::int64_t k = 0; k < n; ++k) f.add_term(n - 1 - 2 * k, 1);
    return f;
}

/// sum_{j=0}^{p-1} (-t)^j - t^((p-1)/2), for an odd prime p.
inline HalfLaurent eta(std::int64_t p)
{
    if (p == 2) throw std::invalid_argument("eta: p = 2 is excluded, the congruence needs an odd prime");
    if (!is_prime(p)) throw std::invalid_argument("eta: p must be an odd prime");
    HalfLaurent f;
    for (std::int64_t j = 0; j < p; ++j) f.add_term(2 * j, (j % 2 == 0) ? 1 : -1);
    f.add_term(p - 1, -1);
    return f;
}

/// Normal form of f modulo (p, g) in Z[x^(+-1/2)].
///
/// Works in s = x^(1/2), where the ring is Z[s, s^-1]. The generator is
/// shifted by a unit power of s to a polynomial G with G(0) != 0 mod p, so
/// s is invertible modulo G and every Laurent polynomial has a unique
/// representative of degree < deg G over F_p. The result carries that
/// representative with coefficients in [0, p) and keys equal to s-exponents.
/// f lies in the ideal iff the normal form is zero.
inline HalfLaurent reduce_mod(const HalfLaurent& f, std::int64_t p, const HalfLaurent& g)
{
    if (!is_prime(p)) throw std::invalid_argument("reduce_mod: p must be prime");
    if (g.is_zero()) throw std::invalid_argument("reduce_mod: generator must be nonzero");
    if (mod_floor(g.terms().rbegin()->second, p) == 0)
        throw std::invalid_argument("reduce_mod: leading coefficient of the generator is not invertible mod p");

    // Dense F_p image of s^-low * h, with low the lowest exponent surviving mod p.
    auto to_field = [p](const HalfLaurent& h, std::int64_t& low) {
        std::vector<std::int64_t> dense;
        bool have_low = false;
        low = 0;
        for (const auto& [k, c] : h.terms()) {
            if (mod_floor(c, p) == 0) continue;
            if (!have_low) {
                low = k;
                have_low = true;
            }
            dense.resize(static_cast<std::size_t>(k - low + 1), 0);
            dense[static_cast<std::size_t>(k - low)] = mod_floor(c, p);
        }
        return FpPoly(p, std::span<const std::int64_t>(dense));
    };

    std::int64_t g_low = 0, f_low = 0;
    const FpPoly gp = to_field(g, g_low);
    const FpPoly fp = to_field(f, f_low);
    FpPoly rem = fp.remainder(gp);
    if (!rem.is_zero() && f_low != 0) rem = (rem * gp.power_of_variable(f_low)).remainder(gp);

    HalfLaurent out;
    for (std::size_t i = 0; i < rem.coeffs().size(); ++i)
        out.add_term(static_cast<std::int64_t>(i), rem.coeffs()[i]);
    return out;
}

inline bool congruent_mod(const HalfLaurent& f, const HalfLaurent& h, std::int64_t p, const HalfLaurent& g)
{
    return reduce_mod(f - h, p, g).is_zero();
}

/// Reduces every coefficient into [0, p).
inline HalfLaurent coefficients_mod(const HalfLaurent& f, std::int64_t p)
{
    HalfLaurent out;
    for (const auto& [k, c] : f.terms()) out.add_term(k, mod_floor(c, p));
    return out;
}

/// q^(p/2) ([2]^p - [2]), the generator (p, [2]^p - [2]) with exponents cleared
/// to integers (p odd) or left half-integral (p = 2).
inline HalfLaurent quantum_two_generator(std::int64_t p)
{
    if (!is_prime(p)) throw std::invalid_argument("quantum_two_generator: p must be prime");
    const HalfLaurent two = quantum_integer(2);
    return (two.pow(static_cast<unsigned>(p)) - two).shifted(p);
}

/// Checks (t + 1) eta_p(t) == [q^(-p/2) ([2]^p - [2])] at sqrt(q) = -1/sqrt(t), mod p.
inline bool remark_identity_check(std::int64_t p)
{
    const HalfLaurent two = quantum_integer(2);
    const HalfLaurent lhs = (HalfLaurent::monomial(2) + HalfLaurent::constant(1)) * eta(p);
    const HalfLaurent rhs = (two.pow(static_cast<unsigned>(p)) - two).shifted(-p).substitute_neg_inv_sqrt();
    return coefficients_mod(lhs - rhs, p).is_zero();
}

} // namespace qperiod::qpoly
