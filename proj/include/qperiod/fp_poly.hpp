#pragma once

#include "number_theory.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace qperiod {

/// Dense univariate polynomial over the field with p elements.
/// coeffs[i] is the coefficient of T^i, kept in [0, p) with no trailing zeros.
class FpPoly {
public:
    explicit FpPoly(std::int64_t p) : p_(p)
    {
        if (!is_prime(p)) throw std::invalid_argument("FpPoly: modulus must be prime");
    }

    FpPoly(std::int64_t p, std::span<const std::int64_t> coeffs) : FpPoly(p)
    {
        coeffs_.reserve(coeffs.size());
        for (auto c : coeffs) coeffs_.push_back(mod_floor(c, p_));
        trim();
    }

    FpPoly(std::int64_t p, std::span<const BigInt> coeffs) : FpPoly(p)
    {
        coeffs_.reserve(coeffs.size());
        for (const auto& c : coeffs) coeffs_.push_back(mod_floor(c, p_));
        trim();
    }

    std::int64_t modulus() const noexcept { return p_; }
    const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::int64_t leading() const { return coeffs_.back(); }

    FpPoly remainder(const FpPoly& divisor) const
    {
        if (divisor.is_zero()) throw std::domain_error("FpPoly: division by zero polynomial");
        FpPoly rem = *this;
        const int dd = divisor.degree();
        const std::int64_t inv = *mod_inverse(divisor.leading(), p_);
        while (rem.degree() >= dd) {
            const int shift = rem.degree() - dd;
            const std::int64_t factor = mul(rem.leading(), inv);
            for (int i = 0; i <= dd; ++i) {
                auto& slot = rem.coeffs_[static_cast<std::size_t>(i + shift)];
                slot = mod_floor(slot - mul(factor, divisor.coeffs_[static_cast<std::size_t>(i)]), p_);
            }
            rem.trim();
        }
        return rem;
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    static FpPoly gcd(FpPoly a, FpPoly b)
    {
        while (!b.is_zero()) {
            FpPoly r = a.remainder(b);
            a = std::move(b);
            b = std::move(r);
        }
        a.make_monic();
        return a;
    }

    bool divides(const FpPoly& other) const
    {
        if (is_zero()) return other.is_zero();
        return other.remainder(*this).is_zero();
    }

    friend FpPoly operator*(const FpPoly& a, const FpPoly& b)
    {
        if (a.p_ != b.p_) throw std::invalid_argument("FpPoly: moduli differ");
        FpPoly out(a.p_);
        if (a.is_zero() || b.is_zero()) return out;
        out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                out.coeffs_[i + j] = (out.coeffs_[i + j] + a.mul(a.coeffs_[i], b.coeffs_[j])) % a.p_;
        out.trim();
        return out;
    }

    /// T^k modulo this polynomial, for k of either sign when T is invertible
    /// (nonzero constant term).
    FpPoly power_of_variable(std::int64_t k) const
    {
        if (is_zero()) throw std::domain_error("FpPoly: reduction by zero polynomial");
        FpPoly step(p_);
        if (k >= 0) {
            step.coeffs_ = {0, 1};
        } else {
            if (coeffs_.front() == 0) throw std::domain_error("FpPoly: variable is not invertible");
            // T * H(T) = G(T) - G(0), so T^-1 = -H(T) / G(0).
            const std::int64_t scale = mod_floor(-*mod_inverse(coeffs_.front(), p_), p_);
            step.coeffs_.assign(coeffs_.begin() + 1, coeffs_.end());
            for (auto& c : step.coeffs_) c = mul(c, scale);
            step.trim();
            k = -k;
        }
        FpPoly result(p_);
        result.coeffs_ = {1};
        result = result.remainder(*this);
        FpPoly base = step.remainder(*this);
        while (k > 0) {
            if (k & 1) result = (result * base).remainder(*this);
            k >>= 1;
            if (k > 0) base = (base * base).remainder(*this);
        }
        return result;
    }

    friend bool operator==(const FpPoly&, const FpPoly&) = default;

private:
    std::int64_t mul(std::int64_t a, std::int64_t b) const
    {
        return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % p_);
    }

    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    void make_monic()
    {
        if (is_zero()) return;
        const std::int64_t inv = *mod_inverse(leading(), p_);
        for (auto& c : coeffs_) c = mul(c, inv);
    }

    std::int64_t p_;
    std::vector<std::int64_t> coeffs_;
};

} // namespace qperiod
