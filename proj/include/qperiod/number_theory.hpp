#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qperiod {

using BigInt = boost::multiprecision::cpp_int;

/// Deterministic trial division; inputs in this library are small moduli.
constexpr bool is_prime(std::int64_t n) noexcept
{
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t k = 3; k * k <= n; k += 2)
        if (n % k == 0) return false;
    return true;
}

/// Representative of a mod m in [0, m).
constexpr std::int64_t mod_floor(std::int64_t a, std::int64_t m) noexcept
{
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t mod_floor(const BigInt& a, std::int64_t m)
{
    BigInt r = a % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
inline std::optional<std::int64_t> mod_inverse(std::int64_t a, std::int64_t m)
{
    std::int64_t old_r = mod_floor(a, m), r = m;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        old_r = std::exchange(r, old_r - q * r);
        old_s = std::exchange(s, old_s - q * s);
    }
    if (old_r != 1) return std::nullopt;
    return mod_floor(old_s, m);
}

constexpr std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t m) noexcept
{
    std::int64_t result = 1 % m;
    base = mod_floor(base, m);
    while (exp > 0) {
        if (exp & 1) result = static_cast<std::int64_t>((static_cast<__int128>(result) * base) % m);
        base = static_cast<std::int64_t>((static_cast<__int128>(base) * base) % m);
        exp >>= 1;
    }
    return result;
}

/// Prime factorization of |n| by trial division, ascending primes with multiplicities.
/// Zero and units factor as the empty list.
inline std::vector<std::pair<BigInt, int>> factorize(BigInt n)
{
    std::vector<std::pair<BigInt, int>> out;
    if (n < 0) n = -n;
    if (n < 2) return out;
    for (BigInt p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        int mult = 0;
        while (n % p == 0) {
            n /= p;
            ++mult;
        }
        if (mult > 0) out.emplace_back(p, mult);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::string to_string(const BigInt& x) { return x.str(); }

} // namespace qperiod
