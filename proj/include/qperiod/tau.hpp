#pragma once

// Closed-form sl2 invariants of the Poincare sphere and of Sigma(2,3,7), and the
// periodicity tests built on them.

#include "cyclo.hpp"
#include "liedata.hpp"
#include "number_theory.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qperiod::tau {

using cyclo::CyclotomicInt;

enum class ManifoldId { poincare, brieskorn_2_3_7, s3, custom };

inline std::string manifold_name(ManifoldId id)
{
    switch (id) {
    case ManifoldId::poincare: return "poincare";
    case ManifoldId::brieskorn_2_3_7: return "brieskorn237";
    case ManifoldId::s3: return "s3";
    case ManifoldId::custom: return "custom";
    }
    return "custom";
}

inline ManifoldId parse_manifold(const std::string& name)
{
    if (name == "poincare") return ManifoldId::poincare;
    if (name == "brieskorn237" || name == "brieskorn_2_3_7") return ManifoldId::brieskorn_2_3_7;
    if (name == "s3") return ManifoldId::s3;
    throw std::invalid_argument("unknown manifold '" + name + "' (expected poincare, brieskorn237 or s3)");
}

struct TauValue {
    ManifoldId manifold_id;
    int r;
    CyclotomicInt value;

    friend bool operator==(const TauValue&, const TauValue&) = default;
};

namespace detail {

inline void require_sl2_order(int r, const char* who)
{
    if (!is_prime(r)) throw std::invalid_argument(std::string(who) + ": r must be prime, got " + std::to_string(r));
    if (r < 5) throw std::invalid_argument(std::string(who) + ": r must be at least 5 for the sl2 closed forms");
}

/// (1 - xi)^-1 sum_{n=0}^{terms-1} xi^front(n) (1 - xi^(n+1)) ... (1 - xi^(2n+1)).
/// The first factor is replaced by 1 + xi + ... + xi^n, which is the exact
/// quotient. Every term with n >= r - 1 vanishes, so terms = r - 1 suffices.
template <class Front>
CyclotomicInt trefoil_surgery_series(int r, std::int64_t terms, Front front)
{
    CyclotomicInt sum(r);
    for (std::int64_t n = 0; n < terms; ++n) {
        CyclotomicInt term = CyclotomicInt::monomial(r, front(n)) * CyclotomicInt::geometric(r, n + 1);
        for (std::int64_t k = n + 2; k <= 2 * n + 1 && !term.is_zero(); ++k) term *= cyclo::one_minus_xi_pow(r, k);
        sum += term;
    }
    return sum;
}

} // namespace detail

/// Partial sums with an explicit number of terms; used to show the tail is zero.
inline CyclotomicInt poincare_series(int r, std::int64_t terms)
{
    return detail::trefoil_surgery_series(r, terms, [](std::int64_t n) { return n; });
}

inline CyclotomicInt brieskorn237_series(int r, std::int64_t terms)
{
    return detail::trefoil_surgery_series(r, terms, [](std::int64_t n) { return -n * (n + 2); });
}

inline TauValue tau_poincare(int r)
{
    detail::require_sl2_order(r, "tau_poincare");
    return {ManifoldId::poincare, r, poincare_series(r, r - 1)};
}

inline TauValue tau_brieskorn237(int r)
{
    detail::require_sl2_order(r, "tau_brieskorn237");
    return {ManifoldId::brieskorn_2_3_7, r, brieskorn237_series(r, r - 1)};
}

inline TauValue tau_s3(int r) { return {ManifoldId::s3, r, CyclotomicInt::constant(r, 1)}; }

inline TauValue tau_value(ManifoldId id, int r)
{
    switch (id) {
    case ManifoldId::poincare: return tau_poincare(r);
    case ManifoldId::brieskorn_2_3_7: return tau_brieskorn237(r);
    case ManifoldId::s3: return tau_s3(r);
    case ManifoldId::custom: break;
    }
    throw std::invalid_argument("tau_value: no closed form for a custom manifold");
}

/// xi^v conj(x).
inline CyclotomicInt twisted_conjugate(const CyclotomicInt& x, std::int64_t v)
{
    return CyclotomicInt::monomial(x.order(), v) * x.conjugate();
}

/// (n, a_n) for n = 0 .. depth.
using CoeffTable = std::vector<std::pair<int, std::int64_t>>;

inline CoeffTable coeff_table(const CyclotomicInt& x, int depth)
{
    if (depth < 0 || depth > x.order() - 2)
        throw std::invalid_argument("coeff_table: depth must lie in [0, r-2] = [0, " + std::to_string(x.order() - 2) + "]");
    const auto expansion = cyclo::ohtsuki_expansion(x);
    CoeffTable out;
    for (int n = 0; n <= depth; ++n) out.emplace_back(n, expansion.a[static_cast<std::size_t>(n)]);
    return out;
}

// ---------------------------------------------------------------------------
// Symmetry obstruction

enum class Verdict { obstructed, not_obstructed, inadmissible_r };

inline std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::obstructed: return "obstructed";
    case Verdict::not_obstructed: return "not_obstructed";
    case Verdict::inadmissible_r: return "inadmissible_r";
    }
    return "inadmissible_r";
}

inline Verdict parse_verdict(const std::string& s)
{
    if (s == "obstructed") return Verdict::obstructed;
    if (s == "not_obstructed") return Verdict::not_obstructed;
    if (s == "inadmissible_r") return Verdict::inadmissible_r;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

struct TwistRow {
    std::int64_t v;
    CoeffTable a;

    friend bool operator==(const TwistRow&, const TwistRow&) = default;
};

struct ObstructionReport {
    std::string manifold = "custom";
    int r = 0;
    std::vector<std::int64_t> admissible_v;
    /// Full expansion table of the tested element.
    CoeffTable a_table;
    /// Expansion tables of xi^v conj(x), one per v in [0, r).
    std::vector<TwistRow> twisted;
    Verdict verdict = Verdict::inadmissible_r;

    friend bool operator==(const ObstructionReport&, const ObstructionReport&) = default;
};

/// Searches v in [0, r) with x == xi^v conj(x) mod r Z[xi]. No such v means
/// the manifold cannot be r-periodic.
inline ObstructionReport obstruction_test(const CyclotomicInt& x, const lie::RootSystem& rs)
{
    const int r = x.order();
    ObstructionReport rep;
    rep.r = r;
    rep.a_table = coeff_table(x, r - 2);
    if (!lie::admissible_r(rs, r)) {
        rep.verdict = Verdict::inadmissible_r;
        return rep;
    }
    for (std::int64_t v = 0; v < r; ++v) {
        const CyclotomicInt t = twisted_conjugate(x, v);
        rep.twisted.push_back({v, coeff_table(t, r - 2)});
        if ((x - t).divisible_by_int(r)) rep.admissible_v.push_back(v);
    }
    rep.verdict = rep.admissible_v.empty() ? Verdict::obstructed : Verdict::not_obstructed;
    return rep;
}

// ---------------------------------------------------------------------------
// Quotient congruence

/// (xi + xi^-1)^p - (xi + xi^-1).
inline CyclotomicInt quotient_generator(int r, std::int64_t p)
{
    const CyclotomicInt s = CyclotomicInt::monomial(r, 1) + CyclotomicInt::monomial(r, -1);
    return s.pow(static_cast<unsigned>(p)) - s;
}

/// The u in [0, 2r) with xM - (-xi)^u xM'^p in (p, (xi + xi^-1)^p - (xi + xi^-1)).
///
/// Membership is decided in Z[xi]. An empty result is evidence, not proof, that
/// M is not a p-fold cyclic branched cover of M': the congruence proper lives
/// in a larger ring where r is inverted.
inline std::vector<std::int64_t> quotient_congruence_test(const CyclotomicInt& x_m, const CyclotomicInt& x_quotient,
                                                         std::int64_t p, const lie::RootSystem& rs)
{
    const int r = x_m.order();
    if (x_quotient.order() != r) throw std::invalid_argument("quotient_congruence_test: cyclotomic orders differ");
    if (!is_prime(p)) throw std::invalid_argument("quotient_congruence_test: p must be prime");
    const lie::LieConstants c = lie::constants(rs);
    if (std::gcd(p, static_cast<std::int64_t>(r) * c.weyl_order) != 1)
        throw std::invalid_argument("quotient_congruence_test: p must not divide r|W| = "
                                    + std::to_string(static_cast<std::int64_t>(r) * c.weyl_order));
    const CyclotomicInt gen = quotient_generator(r, p);
    const CyclotomicInt power = x_quotient.pow(static_cast<unsigned>(p));
    std::vector<std::int64_t> out;
    for (std::int64_t u = 0; u < 2 * r; ++u) {
        const CyclotomicInt unit = CyclotomicInt::monomial(r, u, u % 2 == 0 ? 1 : -1);
        if (cyclo::ideal_member(x_m - unit * power, p, gen)) out.push_back(u);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CRT lifting and discriminants

/// Symmetric representative in (-M/2, M/2] of the residues, M the product of
/// the moduli. With a bound B the lift is certified only when M > 2B.
inline BigInt crt_lift(const std::vector<std::pair<std::int64_t, std::int64_t>>& residues,
                       std::optional<BigInt> bound = std::nullopt)
{
    if (residues.empty()) throw std::invalid_argument("crt_lift: no residues");
    BigInt x = 0, m = 1;
    for (const auto& [p, a] : residues) {
        if (p < 2) throw std::invalid_argument("crt_lift: moduli must be at least 2");
        const std::int64_t m_mod_p = mod_floor(m, p);
        const auto inv = mod_inverse(m_mod_p, p);
        if (!inv) throw std::invalid_argument("crt_lift: moduli must be pairwise coprime");
        // x + m k = a mod p
        const std::int64_t k = mod_floor((BigInt(a) - x) * *inv, p);
        x += m * k;
        m *= p;
    }
    if (bound && m <= 2 * *bound)
        throw std::invalid_argument("crt_lift: modulus product " + to_string(m) + " does not exceed twice the bound "
                                    + to_string(*bound));
    if (2 * x > m) x -= m;
    return x;
}

struct DiscriminantRow {
    int r;
    std::int64_t a0, a1, v, a3, a3_twisted, delta;

    friend bool operator==(const DiscriminantRow&, const DiscriminantRow&) = default;
};

struct DiscriminantReport {
    std::string manifold;
    std::string candidate_v_rule = "v = -2 a1 / a0 mod r";
    std::vector<DiscriminantRow> residues;
    std::vector<int> dropped;
    BigInt modulus = 1;
    BigInt lifted = 0;
    std::vector<std::pair<BigInt, int>> factorization;

    friend bool operator==(const DiscriminantReport&, const DiscriminantReport&) = default;
};

/// delta(r) = a3(tau) - a3(xi^v conj tau) at the first-order twist v, lifted
/// over the given primes and factorised. A prime period r above 4 must divide
/// the lift.
inline DiscriminantReport period_discriminant(ManifoldId id, const std::vector<int>& primes)
{
    if (primes.empty()) throw std::invalid_argument("period_discriminant: empty prime list");
    DiscriminantReport rep;
    rep.manifold = manifold_name(id);
    std::set<int> seen;
    std::vector<std::pair<std::int64_t, std::int64_t>> lift_input;
    for (int r : primes) {
        detail::require_sl2_order(r, "period_discriminant");
        if (!seen.insert(r).second) throw std::invalid_argument("period_discriminant: repeated prime " + std::to_string(r));
        const CyclotomicInt x = tau_value(id, r).value;
        const auto a = cyclo::ohtsuki_expansion(x).a;
        const auto inv = mod_inverse(a[0], r);
        if (!inv) {
            rep.dropped.push_back(r);
            continue;
        }
        const std::int64_t v = mod_floor(-2 * a[1] * *inv, r);
        const auto b = cyclo::ohtsuki_expansion(twisted_conjugate(x, v)).a;
        const std::int64_t delta = mod_floor(a[3] - b[3], r);
        rep.residues.push_back({r, a[0], a[1], v, a[3], b[3], delta});
        lift_input.emplace_back(r, delta);
    }
    if (lift_input.empty()) throw std::domain_error("period_discriminant: every prime was dropped");
    for (const auto& [p, unused] : lift_input) rep.modulus *= p;
    rep.lifted = crt_lift(lift_input);
    rep.factorization = factorize(rep.lifted);
    return rep;
}

} // namespace qperiod::tau
