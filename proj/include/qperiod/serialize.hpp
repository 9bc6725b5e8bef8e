#pragma once

// JSON and text renderings of every value and report.
//
// Field order is fixed (ordered_json), so identical values dump to identical
// bytes. Integers beyond 2^53 in magnitude are written as decimal strings.

#include "cyclo.hpp"
#include "liedata.hpp"
#include "linkdiag.hpp"
#include "qpoly.hpp"
#include "tau.hpp"

#include <json.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qperiod::io {

using Json = nlohmann::ordered_json;

inline const BigInt& json_safe_limit()
{
    static const BigInt limit = BigInt(1) << 53;
    return limit;
}

inline Json to_json(const BigInt& x)
{
    const BigInt mag = x < 0 ? BigInt(-x) : x;
    if (mag <= json_safe_limit()) return static_cast<std::int64_t>(x);
    return to_string(x);
}

inline BigInt bigint_from_json(const Json& j)
{
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) return BigInt(j.get<std::string>());
    throw std::invalid_argument("expected an integer or a decimal string");
}

// ---------------------------------------------------------------------------
// Values

inline Json to_json(const cyclo::CyclotomicInt& x)
{
    Json coeffs = Json::array();
    for (const auto& c : x.coeffs()) coeffs.push_back(to_json(c));
    return Json{{"r", x.order()}, {"coeffs", coeffs}};
}

inline cyclo::CyclotomicInt cyclotomic_from_json(const Json& j)
{
    std::vector<BigInt> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(bigint_from_json(c));
    return cyclo::CyclotomicInt(j.at("r").get<int>(), std::move(coeffs));
}

inline Json to_json(const qpoly::HalfLaurent& f, const std::string& var)
{
    Json terms = Json::array();
    for (const auto& [k, c] : f.terms()) terms.push_back(Json::array({k, to_json(c)}));
    return Json{{"var", var}, {"terms", terms}};
}

inline qpoly::HalfLaurent poly_from_json(const Json& j)
{
    qpoly::HalfLaurent f;
    for (const auto& t : j.at("terms")) f.add_term(t.at(0).get<std::int64_t>(), bigint_from_json(t.at(1)));
    return f;
}

/// "c*t^(k)" for integral exponents and "c*t^(k/2)" otherwise, ascending, joined by " + ".
inline std::string to_text(const qpoly::HalfLaurent& f, const std::string& var)
{
    if (f.is_zero()) return "0";
    std::string out;
    for (const auto& [k, c] : f.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(c) + "*" + var + "^(";
        out += k % 2 == 0 ? std::to_string(k / 2) : std::to_string(k) + "/2";
        out += ")";
    }
    return out;
}

/// Inverse of to_text.
inline qpoly::HalfLaurent poly_from_text(const std::string& text, const std::string& var)
{
    qpoly::HalfLaurent f;
    if (text == "0") return f;
    std::size_t pos = 0;
    const std::string marker = "*" + var + "^(";
    while (pos < text.size()) {
        const auto star = text.find(marker, pos);
        if (star == std::string::npos) throw std::invalid_argument("polynomial text: missing '" + marker + "'");
        const BigInt c(text.substr(pos, star - pos));
        const auto open = star + marker.size();
        const auto close = text.find(')', open);
        if (close == std::string::npos) throw std::invalid_argument("polynomial text: unterminated exponent");
        const std::string e = text.substr(open, close - open);
        const auto slash = e.find('/');
        const std::int64_t k = slash == std::string::npos ? 2 * std::stoll(e) : std::stoll(e.substr(0, slash));
        if (slash != std::string::npos && e.substr(slash) != "/2") throw std::invalid_argument("polynomial text: bad exponent");
        f.add_term(k, c);
        pos = close + 1;
        if (text.compare(pos, 3, " + ") == 0) pos += 3;
        else if (pos != text.size()) throw std::invalid_argument("polynomial text: expected ' + '");
    }
    return f;
}

inline Json to_json(const cyclo::OhtsukiExpansion& e)
{
    return Json{{"r", e.r}, {"a", e.a}, {"remainder", to_json(e.remainder)}};
}

inline cyclo::OhtsukiExpansion ohtsuki_from_json(const Json& j)
{
    return {j.at("r").get<int>(), j.at("a").get<std::vector<std::int64_t>>(), cyclotomic_from_json(j.at("remainder"))};
}

inline Json to_json(const tau::TauValue& t)
{
    return Json{{"manifold", tau::manifold_name(t.manifold_id)}, {"r", t.r}, {"value", to_json(t.value)}};
}

inline tau::TauValue tau_from_json(const Json& j)
{
    const std::string name = j.at("manifold").get<std::string>();
    return {name == "custom" ? tau::ManifoldId::custom : tau::parse_manifold(name), j.at("r").get<int>(),
            cyclotomic_from_json(j.at("value"))};
}

inline Json to_json(const tau::CoeffTable& table)
{
    Json out = Json::array();
    for (const auto& [n, a] : table) out.push_back(Json::array({n, a}));
    return out;
}

inline tau::CoeffTable table_from_json(const Json& j)
{
    tau::CoeffTable out;
    for (const auto& row : j) out.emplace_back(row.at(0).get<int>(), row.at(1).get<std::int64_t>());
    return out;
}

// ---------------------------------------------------------------------------
// Link reports

inline Json to_json(const link::CongruenceReport& rep)
{
    return Json{{"pass", rep.pass},
                {"lhs", to_json(rep.lhs, rep.var)},
                {"rhs", to_json(rep.rhs, rep.var)},
                {"residual", to_json(rep.residual, rep.var)},
                {"p", rep.p}};
}

inline link::CongruenceReport congruence_from_json(const Json& j)
{
    link::CongruenceReport rep;
    rep.pass = j.at("pass").get<bool>();
    rep.p = j.at("p").get<std::int64_t>();
    rep.var = j.at("lhs").at("var").get<std::string>();
    rep.lhs = poly_from_json(j.at("lhs"));
    rep.rhs = poly_from_json(j.at("rhs"));
    rep.residual = poly_from_json(j.at("residual"));
    return rep;
}

inline Json to_json(const link::LinkingData& l)
{
    return Json{{"matrix", l.matrix}, {"writhe", l.writhe}, {"total_lk_doubled", l.total_lk_doubled}};
}

inline link::LinkingData linking_from_json(const Json& j)
{
    return {j.at("matrix").get<std::vector<std::vector<std::int64_t>>>(), j.at("writhe").get<std::int64_t>(),
            j.at("total_lk_doubled").get<std::int64_t>()};
}

// ---------------------------------------------------------------------------
// Manifold reports

inline Json to_json(const tau::ObstructionReport& rep)
{
    Json twisted = Json::array();
    for (const auto& row : rep.twisted) twisted.push_back(Json{{"v", row.v}, {"a", to_json(row.a)}});
    return Json{{"manifold", rep.manifold},
                {"r", rep.r},
                {"verdict", tau::verdict_name(rep.verdict)},
                {"admissible_v", rep.admissible_v},
                {"a", to_json(rep.a_table)},
                {"twisted", twisted}};
}

inline tau::ObstructionReport obstruction_from_json(const Json& j)
{
    tau::ObstructionReport rep;
    rep.manifold = j.at("manifold").get<std::string>();
    rep.r = j.at("r").get<int>();
    rep.verdict = tau::parse_verdict(j.at("verdict").get<std::string>());
    rep.admissible_v = j.at("admissible_v").get<std::vector<std::int64_t>>();
    rep.a_table = table_from_json(j.at("a"));
    for (const auto& row : j.at("twisted")) rep.twisted.push_back({row.at("v").get<std::int64_t>(), table_from_json(row.at("a"))});
    return rep;
}

inline Json to_json(const tau::DiscriminantReport& rep)
{
    Json rows = Json::array();
    for (const auto& row : rep.residues)
        rows.push_back(Json{{"r", row.r},
                            {"a0", row.a0},
                            {"a1", row.a1},
                            {"v", row.v},
                            {"a3", row.a3},
                            {"a3_twisted", row.a3_twisted},
                            {"delta", row.delta}});
    Json factors = Json::array();
    for (const auto& [p, m] : rep.factorization) factors.push_back(Json::array({to_json(p), m}));
    return Json{{"manifold", rep.manifold},
                {"candidate_v_rule", rep.candidate_v_rule},
                {"residues", rows},
                {"dropped", rep.dropped},
                {"modulus", to_json(rep.modulus)},
                {"lifted", to_json(rep.lifted)},
                {"factors", factors}};
}

inline tau::DiscriminantReport discriminant_from_json(const Json& j)
{
    tau::DiscriminantReport rep;
    rep.manifold = j.at("manifold").get<std::string>();
    rep.candidate_v_rule = j.at("candidate_v_rule").get<std::string>();
    for (const auto& row : j.at("residues"))
        rep.residues.push_back({row.at("r").get<int>(), row.at("a0").get<std::int64_t>(), row.at("a1").get<std::int64_t>(),
                                row.at("v").get<std::int64_t>(), row.at("a3").get<std::int64_t>(),
                                row.at("a3_twisted").get<std::int64_t>(), row.at("delta").get<std::int64_t>()});
    rep.dropped = j.at("dropped").get<std::vector<int>>();
    rep.modulus = bigint_from_json(j.at("modulus"));
    rep.lifted = bigint_from_json(j.at("lifted"));
    for (const auto& f : j.at("factors")) rep.factorization.emplace_back(bigint_from_json(f.at(0)), f.at(1).get<int>());
    return rep;
}

// ---------------------------------------------------------------------------
// Lie data

inline std::string to_text(const lie::Rational& q)
{
    return q.denominator() == 1 ? std::to_string(q.numerator())
                                : std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline lie::Rational rational_from_text(const std::string& s)
{
    const auto slash = s.find('/');
    if (slash == std::string::npos) return lie::Rational(std::stoll(s));
    return lie::Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

inline Json to_json(const lie::GaussReport& rep, const lie::RootSystem& rs, int r)
{
    return Json{{"type", std::string(1, rs.family)},
                {"rank", rs.rank},
                {"r", r},
                {"gamma", to_json(rep.gamma)},
                {"ker", to_json(rep.ker_size)},
                {"group_size", to_json(rep.group_size)},
                {"magnitude_ok", rep.magnitude_ok},
                {"ratio_ok", rep.ratio_ok},
                {"omega", rep.omega_sign}};
}

inline lie::GaussReport gauss_from_json(const Json& j)
{
    return {cyclotomic_from_json(j.at("gamma")), bigint_from_json(j.at("ker")), bigint_from_json(j.at("group_size")),
            j.at("magnitude_ok").get<bool>(), j.at("ratio_ok").get<bool>(), j.at("omega").get<int>()};
}

inline Json to_json(const lie::LieConstants& c)
{
    return Json{{"d", c.d},   {"D", c.D}, {"h", c.h}, {"h_dual", c.h_dual}, {"det_cartan", c.det_cartan},
                {"weyl_order", c.weyl_order}};
}

inline lie::LieConstants constants_from_json(const Json& j)
{
    return {j.at("d").get<std::int64_t>(),      j.at("D").get<std::int64_t>(),          j.at("h").get<std::int64_t>(),
            j.at("h_dual").get<std::int64_t>(), j.at("det_cartan").get<std::int64_t>(), j.at("weyl_order").get<std::int64_t>()};
}

inline Json to_json(const lie::RootSystem& rs)
{
    Json rho = Json::array();
    for (const auto& q : rs.rho_coords) rho.push_back(to_text(q));
    return Json{{"type", std::string(1, rs.family)},
                {"rank", rs.rank},
                {"cartan", rs.cartan},
                {"d", rs.d},
                {"bilinear", rs.bilinear},
                {"positive_roots", rs.positive_roots},
                {"rho", rho}};
}

inline lie::RootSystem root_system_from_json(const Json& j)
{
    lie::RootSystem rs;
    rs.family = j.at("type").get<std::string>().at(0);
    rs.rank = j.at("rank").get<int>();
    rs.cartan = j.at("cartan").get<lie::IntMatrix>();
    rs.d = j.at("d").get<std::vector<std::int64_t>>();
    rs.bilinear = j.at("bilinear").get<lie::IntMatrix>();
    rs.positive_roots = j.at("positive_roots").get<std::vector<lie::Root>>();
    for (const auto& q : j.at("rho")) rs.rho_coords.push_back(rational_from_text(q.get<std::string>()));
    return rs;
}

} // namespace qperiod::io
