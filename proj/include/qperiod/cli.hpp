#pragma once

// The qperiod command line. run() is the whole program; main() only forwards.
// Exit codes: 0 success, 1 computation error, 2 usage error.

#include "cyclo.hpp"
#include "liedata.hpp"
#include "linkdiag.hpp"
#include "serialize.hpp"
#include "tau.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qperiod::cli {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Left-aligned first column, right-aligned others.
inline std::string render_columns(const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const std::string pad(width[i] - row[i].size(), ' ');
            if (i == 0)
                line += row[i] + pad;
            else
                line += "  " + pad + row[i];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

inline std::string render_list(const std::vector<std::int64_t>& xs)
{
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + std::to_string(xs[i]);
    return out + "}";
}

inline std::string render_cyclotomic(const cyclo::CyclotomicInt& x)
{
    std::string out;
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
        const BigInt& c = x.coeffs()[i];
        if (c == 0) continue;
        if (!out.empty()) out += c < 0 ? " - " : " + ";
        else if (c < 0) out += "-";
        const BigInt mag = c < 0 ? BigInt(-c) : c;
        if (i == 0) out += to_string(mag);
        else {
            if (mag != 1) out += to_string(mag) + "*";
            out += i == 1 ? std::string("xi") : "xi^" + std::to_string(i);
        }
    }
    return out.empty() ? "0" : out;
}

/// Rows "label a_0 a_1 ..." with aligned coefficient columns.
inline std::string render_table(const std::vector<std::pair<std::string, tau::CoeffTable>>& tables)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{""};
    const std::size_t depth = tables.empty() ? 0 : tables.front().second.size();
    for (std::size_t n = 0; n < depth; ++n) header.push_back("a" + std::to_string(n));
    rows.push_back(header);
    for (const auto& [label, table] : tables) {
        std::vector<std::string> row{label};
        for (const auto& [n, a] : table) row.push_back(std::to_string(a));
        rows.push_back(row);
    }
    return render_columns(rows);
}

inline std::string render_table(const tau::ObstructionReport& rep)
{
    std::ostringstream out;
    out << "manifold: " << rep.manifold << "\nr: " << rep.r << "\nverdict: " << tau::verdict_name(rep.verdict)
        << "\nadmissible v: " << render_list(rep.admissible_v) << "\n";
    std::vector<std::pair<std::string, tau::CoeffTable>> tables{{"tau", rep.a_table}};
    for (const auto& row : rep.twisted) tables.emplace_back("xi^" + std::to_string(row.v) + " conj", row.a);
    out << render_table(tables);
    return out.str();
}

inline std::string render_table(const tau::DiscriminantReport& rep)
{
    std::ostringstream out;
    out << "manifold: " << rep.manifold << "\nrule: " << rep.candidate_v_rule << "\n";
    std::vector<std::vector<std::string>> rows{{"r", "a0", "a1", "v", "a3", "a3 twisted", "delta"}};
    for (const auto& row : rep.residues)
        rows.push_back({std::to_string(row.r), std::to_string(row.a0), std::to_string(row.a1), std::to_string(row.v),
                        std::to_string(row.a3), std::to_string(row.a3_twisted), std::to_string(row.delta)});
    out << render_columns(rows);
    if (!rep.dropped.empty()) {
        out << "dropped (a0 = 0 mod r):";
        for (int r : rep.dropped) out << " " << r;
        out << "\n";
    }
    out << "lifted: " << to_string(rep.lifted) << " (mod " << to_string(rep.modulus) << ")\nfactors: ";
    if (rep.factorization.empty()) out << "none";
    for (std::size_t i = 0; i < rep.factorization.size(); ++i)
        out << (i ? " * " : "") << to_string(rep.factorization[i].first) << "^" << rep.factorization[i].second;
    out << "\n";
    return out.str();
}

inline std::string render_table(const link::CongruenceReport& rep)
{
    std::ostringstream out;
    out << "p: " << rep.p << "\npass: " << (rep.pass ? "true" : "false") << "\nlhs: " << io::to_text(rep.lhs, rep.var)
        << "\nrhs: " << io::to_text(rep.rhs, rep.var) << "\nresidual: " << io::to_text(rep.residual, rep.var) << "\n";
    return out.str();
}

namespace detail {

inline int require_prime(std::int64_t n, const char* name)
{
    if (!is_prime(n)) throw UsageError(std::string(name) + " must be prime, got " + std::to_string(n));
    return static_cast<int>(n);
}

inline int require_sl2_r(std::int64_t r)
{
    require_prime(r, "r");
    if (r <= 4) throw UsageError("r must be at least 5 for the sl2 closed forms, got " + std::to_string(r));
    return static_cast<int>(r);
}

inline std::int64_t require_odd_prime(std::int64_t p, const char* name)
{
    require_prime(p, name);
    if (p == 2) throw UsageError(std::string(name) + " must be an odd prime");
    return p;
}

inline tau::ManifoldId manifold(const std::string& name)
{
    try {
        return tau::parse_manifold(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

inline link::BraidWord braid(const std::string& text)
{
    try {
        return link::parse_braid(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

inline link::PlanarDiagram diagram(const std::optional<std::string>& braid_text, const std::optional<std::string>& pd_file)
{
    if (braid_text.has_value() == pd_file.has_value()) throw UsageError("give exactly one of --braid or --pd");
    if (braid_text) return link::closure(braid(*braid_text));
    std::ifstream in(*pd_file);
    if (!in) throw UsageError("cannot read PD file '" + *pd_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return link::parse_pd(buf.str());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

inline lie::RootSystem root_system(const std::string& type, int rank)
{
    if (type.size() != 1) throw UsageError("--type must be one of A, B, C, D, E, F, G");
    try {
        return lie::build_root_system(type[0], rank);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Quantum invariants at roots of unity and periodicity obstructions", "qperiod"};
    app.require_subcommand(1);

    bool json = false;
    std::string manifold_name;
    std::int64_t r = 0, p = 0;
    int depth = -1, rank = 0;
    std::vector<int> primes;
    std::optional<std::string> braid_text, pd_file;
    std::string type;

    auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", json, "Emit JSON instead of a table"); };
    auto add_manifold = [&](CLI::App* sub) {
        sub->add_option("--manifold", manifold_name, "poincare, brieskorn237 or s3")->required();
    };
    auto add_link = [&](CLI::App* sub) {
        sub->add_option("--braid", braid_text, "Braid word, \"strands N : w1 w2 ...\"");
        sub->add_option("--pd", pd_file, "File of X(a,b,c,d) crossings with optional C(...) orientation lines");
    };

    auto* tau_cmd = app.add_subcommand("tau", "Exact invariant of a manifold in Z[xi_r]");
    add_manifold(tau_cmd);
    tau_cmd->add_option("--r", r, "Prime order of the root of unity, r >= 5")->required();
    add_json(tau_cmd);

    auto* obstruct_cmd = app.add_subcommand("obstruct", "Symmetry obstruction to r-periodicity");
    add_manifold(obstruct_cmd);
    obstruct_cmd->add_option("--r", r, "Prime period to test, r >= 5")->required();
    add_json(obstruct_cmd);

    auto* disc_cmd = app.add_subcommand("discriminant", "Integer every admissible prime period must divide");
    add_manifold(disc_cmd);
    disc_cmd->add_option("--primes", primes, "Comma-separated primes >= 5 used for the lift")->required()->delimiter(',');
    add_json(disc_cmd);

    auto* ohtsuki_cmd = app.add_subcommand("ohtsuki", "Coefficients a_n of the (1 - xi)-adic expansion");
    add_manifold(ohtsuki_cmd);
    ohtsuki_cmd->add_option("--r", r, "Prime order of the root of unity, r >= 5")->required();
    ohtsuki_cmd->add_option("--depth", depth, "Largest n to report, at most r-2 (default r-2)");
    add_json(ohtsuki_cmd);

    auto* jones_cmd = app.add_subcommand("jones", "Jones polynomial of a braid closure or PD diagram");
    add_link(jones_cmd);
    add_json(jones_cmd);

    auto* murasugi_cmd = app.add_subcommand("murasugi", "V(closure b^p) == V(closure b)^p mod (p, eta_p)");
    murasugi_cmd->add_option("--braid", braid_text, "Braid word of the quotient tangle")->required();
    murasugi_cmd->add_option("--p", p, "Odd prime period")->required();
    add_json(murasugi_cmd);

    auto* yokota_cmd = app.add_subcommand("yokota", "V(t) - t^(2lk) V(1/t) == 0 mod (p, t^p - 1)");
    add_link(yokota_cmd);
    yokota_cmd->add_option("--p", p, "Odd prime period")->required();
    add_json(yokota_cmd);

    auto* gauss_cmd = app.add_subcommand("gauss", "Root-lattice Gauss sum with magnitude and ratio checks");
    gauss_cmd->add_option("--type", type, "Cartan type A-G")->required();
    gauss_cmd->add_option("--rank", rank, "Rank")->required();
    gauss_cmd->add_option("--r", r, "Odd prime")->required();
    add_json(gauss_cmd);

    auto* lie_cmd = app.add_subcommand("liedata", "Root system and its constants");
    lie_cmd->add_option("--type", type, "Cartan type A-G")->required();
    lie_cmd->add_option("--rank", rank, "Rank")->required();
    add_json(lie_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto emit = [&](const io::Json& j, const std::string& table) {
        if (json)
            out << j.dump() << "\n";
        else
            out << table;
    };

    try {
        if (*tau_cmd) {
            const int rr = detail::require_sl2_r(r);
            const auto value = tau::tau_value(detail::manifold(manifold_name), rr);
            emit(io::to_json(value), "manifold: " + manifold_name + "\nr: " + std::to_string(rr)
                                         + "\nvalue: " + render_cyclotomic(value.value) + "\n");
        } else if (*obstruct_cmd) {
            const int rr = detail::require_sl2_r(r);
            const auto id = detail::manifold(manifold_name);
            auto rep = tau::obstruction_test(tau::tau_value(id, rr).value, lie::build_root_system('A', 1));
            rep.manifold = tau::manifold_name(id);
            emit(io::to_json(rep), render_table(rep));
        } else if (*disc_cmd) {
            const auto id = detail::manifold(manifold_name);
            for (int q : primes) detail::require_sl2_r(q);
            const auto rep = tau::period_discriminant(id, primes);
            emit(io::to_json(rep), render_table(rep));
        } else if (*ohtsuki_cmd) {
            const int rr = detail::require_sl2_r(r);
            if (depth < 0) depth = rr - 2;
            if (depth > rr - 2) throw UsageError("--depth must be at most r-2 = " + std::to_string(rr - 2));
            const auto id = detail::manifold(manifold_name);
            const auto table = tau::coeff_table(tau::tau_value(id, rr).value, depth);
            emit(io::Json{{"manifold", tau::manifold_name(id)}, {"r", rr}, {"depth", depth}, {"a", io::to_json(table)}},
                 "manifold: " + manifold_name + "\nr: " + std::to_string(rr) + "\n" + render_table({{"tau", table}}));
        } else if (*jones_cmd) {
            const auto d = detail::diagram(braid_text, pd_file);
            const auto v = link::jones(d);
            emit(io::Json{{"crossings", d.crossing_count()},
                          {"components", d.component_count()},
                          {"linking", io::to_json(d.linking_data())},
                          {"jones", io::to_json(v, "t")},
                          {"text", io::to_text(v, "t")}},
                 io::to_text(v, "t") + "\n");
        } else if (*murasugi_cmd) {
            const auto b = detail::braid(*braid_text);
            const auto rep = link::murasugi_check(b, detail::require_odd_prime(p, "p"));
            emit(io::to_json(rep), render_table(rep));
        } else if (*yokota_cmd) {
            const auto odd = detail::require_odd_prime(p, "p");
            const auto rep = link::yokota_check(detail::diagram(braid_text, pd_file), odd);
            emit(io::to_json(rep), render_table(rep));
        } else if (*gauss_cmd) {
            const auto rs = detail::root_system(type, rank);
            const int rr = detail::require_prime(r, "r");
            if (rr == 2) throw UsageError("r must be an odd prime");
            const auto rep = lie::gauss_report(rs, rr);
            std::ostringstream table;
            table << "type: " << rs.name() << "\nr: " << rr << "\ngamma: " << render_cyclotomic(rep.gamma)
                  << "\nker: " << to_string(rep.ker_size) << "\ngroup size: " << to_string(rep.group_size)
                  << "\nmagnitude ok: " << (rep.magnitude_ok ? "true" : "false")
                  << "\nratio ok: " << (rep.ratio_ok ? "true" : "false") << "\nomega: " << rep.omega_sign << "\n";
            emit(io::to_json(rep, rs, rr), table.str());
        } else if (*lie_cmd) {
            const auto rs = detail::root_system(type, rank);
            const auto c = lie::constants(rs);
            io::Json j = io::to_json(rs);
            j["constants"] = io::to_json(c);
            std::ostringstream table;
            table << "type: " << rs.name() << "\npositive roots: " << rs.positive_roots.size()
                  << "\n" << render_columns({{"d", "D", "h", "h_dual", "det", "|W|"},
                                             {std::to_string(c.d), std::to_string(c.D), std::to_string(c.h),
                                              std::to_string(c.h_dual), std::to_string(c.det_cartan),
                                              std::to_string(c.weyl_order)}});
            emit(j, table.str());
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace qperiod::cli
