#pragma once

// Link presentations and the Jones polynomial.
//
// Conventions, fixed throughout:
//   * Braid strands run downward; generator sigma_i (letter +i) is a positive
//     crossing in which the strand starting at position i+1 passes over.
//   * A PD crossing X(a,b,c,d) lists arc labels counterclockwise starting at
//     the incoming under-arc, so the under-strand runs a -> c. The crossing is
//     positive when the over-strand runs d -> b.
//   * Kauffman bracket: the A-smoothing joins (a,b),(c,d); the B-smoothing joins
//     (a,d),(b,c); <unknot> = 1 and each extra loop contributes -A^2 - A^-2.
//   * V(L) = (-A^3)^-w <D> at A = t^(-1/4). Closure of sigma_1^3 is the
//     trefoil with V = t + t^3 - t^4.

#include "number_theory.hpp"
#include "qpoly.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qperiod::link {

using qpoly::HalfLaurent;

class CrossingLimitExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

// ---------------------------------------------------------------------------
// Braids

struct BraidWord {
    int strands = 1;
    std::vector<int> letters;

    void validate() const
    {
        if (strands < 1) throw std::invalid_argument("braid: strand count must be at least 1");
        for (int l : letters) {
            if (l == 0) throw std::invalid_argument("braid: zero is not a generator");
            if (std::abs(l) >= strands)
                throw std::invalid_argument("braid: generator index " + std::to_string(std::abs(l))
                                            + " out of range for " + std::to_string(strands) + " strands");
        }
    }

    /// Underlying permutation: perm[k] is the final position of the strand starting at k.
    std::vector<int> permutation() const
    {
        std::vector<int> at(static_cast<std::size_t>(strands));
        std::iota(at.begin(), at.end(), 0);  // at[pos] = strand currently at pos
        for (int l : letters) {
            const auto i = static_cast<std::size_t>(std::abs(l) - 1);
            std::swap(at[i], at[i + 1]);
        }
        std::vector<int> perm(at.size());
        for (std::size_t pos = 0; pos < at.size(); ++pos) perm[static_cast<std::size_t>(at[pos])] = static_cast<int>(pos);
        return perm;
    }

    std::size_t cycle_count() const
    {
        const auto perm = permutation();
        std::vector<bool> seen(perm.size(), false);
        std::size_t cycles = 0;
        for (std::size_t k = 0; k < perm.size(); ++k) {
            if (seen[k]) continue;
            ++cycles;
            for (std::size_t j = k; !seen[j]; j = static_cast<std::size_t>(perm[j])) seen[j] = true;
        }
        return cycles;
    }

    std::string to_string() const
    {
        std::string out = "strands " + std::to_string(strands) + " :";
        for (int l : letters) out += " " + std::to_string(l);
        return out;
    }

    friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

/// Parses "strands N : w1 w2 ...".
inline BraidWord parse_braid(const std::string& text)
{
    std::istringstream in(text);
    std::string keyword, colon;
    BraidWord b;
    if (!(in >> keyword) || keyword != "strands") throw std::invalid_argument("braid: expected 'strands N : ...'");
    std::string count;
    if (!(in >> count)) throw std::invalid_argument("braid: missing strand count");
    // Accept "strands 2: 1 1" as well as "strands 2 : 1 1".
    if (!count.empty() && count.back() == ':') {
        count.pop_back();
        colon = ":";
    }
    try {
        std::size_t used = 0;
        b.strands = std::stoi(count, &used);
        if (used != count.size()) throw std::invalid_argument(count);
    } catch (const std::exception&) {
        throw std::invalid_argument("braid: malformed strand count '" + count + "'");
    }
    if (colon.empty() && (!(in >> colon) || colon != ":")) throw std::invalid_argument("braid: expected ':' after strand count");
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        int letter = 0;
        try {
            letter = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("braid: malformed token '" + tok + "'");
        }
        if (used != tok.size()) throw std::invalid_argument("braid: malformed token '" + tok + "'");
        b.letters.push_back(letter);
    }
    b.validate();
    return b;
}

inline BraidWord braid_power(const BraidWord& b, int p)
{
    if (p < 1) throw std::invalid_argument("braid_power: exponent must be positive");
    BraidWord out{b.strands, {}};
    out.letters.reserve(b.letters.size() * static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
    return out;
}

// ---------------------------------------------------------------------------
// Planar diagrams

struct Crossing {
    std::array<int, 4> arcs;
    int sign;  // +1: over-strand runs arcs[3] -> arcs[1]; -1: arcs[1] -> arcs[3]

    friend bool operator==(const Crossing&, const Crossing&) = default;
};

struct LinkingData {
    std::vector<std::vector<std::int64_t>> matrix;
    std::int64_t writhe = 0;
    /// sum_{i<j} l_ij; this is the exponent "2 lk" of the symmetry criterion.
    std::int64_t total_lk_doubled = 0;

    friend bool operator==(const LinkingData&, const LinkingData&) = default;
};

class PlanarDiagram {
public:
    /// Diagram from oriented crossings. free_loops counts crossingless unknotted components.
    PlanarDiagram(std::vector<Crossing> crossings, std::size_t free_loops = 0)
        : crossings_(std::move(crossings)), free_loops_(free_loops)
    {
        index_arcs();
        for (const auto& x : crossings_)
            if (x.sign != 1 && x.sign != -1) throw std::invalid_argument("PD: crossing sign must be +1 or -1");
        trace_components();
    }

    /// Diagram from unoriented X(a,b,c,d) tuples. Orientation follows the
    /// under-strands (a -> c). `orientation` lists arcs of a component in
    /// traversal order and fixes the direction of components that only pass
    /// over (needs >= 3 arcs to carry a direction; otherwise one is chosen).
    static PlanarDiagram from_tuples(const std::vector<std::array<int, 4>>& tuples,
                                     const std::vector<std::vector<int>>& orientation = {},
                                     std::size_t free_loops = 0)
    {
        std::vector<Crossing> xs;
        xs.reserve(tuples.size());
        for (const auto& t : tuples) xs.push_back({t, 0});
        auto signs = infer_signs(xs, orientation);
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i].sign = signs[i];
        PlanarDiagram d(std::move(xs), free_loops);
        // An explicit order must agree with the traced one up to rotation.
        for (const auto& comp : orientation) d.check_listed_order(comp);
        return d;
    }

    const std::vector<Crossing>& crossings() const noexcept { return crossings_; }
    std::size_t free_loops() const noexcept { return free_loops_; }
    /// Components with crossings, arcs in traversal order.
    const std::vector<std::vector<int>>& components() const noexcept { return components_; }
    std::size_t component_count() const noexcept { return components_.size() + free_loops_; }
    std::size_t crossing_count() const noexcept { return crossings_.size(); }

    int component_of(int arc) const { return component_of_.at(arc); }

    std::int64_t writhe() const
    {
        std::int64_t w = 0;
        for (const auto& x : crossings_) w += x.sign;
        return w;
    }

    LinkingData linking_data() const
    {
        const std::size_t m = component_count();
        LinkingData out;
        out.matrix.assign(m, std::vector<std::int64_t>(m, 0));
        std::vector<std::vector<std::int64_t>> signed_count(m, std::vector<std::int64_t>(m, 0));
        for (const auto& x : crossings_) {
            const auto i = static_cast<std::size_t>(component_of(x.arcs[0]));
            const auto j = static_cast<std::size_t>(component_of(x.arcs[1]));
            out.writhe += x.sign;
            if (i == j) {
                out.matrix[i][i] += x.sign;
            } else {
                signed_count[i][j] += x.sign;
                signed_count[j][i] += x.sign;
            }
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (i != j) out.matrix[i][j] = signed_count[i][j] / 2;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) out.total_lk_doubled += out.matrix[i][j];
        return out;
    }

    /// Same diagram with every crossing switched; the mirror image.
    PlanarDiagram mirror() const
    {
        std::vector<Crossing> xs;
        xs.reserve(crossings_.size());
        // Rotating the tuple one step makes the old over-strand the under-strand.
        for (const auto& x : crossings_) {
            if (x.sign > 0)
                xs.push_back({{x.arcs[3], x.arcs[0], x.arcs[1], x.arcs[2]}, -1});
            else
                xs.push_back({{x.arcs[1], x.arcs[2], x.arcs[3], x.arcs[0]}, +1});
        }
        return PlanarDiagram(std::move(xs), free_loops_);
    }

    /// Disjoint union; arcs of `other` are relabelled above this diagram's labels.
    PlanarDiagram disjoint_union(const PlanarDiagram& other) const
    {
        int offset = 0;
        for (const auto& x : crossings_)
            for (int a : x.arcs) offset = std::max(offset, a);
        std::vector<Crossing> xs = crossings_;
        for (auto x : other.crossings_) {
            for (auto& a : x.arcs) a += offset;
            xs.push_back(x);
        }
        return PlanarDiagram(std::move(xs), free_loops_ + other.free_loops_);
    }

    std::string to_text() const
    {
        std::ostringstream out;
        for (const auto& x : crossings_)
            out << "X(" << x.arcs[0] << "," << x.arcs[1] << "," << x.arcs[2] << "," << x.arcs[3] << ")\n";
        for (const auto& comp : components_) {
            out << "C(";
            for (std::size_t i = 0; i < comp.size(); ++i) out << (i ? "," : "") << comp[i];
            out << ")\n";
        }
        if (free_loops_ > 0) out << "U(" << free_loops_ << ")\n";
        return out.str();
    }

private:
    struct End {
        std::size_t crossing;
        int slot;
    };

    void index_arcs()
    {
        ends_.clear();
        for (std::size_t i = 0; i < crossings_.size(); ++i)
            for (int s = 0; s < 4; ++s) ends_[crossings_[i].arcs[static_cast<std::size_t>(s)]].push_back({i, s});
        for (const auto& [arc, e] : ends_)
            if (e.size() != 2)
                throw std::invalid_argument("PD: arc " + std::to_string(arc) + " appears " + std::to_string(e.size())
                                            + " times, expected exactly 2");
    }

    static int exit_slot(const Crossing&, int in_slot)
    {
        if (in_slot == 0) return 2;
        return in_slot == 3 ? 1 : 3;
    }

    static bool is_in_slot(const Crossing& x, int slot)
    {
        return slot == 0 || (x.sign > 0 ? slot == 3 : slot == 1);
    }

    void trace_components()
    {
        components_.clear();
        component_of_.clear();
        // Each arc must have exactly one head (an in-slot) and one tail.
        std::map<int, End> head;
        for (const auto& [arc, e] : ends_) {
            const bool in0 = is_in_slot(crossings_[e[0].crossing], e[0].slot);
            const bool in1 = is_in_slot(crossings_[e[1].crossing], e[1].slot);
            if (in0 == in1) throw std::invalid_argument("PD: inconsistent orientation at arc " + std::to_string(arc));
            head.emplace(arc, in0 ? e[0] : e[1]);
        }
        for (const auto& [start, unused] : head) {
            if (component_of_.contains(start)) continue;
            const int id = static_cast<int>(components_.size());
            std::vector<int> comp;
            int arc = start;
            while (!component_of_.contains(arc)) {
                component_of_[arc] = id;
                comp.push_back(arc);
                const End h = head.at(arc);
                const auto& x = crossings_[h.crossing];
                arc = x.arcs[static_cast<std::size_t>(exit_slot(x, h.slot))];
            }
            if (arc != start) throw std::invalid_argument("PD: arcs do not close into cycles");
            components_.push_back(std::move(comp));
        }
    }

    void check_listed_order(const std::vector<int>& listed) const
    {
        if (listed.empty()) throw std::invalid_argument("PD: empty orientation entry");
        const int id = component_of(listed.front());
        const auto& comp = components_[static_cast<std::size_t>(id)];
        if (comp.size() != listed.size())
            throw std::invalid_argument("PD: orientation entry does not cover a whole component");
        const auto it = std::find(comp.begin(), comp.end(), listed.front());
        std::vector<int> rotated(it, comp.end());
        rotated.insert(rotated.end(), comp.begin(), it);
        if (rotated != listed) throw std::invalid_argument("PD: orientation entry contradicts the under-strand directions");
    }

    /// Solves for the head/tail role of every arc end. Relations: the two ends of
    /// an arc are opposite, slots 1 and 3 of a crossing are opposite, slot 0 is a
    /// head and slot 2 a tail. Listed traversal orders seed the over-only components.
    static std::vector<int> infer_signs(const std::vector<Crossing>& xs, const std::vector<std::vector<int>>& orientation)
    {
        std::map<int, std::vector<End>> ends;
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (int s = 0; s < 4; ++s) ends[xs[i].arcs[static_cast<std::size_t>(s)]].push_back({i, s});
        for (const auto& [arc, e] : ends)
            if (e.size() != 2)
                throw std::invalid_argument("PD: arc " + std::to_string(arc) + " appears " + std::to_string(e.size())
                                            + " times, expected exactly 2");

        // role[crossing*4 + slot]: 1 = head (arc enters crossing), 0 = tail, -1 unknown.
        std::vector<int> role(xs.size() * 4, -1);
        std::vector<std::size_t> queue;
        auto assign = [&](std::size_t idx, int value) {
            if (role[idx] == -1) {
                role[idx] = value;
                queue.push_back(idx);
            } else if (role[idx] != value) {
                throw std::invalid_argument("PD: orientation is inconsistent");
            }
        };
        for (std::size_t i = 0; i < xs.size(); ++i) {
            assign(i * 4 + 0, 1);
            assign(i * 4 + 2, 0);
        }
        for (const auto& comp : orientation) {
            if (comp.size() < 3) continue;  // a cyclic order of <= 2 arcs carries no direction
            for (std::size_t k = 0; k < comp.size(); ++k) {
                const int from = comp[k], to = comp[(k + 1) % comp.size()];
                if (!ends.contains(from) || !ends.contains(to))
                    throw std::invalid_argument("PD: orientation names an unknown arc");
                bool found = false;
                for (const End& e : ends.at(from)) {
                    const int partner = (e.slot == 0 || e.slot == 2) ? (e.slot + 2) % 4 : 4 - e.slot;
                    if (xs[e.crossing].arcs[static_cast<std::size_t>(partner)] == to) {
                        assign(e.crossing * 4 + static_cast<std::size_t>(e.slot), 1);
                        found = true;
                        break;
                    }
                }
                if (!found)
                    throw std::invalid_argument("PD: arcs " + std::to_string(from) + " and " + std::to_string(to)
                                                + " are not consecutive along a strand");
            }
        }
        auto propagate = [&] {
            while (!queue.empty()) {
                const std::size_t idx = queue.back();
                queue.pop_back();
                const std::size_t c = idx / 4;
                const int slot = static_cast<int>(idx % 4);
                const int value = role[idx];
                if (slot == 1 || slot == 3) assign(c * 4 + static_cast<std::size_t>(4 - slot), 1 - value);
                const int arc = xs[c].arcs[static_cast<std::size_t>(slot)];
                for (const End& e : ends.at(arc))
                    if (e.crossing != c || e.slot != slot)
                        assign(e.crossing * 4 + static_cast<std::size_t>(e.slot), 1 - value);
            }
        };
        propagate();
        // What is left belongs to components that only pass over. Such a component
        // links nothing, so its direction affects neither writhe nor Jones polynomial.
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (role[i * 4 + 3] != -1) continue;
            assign(i * 4 + 3, 1);
            propagate();
        }
        std::vector<int> signs(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) signs[i] = role[i * 4 + 3] == 1 ? +1 : -1;
        return signs;
    }

    std::vector<Crossing> crossings_;
    std::size_t free_loops_ = 0;
    std::map<int, std::vector<End>> ends_;
    std::vector<std::vector<int>> components_;
    std::map<int, int> component_of_;
};

/// Parses X(a,b,c,d) lines, optional C(a1,...,ak) orientation lines and an
/// optional U(n) line for crossingless components. '#' starts a comment;
/// square brackets are accepted in place of parentheses.
inline PlanarDiagram parse_pd(const std::string& text)
{
    std::vector<std::array<int, 4>> tuples;
    std::vector<std::vector<int>> orientation;
    std::size_t free_loops = 0;

    std::string cleaned;
    {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            cleaned += line + "\n";
        }
    }
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < cleaned.size() && (std::isspace(static_cast<unsigned char>(cleaned[pos])) || cleaned[pos] == ','))
            ++pos;
    };
    while (true) {
        skip_space();
        if (pos >= cleaned.size()) break;
        const char tag = static_cast<char>(std::toupper(static_cast<unsigned char>(cleaned[pos])));
        ++pos;
        if (pos >= cleaned.size() || (cleaned[pos] != '(' && cleaned[pos] != '['))
            throw std::invalid_argument(std::string("PD: expected '(' after '") + tag + "'");
        const char close = cleaned[pos] == '(' ? ')' : ']';
        const auto end = cleaned.find(close, pos);
        if (end == std::string::npos) throw std::invalid_argument("PD: unterminated entry");
        std::vector<int> values;
        std::string body = cleaned.substr(pos + 1, end - pos - 1);
        std::replace(body.begin(), body.end(), ',', ' ');
        std::istringstream nums(body);
        std::string tok;
        while (nums >> tok) {
            std::size_t used = 0;
            try {
                values.push_back(std::stoi(tok, &used));
            } catch (const std::exception&) {
                throw std::invalid_argument("PD: malformed label '" + tok + "'");
            }
            if (used != tok.size()) throw std::invalid_argument("PD: malformed label '" + tok + "'");
        }
        pos = end + 1;
        switch (tag) {
        case 'X':
            if (values.size() != 4) throw std::invalid_argument("PD: X entry needs 4 labels");
            tuples.push_back({values[0], values[1], values[2], values[3]});
            break;
        case 'C':
            orientation.push_back(values);
            break;
        case 'U':
            if (values.size() != 1 || values[0] < 0) throw std::invalid_argument("PD: U entry needs one count");
            free_loops += static_cast<std::size_t>(values[0]);
            break;
        default:
            throw std::invalid_argument(std::string("PD: unknown entry '") + tag + "'");
        }
    }
    if (tuples.empty() && free_loops == 0) throw std::invalid_argument("PD: diagram is empty");
    return PlanarDiagram::from_tuples(tuples, orientation, free_loops);
}

/// Trace closure of a braid, oriented downward, blackboard framed.
inline PlanarDiagram closure(const BraidWord& b)
{
    b.validate();
    const auto n = static_cast<std::size_t>(b.strands);
    std::vector<int> current(n);
    std::iota(current.begin(), current.end(), 0);
    int next_label = b.strands;
    struct Raw {
        std::array<int, 4> arcs;
        int sign;
    };
    std::vector<Raw> raw;
    raw.reserve(b.letters.size());
    for (int l : b.letters) {
        const auto i = static_cast<std::size_t>(std::abs(l) - 1);
        const int left_in = current[i], right_in = current[i + 1];
        const int left_out = next_label++, right_out = next_label++;
        // Corners counterclockwise from the incoming under-arc.
        if (l > 0)
            raw.push_back({{left_in, left_out, right_out, right_in}, +1});
        else
            raw.push_back({{right_in, left_in, left_out, right_out}, -1});
        current[i] = left_out;
        current[i + 1] = right_out;
    }
    // Glue bottom to top; untouched strands become free loops.
    std::vector<int> alias(static_cast<std::size_t>(next_label));
    std::iota(alias.begin(), alias.end(), 0);
    std::size_t free_loops = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (current[k] == static_cast<int>(k))
            ++free_loops;
        else
            alias[static_cast<std::size_t>(current[k])] = static_cast<int>(k);
    }
    // Relabel densely from 1 in order of first use.
    std::map<int, int> dense;
    std::vector<Crossing> xs;
    xs.reserve(raw.size());
    for (const auto& r : raw) {
        Crossing x{{}, r.sign};
        for (std::size_t s = 0; s < 4; ++s) {
            const int a = alias[static_cast<std::size_t>(r.arcs[s])];
            auto [it, inserted] = dense.try_emplace(a, static_cast<int>(dense.size()) + 1);
            x.arcs[s] = it->second;
        }
        xs.push_back(x);
    }
    return PlanarDiagram(std::move(xs), free_loops);
}

// ---------------------------------------------------------------------------
// Kauffman bracket

enum class BracketMethod { automatic, state_sum, contraction };

struct BracketOptions {
    std::size_t crossing_limit = 24;
    BracketMethod method = BracketMethod::automatic;
    /// Worker threads for the state sum; results do not depend on it.
    unsigned threads = 1;
};

namespace detail {

/// -A^2 - A^-2 raised to k, in doubled-exponent keys of A.
inline HalfLaurent loop_factor_pow(std::size_t k)
{
    const HalfLaurent delta = -(HalfLaurent::monomial(4) + HalfLaurent::monomial(-4));
    return delta.pow(static_cast<unsigned>(k));
}

/// Assembles sum over (A-exponent, loops) -> count into a polynomial in A,
/// normalised so that a single loop has value 1.
inline HalfLaurent assemble_bracket(const std::map<std::pair<std::int64_t, std::size_t>, BigInt>& counts)
{
    HalfLaurent out;
    std::map<std::size_t, HalfLaurent> powers;
    for (const auto& [key, count] : counts) {
        const auto [a_exp, loops] = key;
        auto it = powers.find(loops);
        if (it == powers.end()) it = powers.emplace(loops, loop_factor_pow(loops - 1)).first;
        out += it->second.shifted(2 * a_exp) * count;
    }
    return out;
}

/// Dense arc indices 0..2c-1 for the crossings of d.
inline std::vector<std::array<std::size_t, 4>> dense_arcs(const PlanarDiagram& d, std::size_t& arc_count)
{
    std::map<int, std::size_t> index;
    std::vector<std::array<std::size_t, 4>> out;
    out.reserve(d.crossing_count());
    for (const auto& x : d.crossings()) {
        std::array<std::size_t, 4> a{};
        for (std::size_t s = 0; s < 4; ++s) {
            auto [it, inserted] = index.try_emplace(x.arcs[s], index.size());
            a[s] = it->second;
        }
        out.push_back(a);
    }
    arc_count = index.size();
    return out;
}

inline HalfLaurent bracket_state_sum(const PlanarDiagram& d, unsigned threads)
{
    std::size_t arc_count = 0;
    const auto xs = dense_arcs(d, arc_count);
    const std::size_t c = xs.size();
    const std::size_t max_loops = arc_count + 1;
    const std::uint64_t states = std::uint64_t{1} << c;

    // counts[a_smoothings * (max_loops + 1) + loops]
    auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& counts) {
        std::vector<std::size_t> parent(arc_count);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        for (std::uint64_t s = begin; s < end; ++s) {
            std::iota(parent.begin(), parent.end(), std::size_t{0});
            std::size_t loops = arc_count;
            auto unite = [&](std::size_t a, std::size_t b) {
                a = find(a);
                b = find(b);
                if (a != b) {
                    parent[a] = b;
                    --loops;
                }
            };
            std::size_t a_count = 0;
            for (std::size_t k = 0; k < c; ++k) {
                const auto& x = xs[k];
                if ((s >> k) & 1u) {
                    unite(x[0], x[1]);
                    unite(x[2], x[3]);
                    ++a_count;
                } else {
                    unite(x[0], x[3]);
                    unite(x[1], x[2]);
                }
            }
            ++counts[a_count * (max_loops + 1) + loops];
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(states, 64))));
    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>((c + 1) * (max_loops + 1), 0));
    if (workers == 1) {
        run_range(0, states, partial[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (states + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = std::min(states, chunk * w);
            const std::uint64_t end = std::min(states, begin + chunk);
            pool.emplace_back([&, begin, end, w] { run_range(begin, end, partial[w]); });
        }
        for (auto& t : pool) t.join();
    }

    std::map<std::pair<std::int64_t, std::size_t>, BigInt> counts;
    for (std::size_t a = 0; a <= c; ++a)
        for (std::size_t loops = 0; loops <= max_loops; ++loops) {
            BigInt total = 0;
            for (const auto& p : partial) total += p[a * (max_loops + 1) + loops];
            if (total != 0) {
                const auto a_exp = static_cast<std::int64_t>(2 * a) - static_cast<std::int64_t>(c);
                counts[{a_exp, loops + d.free_loops()}] += total;
            }
        }
    return assemble_bracket(counts);
}

/// Crossing-by-crossing contraction. The partial state is a perfect matching
/// of the dangling arc ends, each with a (A-exponent, closed loops) tally.
inline HalfLaurent bracket_contraction(const PlanarDiagram& d)
{
    std::size_t arc_count = 0;
    const auto xs = dense_arcs(d, arc_count);
    const std::size_t c = xs.size();

    // Greedy order: next crossing shares the most arcs with the open boundary.
    std::vector<std::size_t> order;
    {
        std::vector<bool> used(c, false), open(arc_count, false);
        for (std::size_t step = 0; step < c; ++step) {
            std::size_t best = c;
            int best_score = -1;
            for (std::size_t k = 0; k < c; ++k) {
                if (used[k]) continue;
                int score = 0;
                for (auto a : xs[k]) score += open[a] ? 1 : 0;
                if (score > best_score) {
                    best_score = score;
                    best = k;
                }
            }
            used[best] = true;
            order.push_back(best);
            for (auto a : xs[best]) open[a] = !open[a];
        }
    }

    using Matching = std::vector<std::pair<std::size_t, std::size_t>>;  // sorted (min, max)
    using Tally = std::map<std::pair<std::int64_t, std::size_t>, BigInt>;
    std::map<Matching, Tally> states;
    states[{}][{0, 0}] = 1;

    for (std::size_t k : order) {
        const auto& x = xs[k];
        const std::array<std::array<std::size_t, 4>, 2> smoothings{{{x[0], x[1], x[2], x[3]}, {x[0], x[3], x[1], x[2]}}};
        std::map<Matching, Tally> next;
        for (const auto& [matching, tally] : states) {
            for (int which = 0; which < 2; ++which) {
                std::unordered_map<std::size_t, std::size_t> partner;
                for (const auto& [u, v] : matching) {
                    partner[u] = v;
                    partner[v] = u;
                }
                std::size_t loops = 0;
                const auto& sm = smoothings[static_cast<std::size_t>(which)];
                for (int e = 0; e < 2; ++e) {
                    const std::size_t u = sm[static_cast<std::size_t>(2 * e)], v = sm[static_cast<std::size_t>(2 * e + 1)];
                    if (u == v) {
                        ++loops;  // both ends of one arc joined at this crossing
                        continue;
                    }
                    const auto pu = partner.find(u);
                    const auto pv = partner.find(v);
                    if (pu != partner.end() && pv != partner.end() && pu->second == v) {
                        partner.erase(u);
                        partner.erase(v);
                        ++loops;
                        continue;
                    }
                    // Extend the path: a dangling end seen before becomes interior.
                    std::size_t end_u = u, end_v = v;
                    if (pu != partner.end()) {
                        end_u = pu->second;
                        partner.erase(u);
                    }
                    if (pv != partner.end()) {
                        end_v = pv->second;
                        partner.erase(v);
                    }
                    partner[end_u] = end_v;
                    partner[end_v] = end_u;
                }
                Matching m;
                for (const auto& [u, v] : partner)
                    if (u < v) m.emplace_back(u, v);
                std::sort(m.begin(), m.end());
                auto& dest = next[m];
                const std::int64_t shift = which == 0 ? 1 : -1;
                for (const auto& [key, count] : tally) dest[{key.first + shift, key.second + loops}] += count;
            }
        }
        states = std::move(next);
    }

    std::map<std::pair<std::int64_t, std::size_t>, BigInt> counts;
    for (const auto& [matching, tally] : states) {
        if (!matching.empty()) throw std::logic_error("bracket: dangling arcs after contraction");
        for (const auto& [key, count] : tally) counts[{key.first, key.second + d.free_loops()}] += count;
    }
    return assemble_bracket(counts);
}

} // namespace detail

/// Kauffman bracket as a polynomial in A (doubled-exponent keys).
inline HalfLaurent kauffman_bracket(const PlanarDiagram& d, const BracketOptions& opts = {})
{
    const std::size_t c = d.crossing_count();
    if (c > opts.crossing_limit)
        throw CrossingLimitExceeded("bracket: " + std::to_string(c) + " crossings exceed the limit of "
                                    + std::to_string(opts.crossing_limit));
    if (c == 0) return detail::loop_factor_pow(d.free_loops() - 1);
    BracketMethod method = opts.method;
    if (method == BracketMethod::automatic) method = c <= 16 ? BracketMethod::state_sum : BracketMethod::contraction;
    if (method == BracketMethod::state_sum) {
        if (c > 62) throw CrossingLimitExceeded("bracket: state sum supports at most 62 crossings");
        return detail::bracket_state_sum(d, opts.threads);
    }
    return detail::bracket_contraction(d);
}

/// Jones polynomial in t (doubled-exponent keys).
inline HalfLaurent jones(const PlanarDiagram& d, const BracketOptions& opts = {})
{
    const std::int64_t w = d.writhe();
    const HalfLaurent normalized = kauffman_bracket(d, opts).shifted(-6 * w) * BigInt(w % 2 == 0 ? 1 : -1);
    HalfLaurent v;
    for (const auto& [key, c] : normalized.terms()) {
        // key = 2e for A^e, and A^e = t^(-e/4), so the doubled t-exponent is -key/4.
        if (key % 4 != 0) throw std::logic_error("jones: non-quarter-integral exponent");
        v.add_term(-key / 4, c);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Periodicity congruences

struct CongruenceReport {
    bool pass = false;
    std::int64_t p = 0;
    /// Variable of lhs/rhs: "t" for Jones-based checks, "q" for P_2.
    std::string var = "t";
    HalfLaurent lhs;
    HalfLaurent rhs;
    /// Normal form of lhs - rhs, keys are exponents of var^(1/2).
    HalfLaurent residual;

    friend bool operator==(const CongruenceReport&, const CongruenceReport&) = default;
};

inline void require_odd_prime(std::int64_t p, const char* who)
{
    if (!is_prime(p) || p == 2) throw std::invalid_argument(std::string(who) + ": p must be an odd prime");
}

/// V_L == V_L'^p mod (p, eta_p) for L = closure(b^p), L' = closure(b).
inline CongruenceReport murasugi_check(const BraidWord& b, std::int64_t p, const BracketOptions& opts = {})
{
    require_odd_prime(p, "murasugi_check");
    CongruenceReport rep;
    rep.p = p;
    rep.lhs = jones(closure(braid_power(b, static_cast<int>(p))), opts);
    rep.rhs = jones(closure(b), opts).pow(static_cast<unsigned>(p));
    rep.residual = qpoly::reduce_mod(rep.lhs - rep.rhs, p, qpoly::eta(p));
    rep.pass = rep.residual.is_zero();
    return rep;
}

/// P_2 = [2] V at sqrt(t) = -1/sqrt(q).
inline HalfLaurent p2_from_jones(const HalfLaurent& v_t)
{
    return qpoly::quantum_integer(2) * v_t.substitute_neg_inv_sqrt();
}

/// P_2(L) == P_2(L')^p mod (p, [2]^p - [2]) in Z[q^(+-1/2)]; p = 2 allowed.
inline CongruenceReport p2_check(const BraidWord& b, std::int64_t p, const BracketOptions& opts = {})
{
    if (!is_prime(p)) throw std::invalid_argument("p2_check: p must be prime");
    CongruenceReport rep;
    rep.p = p;
    rep.var = "q";
    rep.lhs = p2_from_jones(jones(closure(braid_power(b, static_cast<int>(p))), opts));
    rep.rhs = p2_from_jones(jones(closure(b), opts)).pow(static_cast<unsigned>(p));
    rep.residual = qpoly::reduce_mod(rep.lhs - rep.rhs, p, qpoly::quantum_two_generator(p));
    rep.pass = rep.residual.is_zero();
    return rep;
}

/// V_L(t) - t^(2lk) V_L(1/t) == 0 mod (p, t^p - 1), p odd.
inline CongruenceReport yokota_check(const PlanarDiagram& d, std::int64_t p, const BracketOptions& opts = {})
{
    require_odd_prime(p, "yokota_check");
    CongruenceReport rep;
    rep.p = p;
    const HalfLaurent v = jones(d, opts);
    const std::int64_t two_lk = d.linking_data().total_lk_doubled;
    rep.lhs = v;
    rep.rhs = v.mirror().shifted(2 * two_lk);
    const HalfLaurent gen = HalfLaurent::monomial(2 * p) - HalfLaurent::constant(1);
    rep.residual = qpoly::reduce_mod(rep.lhs - rep.rhs, p, gen);
    rep.pass = rep.residual.is_zero();
    return rep;
}

} // namespace qperiod::link
