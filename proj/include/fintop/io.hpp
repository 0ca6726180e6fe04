#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fintop/canopy.hpp"
#include "fintop/group_action.hpp"
#include "fintop/map.hpp"
#include "fintop/space.hpp"

namespace fintop::io {

struct ParseError {
    std::string file;
    std::size_t line = 0;
    std::string reason;

    std::string message() const {
        return file + ":" + std::to_string(line) + ": " + reason;
    }
};

[[noreturn]] inline void parse_fail(const std::string& file, std::size_t line,
                                    const std::string& reason) {
    fail(ErrorKind::ParseError, ParseError{file, line, reason}.message());
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// ---------------------------------------------------------------------------
// .topo : line-oriented space files
//
//   space NAME
//   points a b c
//   minopen a : a b
//   minopen b : b
//   ...

struct NamedSpace {
    std::string name;
    FinSpace space;
};

inline NamedSpace parse_topo_text(const std::string& text, const std::string& file = "<memory>") {
    std::istringstream is(text);
    std::string line, name;
    std::vector<PointId> points;
    std::map<PointId, std::vector<PointId>> table;
    std::size_t lineno = 0;
    bool have_points = false;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks[0] == "space") {
            if (toks.size() != 2) parse_fail(file, lineno, "expected: space NAME");
            name = toks[1];
        } else if (toks[0] == "points") {
            points.assign(toks.begin() + 1, toks.end());
            have_points = true;
        } else if (toks[0] == "minopen") {
            if (toks.size() < 3 || toks[2] != ":")
                parse_fail(file, lineno, "expected: minopen P : Q R ...");
            table[toks[1]] = std::vector<PointId>(toks.begin() + 3, toks.end());
        } else {
            parse_fail(file, lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    if (name.empty()) parse_fail(file, lineno, "missing 'space NAME' header");
    if (!have_points) parse_fail(file, lineno, "missing 'points' line");
    try {
        return NamedSpace{name, FinSpace::make(points, table)};
    } catch (const TopologyError& e) {
        parse_fail(file, lineno, std::string("invalid space: ") + e.what());
    }
}

inline std::string emit_topo(const NamedSpace& ns) {
    std::ostringstream os;
    os << "space " << ns.name << "\n";
    os << "points";
    for (const auto& p : ns.space.point_names()) os << " " << p;
    os << "\n";
    for (std::size_t i = 0; i < ns.space.size(); ++i) {
        os << "minopen " << ns.space.name(i) << " :";
        for (auto j : mask_members(ns.space.minopen(i))) os << " " << ns.space.name(j);
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// .map : point functions between named spaces
//
//   map NAME : A -> B
//   p -> q

struct RawMap {
    std::string name, dom, cod;
    std::map<PointId, PointId> assignment;
};

inline RawMap parse_map_text(const std::string& text, const std::string& file = "<memory>") {
    std::istringstream is(text);
    std::string line;
    RawMap out;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks[0] == "map") {
            if (toks.size() != 6 || toks[2] != ":" || toks[4] != "->")
                parse_fail(file, lineno, "expected: map NAME : A -> B");
            out.name = toks[1];
            out.dom = toks[3];
            out.cod = toks[5];
        } else if (toks.size() == 3 && toks[1] == "->") {
            if (out.name.empty()) parse_fail(file, lineno, "assignment before map header");
            out.assignment[toks[0]] = toks[2];
        } else {
            parse_fail(file, lineno, "expected: P -> Q");
        }
    }
    if (out.name.empty()) parse_fail(file, lineno, "missing 'map' header");
    return out;
}

inline std::string emit_map(const std::string& name, const std::string& dom_name,
                            const std::string& cod_name, const ContinuousMap& f) {
    std::ostringstream os;
    os << "map " << name << " : " << dom_name << " -> " << cod_name << "\n";
    for (std::size_t i = 0; i < f.dom().size(); ++i)
        os << f.dom().name(i) << " -> " << f.cod().name(f(i)) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// .act : group actions
//
//   action NAME : SPACE
//   elements e g
//   compose g g = e      (identity rows may be omitted)
//   act g : p -> q

struct RawAction {
    std::string name, space;
    std::vector<std::string> elements;
    std::map<std::pair<std::string, std::string>, std::string> compose;
    std::map<std::string, std::map<PointId, PointId>> act;
};

inline RawAction parse_act_text(const std::string& text, const std::string& file = "<memory>") {
    std::istringstream is(text);
    std::string line;
    RawAction out;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks[0] == "action") {
            if (toks.size() != 4 || toks[2] != ":")
                parse_fail(file, lineno, "expected: action NAME : SPACE");
            out.name = toks[1];
            out.space = toks[3];
        } else if (toks[0] == "elements") {
            out.elements.assign(toks.begin() + 1, toks.end());
        } else if (toks[0] == "compose") {
            if (toks.size() != 5 || toks[3] != "=")
                parse_fail(file, lineno, "expected: compose A B = C");
            out.compose[{toks[1], toks[2]}] = toks[4];
        } else if (toks[0] == "act") {
            if (toks.size() != 6 || toks[2] != ":" || toks[4] != "->")
                parse_fail(file, lineno, "expected: act G : P -> Q");
            out.act[toks[1]][toks[3]] = toks[5];
        } else {
            parse_fail(file, lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    if (out.name.empty()) parse_fail(file, lineno, "missing 'action' header");
    if (out.elements.empty()) parse_fail(file, lineno, "missing 'elements' line");
    return out;
}

/// Resolve a parsed action against its space.  Missing composition entries
/// default to identity composition rules only when one side is the first
/// listed element, which is taken as the identity when unspecified rows
/// would otherwise be needed.
inline GroupAction resolve_action(const RawAction& raw, const FinSpace& space) {
    const std::size_t n = raw.elements.size();
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx[raw.elements[i]] = i;
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    const std::string& id = raw.elements.front();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            auto it = raw.compose.find({raw.elements[a], raw.elements[b]});
            if (it != raw.compose.end()) {
                auto jt = idx.find(it->second);
                if (jt == idx.end())
                    fail(ErrorKind::InvalidAction, "composition names unknown element");
                table[a][b] = jt->second;
            } else if (raw.elements[a] == id) {
                table[a][b] = b;
            } else if (raw.elements[b] == id) {
                table[a][b] = a;
            } else {
                fail(ErrorKind::InvalidAction,
                     "missing composition entry " + raw.elements[a] + " * " + raw.elements[b]);
            }
        }
    std::vector<ContinuousMap> maps;
    for (std::size_t g = 0; g < n; ++g) {
        auto it = raw.act.find(raw.elements[g]);
        if (it == raw.act.end()) {
            if (raw.elements[g] == id) {
                maps.push_back(ContinuousMap::identity(space));
                continue;
            }
            fail(ErrorKind::InvalidAction, "missing point map for element " + raw.elements[g]);
        }
        maps.push_back(ContinuousMap::make_by_names(space, space, it->second));
    }
    return GroupAction::make(space, raw.elements, table, maps);
}

// ---------------------------------------------------------------------------
// .canopy : gluing data over named spaces
//
//   canopy NAME
//   chart 1 = SPACE
//   overlap 1 2 = SPACE
//   rho1 1 2 : z -> x
//   rho2 1 2 : z -> y

struct RawCanopy {
    std::string name;
    std::map<std::size_t, std::string> charts;
    std::map<std::pair<std::size_t, std::size_t>, std::string> overlaps;
    std::map<std::pair<std::size_t, std::size_t>, std::map<PointId, PointId>> rho1, rho2;
};

inline RawCanopy parse_canopy_text(const std::string& text, const std::string& file = "<memory>") {
    std::istringstream is(text);
    std::string line;
    RawCanopy out;
    std::size_t lineno = 0;
    auto to_index = [&](const std::string& tok) -> std::size_t {
        try {
            return std::stoul(tok);
        } catch (...) {
            parse_fail(file, lineno, "chart index expected, got '" + tok + "'");
        }
    };
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks[0] == "canopy") {
            if (toks.size() != 2) parse_fail(file, lineno, "expected: canopy NAME");
            out.name = toks[1];
        } else if (toks[0] == "chart") {
            if (toks.size() != 4 || toks[2] != "=")
                parse_fail(file, lineno, "expected: chart J = SPACE");
            out.charts[to_index(toks[1])] = toks[3];
        } else if (toks[0] == "overlap") {
            if (toks.size() != 5 || toks[3] != "=")
                parse_fail(file, lineno, "expected: overlap J K = SPACE");
            out.overlaps[{to_index(toks[1]), to_index(toks[2])}] = toks[4];
        } else if (toks[0] == "rho1" || toks[0] == "rho2") {
            if (toks.size() != 7 || toks[3] != ":" || toks[5] != "->")
                parse_fail(file, lineno, "expected: rho1 J K : Z -> X");
            auto key = std::make_pair(to_index(toks[1]), to_index(toks[2]));
            auto& target = (toks[0] == "rho1") ? out.rho1 : out.rho2;
            target[key][toks[4]] = toks[6];
        } else {
            parse_fail(file, lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    if (out.name.empty()) parse_fail(file, lineno, "missing 'canopy' header");
    if (out.charts.empty()) parse_fail(file, lineno, "canopy has no charts");
    return out;
}

/// Resolve a parsed canopy against a space registry.  Unlisted overlaps are
/// empty; missing diagonal copies are preserved so validation can report the
/// reflexivity failure.
inline Canopy resolve_canopy(const RawCanopy& raw,
                             const std::map<std::string, FinSpace>& spaces) {
    auto lookup = [&](const std::string& name) -> const FinSpace& {
        auto it = spaces.find(name);
        if (it == spaces.end()) fail(ErrorKind::ParseError, "unknown space '" + name + "'");
        return it->second;
    };
    std::size_t n = 0;
    for (const auto& [j, _] : raw.charts) n = std::max(n, j + 1);
    std::vector<FinSpace> charts(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto it = raw.charts.find(j);
        if (it == raw.charts.end())
            fail(ErrorKind::ParseError, "chart " + std::to_string(j) + " missing");
        charts[j] = lookup(it->second);
    }
    FinSpace empty;
    std::vector<std::vector<FinSpace>> overlaps(n, std::vector<FinSpace>(n, empty));
    std::vector<std::vector<ContinuousMap>> rho1, rho2;
    rho1.resize(n);
    rho2.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            auto it = raw.overlaps.find({j, k});
            if (it != raw.overlaps.end()) overlaps[j][k] = lookup(it->second);
            auto build = [&](const auto& table, const FinSpace& cod) {
                const FinSpace& ov = overlaps[j][k];
                auto rt = table.find(std::make_pair(j, k));
                if (ov.empty()) return ContinuousMap::make(ov, cod, {});
                if (rt == table.end())
                    fail(ErrorKind::ParseError, "missing projection table for overlap " +
                                                    std::to_string(j) + " " + std::to_string(k));
                return ContinuousMap::make_by_names(ov, cod, rt->second);
            };
            rho1[j].push_back(build(raw.rho1, charts[j]));
            rho2[j].push_back(build(raw.rho2, charts[k]));
        }
    return make_canopy(std::move(charts), std::move(overlaps), std::move(rho1), std::move(rho2));
}

// ---------------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot write '" + path + "'");
    out << content;
}

}  // namespace fintop::io
