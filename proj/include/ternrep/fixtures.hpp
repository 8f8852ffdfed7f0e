#pragma once

// Named forms: the fifteen sets of ternary forms known to share their
// represented integers, and the scaled-by-2 pairs used in the proofs.

#include <map>
#include <string>
#include <vector>

#include "ternrep/forms.hpp"

namespace ternrep {

struct FixtureSet {
    std::string id;                  // "S1" .. "S15"
    std::vector<std::string> names;  // "S1a", "S1b", ...
    std::vector<QuadForm> forms;
};

inline const std::vector<FixtureSet>& table_sets() {
    static const std::vector<FixtureSet> sets = [] {
        // (a, b, c, r, s, t) for a x^2 + b y^2 + c z^2 + r yz + s xz + t xy.
        const std::vector<std::vector<QuadForm>> rows = {
            {{5, 8, 8, -5, -1, -4}, {5, 5, 8, -1, -4, -2}},
            {{3, 4, 7, -1, 0, 0}, {3, 4, 7, 4, 3, 3}},
            {{1, 4, 7, -1, 0, 0}, {1, 4, 5, -1, -1, 0}},
            {{4, 7, 25, -4, -2, -2}, {4, 7, 7, 5, 2, 2}},
            {{2, 6, 41, -3, -1, 0}, {2, 2, 41, 1, 2, 2}},
            {{2, 6, 14, -3, -1, 0}, {2, 2, 14, 1, 2, 2}},
            {{2, 4, 8, 4, 1, 1}, {2, 2, 4, -1, -2, 0}},
            {{5, 5, 8, 0, -4, -3}, {5, 7, 7, 6, 1, 5}},
            {{3, 3, 7, 1, 2, 1}, {3, 5, 5, 3, 1, 3}},
            {{5, 5, 8, -1, -2, -4}, {5, 5, 6, 0, -3, -2}},
            {{2, 4, 7, 0, -1, -1}, {2, 4, 7, 4, 2, 1}},
            {{4, 6, 7, 3, 2, 3}, {4, 4, 6, 0, -3, -2}},
            {{5, 12, 28, 0, -4, -4}, {5, 12, 24, -8, 0, -4}, {5, 12, 21, -4, -2, -4}, {5, 12, 12, 0, -4, -4}},
            {{3, 5, 7, -2, 0, -2}, {3, 5, 6, 0, -2, -2}, {3, 5, 6, 4, 2, 2}, {3, 3, 5, -2, -2, 0}},
            {{3, 5, 5, 5, 2, 3}, {3, 3, 5, -1, -2, -1}, {3, 3, 5, 2, 3, 1}, {3, 3, 3, 1, 1, 3}},
        };
        std::vector<FixtureSet> out;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            FixtureSet set;
            set.id = "S" + std::to_string(i + 1);
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                set.names.push_back(set.id + static_cast<char>('a' + j));
                set.forms.push_back(rows[i][j]);
            }
            out.push_back(std::move(set));
        }
        return out;
    }();
    return sets;
}

/// Every name the registry resolves: table entries plus the scaled pairs
/// S4f/S4g, S6f/S6g, S7f/S7g, S8f/S8g (f = 2 x first entry, g = 2 x second).
inline const std::map<std::string, QuadForm>& fixture_registry() {
    static const std::map<std::string, QuadForm> registry = [] {
        std::map<std::string, QuadForm> out;
        for (const auto& set : table_sets())
            for (std::size_t j = 0; j < set.forms.size(); ++j) out[set.names[j]] = set.forms[j];
        for (const char* id : {"S4", "S6", "S7", "S8"}) {
            out[std::string(id) + "f"] = scale(out.at(std::string(id) + "a"), 2);
            out[std::string(id) + "g"] = scale(out.at(std::string(id) + "b"), 2);
        }
        return out;
    }();
    return registry;
}

inline const FixtureSet& fixture_set(const std::string& id) {
    for (const auto& set : table_sets())
        if (set.id == id) return set;
    throw Error(ErrorKind::UnknownFixture, "no table set named " + id);
}

/// A registry name or a literal "a,b,c,r,s,t".
inline QuadForm resolve_form(const std::string& text) {
    const auto& registry = fixture_registry();
    if (auto it = registry.find(text); it != registry.end()) return it->second;
    if (text.find(',') == std::string::npos) throw Error(ErrorKind::UnknownFixture, "no fixture named " + text);
    return parse_form(text);
}

}  // namespace ternrep
