// Acceptance gate: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "oracle.hpp"
#include "ternrep/ternrep.hpp"

using namespace ternrep;
using nlohmann::json;

namespace {

const QuadForm kF4{8, 14, 50, -8, -4, -4};
const QuadForm kG4{8, 14, 14, 10, 4, 4};

Matrix3 mat(std::array<std::array<Int, 3>, 3> rows) {
    Matrix3 out;
    out.m = rows;
    return out;
}

const Matrix3 kT = mat({{{1, 0, 0}, {0, 0, -2}, {0, -1, 1}}});
const Matrix3 kT1 = mat({{{4, 2, 2}, {0, 4, 2}, {0, 0, 2}}});
const Matrix3 kTtilde = mat({{{12, 6, 2}, {0, 0, 12}, {0, -12, -8}}});

std::vector<ResidueClass> classes(std::initializer_list<std::pair<Int, Int>> list) {
    std::vector<ResidueClass> out;
    for (auto [d, a] : list) out.push_back(ResidueClass::make(d, a));
    return out;
}

struct Relation {
    std::string id;
    bool forward;  // true: Q(g) <= Q(f), false: Q(f) <= Q(g)
    std::vector<ResidueClass> classes;
};

const std::vector<Relation>& relations() {
    static const std::vector<Relation> list{
        {"S4", true, classes({{4, 0}, {12, 6}, {12, 10}})},
        {"S6", true, classes({{4, 2}, {8, 0}, {24, 12}, {24, 20}, {48, 4}, {48, 28}})},
        {"S7", true, classes({{4, 2}, {24, 0}, {24, 4}, {24, 8}, {24, 12}, {24, 16}, {24, 20}})},
        {"S8", true, classes({{4, 0}, {12, 2}, {12, 6}, {36, 10}, {36, 22}, {36, 34}})},
        {"S8", false, classes({{4, 0}, {12, 2}, {12, 6}, {36, 10}, {36, 22}, {36, 34}})},
    };
    return list;
}

const std::map<std::string, std::vector<ResidueClass>>& cover_lists() {
    static const std::map<std::string, std::vector<ResidueClass>> lists{
        {"S4", classes({{4, 0}, {12, 6}, {12, 10}, {12, 2}})},
        {"S6", classes({{4, 2}, {8, 0}, {24, 12}, {24, 20}, {48, 4}, {48, 28}})},
        {"S7", classes({{4, 2}, {24, 0}, {24, 4}, {24, 8}, {24, 12}, {24, 16}, {24, 20}})},
        {"S8", classes({{4, 0}, {12, 2}, {12, 6}, {36, 10}, {36, 22}, {36, 34}})},
    };
    return lists;
}

/// Collects failures; a criterion passes when nothing was recorded.
struct Probe {
    std::vector<std::string> problems;
    void expect(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }
};

bool oracle_identity(const QuadForm& super, const QuadForm& sub, const Matrix3& t, Int scale) {
    const auto lhs = oracle::congruent(oracle::doubled(super), t.m);
    const auto rhs = oracle::doubled(sub);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (lhs[i][j] != scale * rhs[i][j]) return false;
    return true;
}

void subform_witnesses(Probe& p) {
    p.expect(oracle_identity(kG4, kF4, kT, 1), "displayed T fails T^t(2M_g)T = 2M_f");
    for (const char* id : {"S4", "S6", "S7"}) {
        const QuadForm f = resolve_form(std::string(id) + "f"), g = resolve_form(std::string(id) + "g");
        const auto t = subform_witness(f, g);
        p.expect(t.has_value() && oracle_identity(g, f, *t, 1), std::string("no valid subform witness for ") + id);
    }
}

void transform_counts(Probe& p) {
    const auto r4 = find_transforms(kF4, kG4, 4);
    p.expect(r4.complete && r4.size() == 8, "|R(f,g,4)| = " + std::to_string(r4.size()));
    p.expect(r4.contains(kT1), "T1 missing from R(f,g,4)");
    const auto r12 = find_transforms(kF4, kG4, 12);
    p.expect(r12.complete && r12.size() == 144, "|R(f,g,12)| = " + std::to_string(r12.size()));
    for (const auto* set : {&r4, &r12})
        for (const auto& t : set->matrices)
            p.expect(oracle_identity(kF4, kG4, t, set->d * set->d), "identity fails for " + to_string(t));
}

void residue_sets(Probe& p) {
    const auto r40 = residue_vectors(kG4, ResidueClass::make(4, 0));
    p.expect(r40.size() == 16, "|R(g,4,0)| = " + std::to_string(r40.size()));
    for (const auto& v : r40) p.expect(v.y % 2 == 0 && v.z % 2 == 0, "odd coordinate in " + to_string(v));
    const ResidueClass cls = ResidueClass::make(12, 2);
    const auto r122 = residue_vectors(kG4, cls);
    p.expect(r122.size() == 864, "|R(g,12,2)| = " + std::to_string(r122.size()));
    const auto report = precedes(kF4, kG4, cls);
    p.expect(report.bad.size() == 32, "bad cosets: " + std::to_string(report.bad.size()));
    std::set<Vector3> expected;
    for (const auto& v : r122)
        if (v.x % 3 != 0 && (v.y == 3 || v.y == 9) && (v.z == 3 || v.z == 9)) expected.insert(v);
    p.expect(std::set<Vector3>(report.bad.begin(), report.bad.end()) == expected,
             "bad set differs from the congruence description");
}

void precedence_regression(Probe& p) {
    for (const auto& rel : relations()) {
        QuadForm f = resolve_form(rel.id + "f"), g = resolve_form(rel.id + "g");
        if (!rel.forward) std::swap(f, g);
        for (const auto& cls : rel.classes)
            p.expect(precedes(f, g, cls).precedes(), rel.id + (rel.forward ? "" : " (reverse)") + " fails at " + to_string(cls));
    }
    p.expect(!precedes(kF4, kG4, ResidueClass::make(12, 2)).precedes(), "S4 (12,2) unexpectedly holds");
}

void escape_argument(Probe& p) {
    const auto report = precedes(kF4, kG4, ResidueClass::make(12, 2));
    const auto escape = build_escape(kF4, kG4, report);
    p.expect(check_escape_candidate(kF4, kG4, report, escape.ttilde).ok, "built escape fails its own invariants");
    const auto shown = check_escape_candidate(kF4, kG4, report, kTtilde);
    p.expect(shown.ok, "displayed matrix rejected: " + shown.failure);
    const auto eig = eigen_data(kTtilde, 12);
    p.expect(!eig.finite_order, "displayed matrix has finite order");
    p.expect(eig.line_eigenvectors() == std::vector<Vector3>{{1, 0, 0}}, "eigenvectors are not +-(1,0,0)");
    p.expect(escape.bases.size() == 1 && escape.bases[0].value == 8 && escape.bases[0].vector == Vector3{1, 0, 0},
             "base value 8 with witness (1,0,0) missing");
    p.expect(evaluate(kF4, {1, 0, 0}) == 8, "f(1,0,0) != 8");
}

void end_to_end(Probe& p) {
    std::mt19937_64 rng(2024);
    for (const auto& [id, list] : cover_lists()) {
        ProveOptions options;
        options.classes = list;
        options.empirical_bound = 100000;
        options.jobs = default_jobs();
        const std::string text = emit(prove_pair(resolve_form(id + "f"), resolve_form(id + "g"), options));
        const auto verdict = check(text);
        p.expect(verdict.accepted, id + " certificate rejected at " + verdict.clause);

        const json base = json::parse(text);
        int accepted = 0;
        for (int trial = 0; trial < 100; ++trial) {
            json cert = base;
            std::vector<json*> targets;
            for (const char* dir : {"f_in_g", "g_in_f"}) {
                json& d = cert["directions"][dir];
                if (d["method"] == "subform") {
                    targets.push_back(&d["matrix"]);
                    continue;
                }
                for (json& cls : d["classes"]) {
                    for (json& t : cls["transforms"]) targets.push_back(&t);
                    if (!cls["escape"].is_null()) targets.push_back(&cls["escape"]["matrix"]);
                }
            }
            json& m = *targets[rng() % targets.size()];
            const int r = static_cast<int>(rng() % 3), c = static_cast<int>(rng() % 3);
            const Int step = static_cast<Int>(rng() % 10) - 5;
            m[r][c] = m[r][c].get<Int>() + (step >= 0 ? step + 1 : step);
            if (check(cert).accepted) ++accepted;
        }
        p.expect(accepted == 0, id + ": " + std::to_string(accepted) + " perturbed certificates accepted");
    }
}

void table_sets_agree(Probe& p) {
    for (const auto& set : table_sets()) {
        const auto report = verify_table(set.id, 1'000'000, default_jobs());
        p.expect(report.sets_equal(), set.id + " differs at " + std::to_string(report.mismatch.value_or(-1)));
        p.expect(report.all_non_isometric(), set.id + " has an isometric pair");
    }
}

void vacuous_class(Probe& p) {
    const auto q = represented_set(kG4, 1'000'000, default_jobs());
    for (Int n : q.members)
        if (n % 12 == 10) {
            p.expect(false, "g represents " + std::to_string(n));
            break;
        }
}

void oracle_equivalence(Probe& p) {
    const Int bound = 2000;
    for (const auto& [name, f] : fixture_registry()) {
        const auto naive = oracle::counts(f, bound);
        const auto series = theta(f, bound);
        const auto set = represented_set(f, bound);
        std::vector<Int> expected;
        for (Int n = 0; n <= bound; ++n) {
            if (naive[n] > 0) expected.push_back(n);
            if (static_cast<Int>(series.coeffs[n]) != naive[n]) {
                p.expect(false, name + " theta differs at " + std::to_string(n));
                break;
            }
            if (n % 97 == 0 && rep_count(f, n) != naive[n]) p.expect(false, name + " rep_count differs at " + std::to_string(n));
        }
        p.expect(set.members == expected, name + " represented set differs");
    }
}

void inclusion_property(Probe& p) {
    const Int bound = 100000;
    for (const auto& rel : relations()) {
        QuadForm f = resolve_form(rel.id + "f"), g = resolve_form(rel.id + "g");
        if (!rel.forward) std::swap(f, g);
        const auto qf = represented_set(f, bound), qg = represented_set(g, bound);
        for (const auto& cls : rel.classes)
            for (Int n : qg.members)
                if (mod(n, cls.d) == cls.a && !qf.contains(n))
                    p.expect(false, rel.id + " " + to_string(cls) + " misses " + std::to_string(n));
    }
}

void kaplansky_families(Probe& p) {
    const std::vector<std::tuple<KaplanskyFamily, Int, Int, const char*>> cases{
        {KaplanskyFamily::iii, 1, 1, "iii(1,1)"}, {KaplanskyFamily::iii, 2, 1, "iii(2,1)"},
        {KaplanskyFamily::iii, 1, 2, "iii(1,2)"}, {KaplanskyFamily::iv, 3, 1, "iv(3,1)"},
        {KaplanskyFamily::iv, 4, 1, "iv(4,1)"}};
    for (const auto& [kind, a, b, label] : cases) {
        const auto [f, g] = kaplansky_family_pair(kind, a, b);
        p.expect(is_positive_definite(f) && is_positive_definite(g), std::string(label) + " not positive definite");
        const auto qf = represented_set(f, 10000), qg = represented_set(g, 10000);
        if (auto n = first_difference(qf, qg)) p.expect(false, std::string(label) + " differs at " + std::to_string(*n));
    }
}

void primitive_sets(Probe& p) {
    const QuadForm f = resolve_form("S8f"), g = resolve_form("S8g");
    const auto qf = primitive_represented_set(f, 100000, default_jobs());
    const auto qg = primitive_represented_set(g, 100000, default_jobs());
    if (auto n = first_difference(qf, qg)) p.expect(false, "primitive sets differ at " + std::to_string(*n));
}

}  // namespace

int main() {
    struct Criterion {
        const char* title;
        double limit_seconds;
        std::function<void(Probe&)> body;
    };
    const std::vector<Criterion> criteria{
        {"subform witnesses for S4, S6, S7", 3, subform_witnesses},
        {"transform-set counts 8 and 144", 10, transform_counts},
        {"residue sets R(g,4,0), R(g,12,2) and the 32 bad cosets", 10, residue_sets},
        {"precedence regression for S4, S6, S7, S8", 120, precedence_regression},
        {"escape argument for S4 at 12:2", 30, escape_argument},
        {"end-to-end proofs, certificates and perturbation fuzz", 300, end_to_end},
        {"all 15 table sets agree up to 10^6 and are non-isometric", 600, table_sets_agree},
        {"no value of g_S4 up to 10^6 is 10 mod 12", 60, vacuous_class},
        {"enumeration agrees with the brute-force oracle up to 2000", 60, oracle_equivalence},
        {"precedence implies inclusion up to 10^5", 60, inclusion_property},
        {"Kaplansky family pairs agree up to 10^4", 60, kaplansky_families},
        {"S8 primitive sets agree up to 10^5", 120, primitive_sets},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        Probe probe;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(probe);
        } catch (const std::exception& e) {
            probe.problems.push_back(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.limit_seconds)
            probe.problems.push_back("took " + std::to_string(seconds) + " s, limit " + std::to_string(c.limit_seconds));
        const bool ok = probe.problems.empty();
        failed += !ok;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2f s", seconds);
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1) << ": " << c.title << " (" << timing << ")\n";
        for (std::size_t k = 0; k < probe.problems.size() && k < 5; ++k) std::cout << "       " << probe.problems[k] << "\n";
        std::cout.flush();
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
