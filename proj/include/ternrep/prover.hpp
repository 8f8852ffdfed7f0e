#pragma once

// Same-representation proofs for a pair of ternary forms.
//
// A direction Q(g) <= Q(f) is closed either by a subform matrix or by a
// cover: residue classes (d,a) whose union contains every residue g attains,
// each class carrying either a complete good-vector report (no bad cosets)
// or an escape argument. The escape argument handles bad cosets with a
// scaled automorphism K of g (K^t M_g K = d^2 M_g): every bad coset u has
// u K^t == 0 (mod d), so (1/d) u K^t is a new integral vector of the same
// g-value. Iterating can only stall on vectors that are eventually periodic
// under (1/d)K, i.e. eigenvectors of some power of K; their values m t^2 are
// handled by exhibiting f(w) = m.

#include <cstdlib>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ternrep/congruence.hpp"
#include "ternrep/enumerate.hpp"
#include "ternrep/fixtures.hpp"
#include "ternrep/forms.hpp"
#include "ternrep/isometry.hpp"

namespace ternrep {

inline constexpr std::uint64_t kDefaultEscapeNodes = 1'000'000;
inline constexpr int kEscapeEigenPowers = 6;

/// Search budget for escape matrices; TERNREP_MAX_NODES overrides it.
inline std::uint64_t default_max_nodes() {
    if (const char* env = std::getenv("TERNREP_MAX_NODES")) {
        char* end = nullptr;
        unsigned long long value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return value;
    }
    return kDefaultEscapeNodes;
}

struct BaseWitness {
    Int value{};     // m = g(e) for an eigenvector e
    Vector3 vector;  // f(vector) = m
};

struct EscapeArgument {
    ResidueClass cls;
    Matrix3 ttilde;
    std::vector<Vector3> bad;
    std::vector<Vector3> eigenvectors;  // canonical sign; +-e is one class
    std::vector<BaseWitness> bases;     // exceptional families {m t^2 : t >= 1}
};

struct EscapeCheck {
    bool ok = false;
    std::string failure;  // first failing invariant when !ok
    EscapeArgument argument;
};

struct ClassProof {
    ResidueClass cls;
    GoodVectorReport report;
    std::optional<EscapeArgument> escape;
};

struct SubformProof {
    Matrix3 matrix;  // T^t M_super T = M_sub
};

struct CoverProof {
    std::vector<ClassProof> classes;
    CoverResult cover;
};

using DirectionProof = std::variant<SubformProof, CoverProof>;

struct PairProof {
    QuadForm f;
    QuadForm g;
    DirectionProof f_in_g;  // Q(f) <= Q(g)
    DirectionProof g_in_f;  // Q(g) <= Q(f)
    Int empirical_bound{};
};

struct ProveOptions {
    /// Explicit class list used by every cover direction; empty means search.
    std::vector<ResidueClass> classes;
    std::vector<Int> search_moduli{4, 8, 12, 24, 36, 48};
    Int empirical_bound = 1'000'000;
    std::uint64_t escape_max_nodes = default_max_nodes();
    unsigned jobs = 1;
    bool try_subform = true;
};

/// Checks every escape invariant for candidate K against the bad cosets of
/// `report` (a report for g precedes f).
inline EscapeCheck check_escape_candidate(const QuadForm& f, const QuadForm& g, const GoodVectorReport& report,
                                          const Matrix3& k) {
    const ResidueClass cls = report.cls;
    const Int d = cls.d;
    EscapeCheck out;
    out.argument.cls = cls;
    out.argument.ttilde = k;
    out.argument.bad = report.bad;
    auto fail = [&](std::string why) {
        out.ok = false;
        out.failure = std::move(why);
        return out;
    };

    if (!satisfies_transform_identity(g, g, k, checked_mul(d, d))) return fail("escape.matrix_identity");
    for (const Vector3& u : report.bad) {
        auto image = transport(u, k, d);
        if (!image) return fail("escape.integrality(coset=" + to_string(u) + ")");
        if (evaluate(g, *image) != evaluate(g, u) || mod(evaluate(g, *image), d) != cls.a)
            return fail("escape.descent(coset=" + to_string(u) + ")");
    }
    if (eigen_data(k, d).finite_order) return fail("escape.finite_order");

    std::set<Vector3> eigen;
    Matrix3 kp = Matrix3::identity();
    for (int p = 1; p <= kEscapeEigenPowers; ++p) {
        kp = kp * k;
        for (const auto& space : eigen_data(kp).spaces) {
            if (space.dimension > 1)
                return fail("escape.eigenspace_dimension(power=" + std::to_string(p) + ")");
            eigen.insert(space.basis.front());
        }
    }
    out.argument.eigenvectors.assign(eigen.begin(), eigen.end());
    std::set<Int> seen;
    for (const Vector3& e : out.argument.eigenvectors) {
        const Int m = evaluate(g, e);
        if (!seen.insert(m).second) continue;
        auto w = find_representation(f, m);
        if (!w) return fail("escape.base_not_represented(m=" + std::to_string(m) + ")");
        out.argument.bases.push_back({m, *w});
    }
    out.ok = true;
    return out;
}

/// Finds a scaled automorphism of g that closes the bad cosets of `report`.
inline EscapeArgument build_escape(const QuadForm& f, const QuadForm& g, const GoodVectorReport& report,
                                   std::uint64_t max_nodes = default_max_nodes()) {
    if (report.bad.empty())
        throw Error(ErrorKind::InvalidInput, "build_escape needs a class with bad cosets");
    const auto candidates = scaled_automorphisms(g, report.cls.d, 0, max_nodes);
    bool base_failure = false;
    std::string last;
    for (const Matrix3& k : candidates.matrices) {
        auto check = check_escape_candidate(f, g, report, k);
        if (check.ok) return check.argument;
        if (check.failure.rfind("escape.base_not_represented", 0) == 0) base_failure = true;
        last = check.failure;
    }
    const std::string where = "class " + to_string(report.cls) + " (" + std::to_string(candidates.size()) +
                              " candidates" + (candidates.complete ? "" : ", budget exhausted") + ")";
    if (base_failure) throw Error(ErrorKind::EigenvalueBaseNotRepresented, where);
    throw Error(ErrorKind::NoEscapeMatrix, where + (last.empty() ? "" : ", last failure " + last));
}

namespace detail {

/// One transform search per modulus, shared by every class with that modulus.
class TransformCache {
public:
    TransformCache(QuadForm f, QuadForm g) : f_(f), g_(g) {}

    const TransformSet& get(Int d) {
        auto it = sets_.find(d);
        if (it == sets_.end()) it = sets_.emplace(d, find_transforms(f_, g_, d)).first;
        return it->second;
    }

private:
    QuadForm f_, g_;
    std::map<Int, TransformSet> sets_;
};

inline ClassProof prove_class(const QuadForm& f, const QuadForm& g, const ResidueClass& cls,
                              const TransformSet& transforms, const ProveOptions& options) {
    ClassProof proof{cls, classify_good(f, g, cls, transforms), std::nullopt};
    if (!proof.report.precedes()) {
        try {
            proof.escape = build_escape(f, g, proof.report, options.escape_max_nodes);
        } catch (const Error& e) {
            throw Error(ErrorKind::ClassUnprovable, to_string(cls) + ": " + e.what());
        }
    }
    return proof;
}

}  // namespace detail

/// Proves Q(g) <= Q(f) from an explicit covering list of classes.
inline CoverProof prove_direction(const QuadForm& f, const QuadForm& g, const std::vector<ResidueClass>& classes,
                                  const ProveOptions& options = {}) {
    CoverProof proof;
    proof.cover = cover_check(g, classes);
    if (!proof.cover.covered) {
        std::string missing;
        for (Int r : proof.cover.uncovered) missing += " " + std::to_string(r);
        throw Error(ErrorKind::CoverIncomplete,
                    "residues mod " + std::to_string(proof.cover.modulus) + " not covered:" + missing);
    }
    detail::TransformCache cache(f, g);
    for (const auto& cls : classes) cache.get(cls.d);  // searched up front so workers only read

    proof.classes.resize(classes.size());
    if (options.jobs == 1 || classes.size() == 1) {
        for (std::size_t i = 0; i < classes.size(); ++i)
            proof.classes[i] = detail::prove_class(f, g, classes[i], cache.get(classes[i].d), options);
    } else {
        std::vector<std::future<ClassProof>> pending;
        for (const auto& cls : classes) {
            const TransformSet* set = &cache.get(cls.d);
            pending.push_back(std::async(std::launch::async, [&, cls, set] {
                return detail::prove_class(f, g, cls, *set, options);
            }));
        }
        for (std::size_t i = 0; i < pending.size(); ++i) proof.classes[i] = pending[i].get();
    }
    return proof;
}

/// Proves Q(g) <= Q(f) by searching for a covering list: moduli in
/// increasing order, every residue still uncovered is tried with a pure
/// precedence first, then with an escape argument.
inline CoverProof search_direction(const QuadForm& f, const QuadForm& g, const ProveOptions& options = {}) {
    if (options.search_moduli.empty()) throw Error(ErrorKind::InvalidInput, "no search moduli");
    Int top = 1;
    for (Int d : options.search_moduli) top = std::lcm(top, d);
    std::set<Int> open;
    for (Int r : attainable_residues(g, top)) open.insert(r);

    auto touches = [&](const ResidueClass& cls) {
        for (Int r : open)
            if (mod(r, cls.d) == cls.a) return true;
        return false;
    };
    auto close = [&](const ResidueClass& cls) {
        for (auto it = open.begin(); it != open.end();) it = (mod(*it, cls.d) == cls.a) ? open.erase(it) : std::next(it);
    };

    detail::TransformCache cache(f, g);
    CoverProof proof;
    std::vector<GoodVectorReport> deferred;
    for (Int d : options.search_moduli) {
        for (Int a = 0; a < d && !open.empty(); ++a) {
            const ResidueClass cls{d, a};
            if (!touches(cls)) continue;
            auto report = classify_good(f, g, cls, cache.get(d));
            if (report.precedes()) {
                close(cls);
                proof.classes.push_back({cls, std::move(report), std::nullopt});
            } else {
                deferred.push_back(std::move(report));
            }
        }
    }
    for (auto& report : deferred) {
        if (open.empty()) break;
        if (!touches(report.cls)) continue;
        try {
            auto escape = build_escape(f, g, report, options.escape_max_nodes);
            close(report.cls);
            proof.classes.push_back({report.cls, std::move(report), std::move(escape)});
        } catch (const Error&) {
            // another modulus may still cover these residues
        }
    }
    if (!open.empty()) {
        std::string missing;
        for (Int r : open) missing += " " + std::to_string(r);
        throw Error(ErrorKind::ClassUnprovable, "residues mod " + std::to_string(top) + " left open:" + missing);
    }
    std::vector<ResidueClass> used;
    for (const auto& c : proof.classes) used.push_back(c.cls);
    proof.cover = cover_check(g, used);
    if (!proof.cover.covered) throw Error(ErrorKind::CoverIncomplete, "search produced a non-covering list");
    return proof;
}

namespace detail {

/// Q(sub) <= Q(super).
inline DirectionProof prove_inclusion(const QuadForm& sub, const QuadForm& super, const ProveOptions& options) {
    if (options.try_subform)
        if (auto t = subform_witness(sub, super)) return SubformProof{*t};
    if (!options.classes.empty()) return prove_direction(super, sub, options.classes, options);
    return search_direction(super, sub, options);
}

}  // namespace detail

/// Both inclusions plus an empirical cross-check of the represented sets.
inline PairProof prove_pair(const QuadForm& f, const QuadForm& g, const ProveOptions& options = {}) {
    require_positive_definite(f);
    require_positive_definite(g);
    PairProof proof{f, g, detail::prove_inclusion(f, g, options), detail::prove_inclusion(g, f, options),
                    options.empirical_bound};
    if (options.empirical_bound > 0) {
        auto qf = represented_set(f, options.empirical_bound, options.jobs);
        auto qg = represented_set(g, options.empirical_bound, options.jobs);
        if (auto n = first_difference(qf, qg))
            throw Error(ErrorKind::MismatchAt, "proof accepted but sets differ at " + std::to_string(*n));
    }
    return proof;
}

struct PairCheck {
    std::size_t first{}, second{};
    bool isometric = false;
};

struct TableReport {
    std::string set;
    Int bound{};
    std::vector<std::string> names;
    std::vector<QuadForm> forms;  // scaled by 2
    std::optional<Int> mismatch;  // first integer represented by some but not all forms
    std::vector<PairCheck> pairs;

    bool sets_equal() const { return !mismatch.has_value(); }
    bool all_non_isometric() const {
        for (const auto& p : pairs)
            if (p.isometric) return false;
        return true;
    }
};

/// Empirical check of one table set, every form scaled by 2.
inline TableReport verify_table(const std::string& set_id, Int bound, unsigned jobs = 1) {
    const FixtureSet& set = fixture_set(set_id);
    TableReport report;
    report.set = set.id;
    report.bound = bound;
    report.names = set.names;
    for (const auto& form : set.forms) report.forms.push_back(scale(form, 2));

    std::optional<RepSet> first;
    for (const auto& form : report.forms) {
        RepSet q = represented_set(form, bound, jobs);
        if (!first) {
            first = std::move(q);
        } else if (auto n = first_difference(*first, q)) {
            if (!report.mismatch || *n < *report.mismatch) report.mismatch = *n;
        }
    }
    for (std::size_t i = 0; i < report.forms.size(); ++i)
        for (std::size_t j = i + 1; j < report.forms.size(); ++j)
            report.pairs.push_back({i, j, is_isometric(report.forms[i], report.forms[j]).has_value()});
    return report;
}

enum class KaplanskyFamily { iii, iv };

/// The two exceptional families from the conjecture:
///   (iii) a x^2 + b y^2 + b z^2 + b yz  and  a x^2 + b y^2 + 3b z^2,
///   (iv)  a(x^2+y^2+z^2) + b(yz+xz+xy)  and  a x^2 + (2a-b) y^2 + (2a+b) z^2 + 2b xz.
inline std::pair<QuadForm, QuadForm> kaplansky_family_pair(KaplanskyFamily kind, Int a, Int b) {
    std::pair<QuadForm, QuadForm> out;
    if (kind == KaplanskyFamily::iii)
        out = {QuadForm{a, b, b, b, 0, 0}, QuadForm{a, b, checked_mul(3, b), 0, 0, 0}};
    else
        out = {QuadForm{a, a, a, b, b, b}, QuadForm{a, 2 * a - b, 2 * a + b, 0, checked_mul(2, b), 0}};
    require_positive_definite(out.first);
    require_positive_definite(out.second);
    return out;
}

}  // namespace ternrep
