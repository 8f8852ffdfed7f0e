#pragma once

// Proof certificates.
//
// emit() serialises a PairProof as canonical JSON (sorted keys, decimal
// integers). check() replays the certificate from raw integers: matrix
// identities, coset scans, witness congruences, escape invariants and the
// cover arithmetic. It never runs a transform search; every matrix it needs
// is embedded in the certificate. Schema: docs/certificate.md.

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ternrep/forms.hpp"
#include "ternrep/isometry.hpp"
#include "ternrep/prover.hpp"

namespace ternrep {

inline constexpr int kCertificateVersion = 1;
inline constexpr const char* kCertificateFormat = "ternrep-certificate";

namespace cert_detail {

using nlohmann::json;

inline json to_json(const Vector3& v) { return json::array({v.x, v.y, v.z}); }

inline json to_json(const Matrix3& m) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) rows.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
    return rows;
}

inline json to_json(const QuadForm& f) {
    json out = json::array();
    for (Int k : f.coefficients()) out.push_back(k);
    return out;
}

inline std::string coset_key(const Vector3& v) {
    return std::to_string(v.x) + "," + std::to_string(v.y) + "," + std::to_string(v.z);
}

inline json direction_to_json(const DirectionProof& proof) {
    if (const auto* sub = std::get_if<SubformProof>(&proof))
        return json{{"method", "subform"}, {"matrix", to_json(sub->matrix)}};
    const auto& cover = std::get<CoverProof>(proof);
    json classes = json::array();
    for (const auto& c : cover.classes) {
        // Only transforms that witness some coset travel with the certificate.
        std::map<std::size_t, std::size_t> local;
        json transforms = json::array();
        json witnesses = json::object();
        for (const auto& [coset, index] : c.report.good) {
            auto [it, inserted] = local.emplace(index, local.size());
            if (inserted) transforms.push_back(to_json(c.report.transforms.matrices[index]));
            witnesses[coset_key(coset)] = it->second;
        }
        json entry{{"d", c.cls.d},
                   {"a", c.cls.a},
                   {"cosets", c.report.total()},
                   {"transforms", transforms},
                   {"witnesses", witnesses},
                   {"escape", nullptr}};
        if (c.escape) {
            json bad = json::array(), eig = json::array(), bases = json::array();
            for (const auto& u : c.escape->bad) bad.push_back(to_json(u));
            for (const auto& e : c.escape->eigenvectors) eig.push_back(to_json(e));
            for (const auto& b : c.escape->bases) bases.push_back(json{{"value", b.value}, {"witness", to_json(b.vector)}});
            entry["escape"] = json{{"matrix", to_json(c.escape->ttilde)}, {"bad", bad}, {"eigenvectors", eig}, {"bases", bases}};
        }
        classes.push_back(entry);
    }
    return json{{"method", "cover"}, {"modulus", cover.cover.modulus}, {"classes", classes}};
}

// Checker-side parsing. Everything below reads raw integers only.

struct Reject {
    std::string clause;
    std::string detail;
};

inline Int read_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw Reject{"format", where + " must be an integer"};
    return j.get<Int>();
}

inline Vector3 read_vector(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw Reject{"format", where + " must be a 3-vector"};
    return {read_int(j[0], where), read_int(j[1], where), read_int(j[2], where)};
}

inline Matrix3 read_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw Reject{"format", where + " must be a 3x3 matrix"};
    Matrix3 m;
    for (int i = 0; i < 3; ++i) {
        Vector3 row = read_vector(j[i], where);
        for (int k = 0; k < 3; ++k) m(i, k) = row[k];
    }
    return m;
}

inline QuadForm read_form(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 6) throw Reject{"format", where + " must list six coefficients"};
    std::array<Int, 6> k{};
    for (int i = 0; i < 6; ++i) k[i] = read_int(j[i], where);
    return QuadForm::from_coefficients(k);
}

/// sum_ij u_i A_ij v_j with the doubled Gram matrix written out by hand.
inline Wide gram_product(const QuadForm& q, const Vector3& u, const Vector3& v) {
    const Wide a[3][3] = {{2 * Wide(q.a), q.t, q.s}, {q.t, 2 * Wide(q.b), q.r}, {q.s, q.r, 2 * Wide(q.c)}};
    Wide acc = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) acc += Wide(u[i]) * a[i][j] * v[j];
    return acc;
}

/// T^t (2M_super) T == scale (2M_sub).
inline bool identity_holds(const QuadForm& super, const QuadForm& sub, const Matrix3& t, Int scale) {
    const Wide target[3][3] = {{2 * Wide(sub.a), sub.t, sub.s}, {sub.t, 2 * Wide(sub.b), sub.r}, {sub.s, sub.r, 2 * Wide(sub.c)}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (gram_product(super, t.column(i), t.column(j)) != Wide(scale) * target[i][j]) return false;
    return true;
}

inline Wide value_of(const QuadForm& q, const Vector3& v) { return gram_product(q, v, v) / 2; }

/// v T^t == 0 (mod d).
inline bool row_times_transpose_divisible(const Vector3& v, const Matrix3& t, Int d) {
    for (int i = 0; i < 3; ++i) {
        Wide acc = Wide(v.x) * t(i, 0) + Wide(v.y) * t(i, 1) + Wide(v.z) * t(i, 2);
        if (acc % d != 0) return false;
    }
    return true;
}

inline bool is_scaled_identity_power(const Matrix3& k, Int d) {
    Wide acc[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Wide scale = 1;
    for (int p = 1; p <= 12; ++p) {
        Wide next[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                next[i][j] = 0;
                for (int l = 0; l < 3; ++l) next[i][j] += acc[i][l] * k(l, j);
            }
        scale *= d;
        bool scalar = true;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                acc[i][j] = next[i][j];
                if (acc[i][j] != (i == j ? scale : 0)) scalar = false;
            }
        if (scalar) return true;
        for (auto& row : acc)
            for (Wide x : row)
                if (wide_abs(x) > (Wide(1) << 100)) return false;
    }
    return false;
}

inline void check_escape(const json& esc, const QuadForm& sub, const QuadForm& super, Int d, Int a,
                         const std::set<Vector3>& unwitnessed, const std::string& where) {
    const Matrix3 k = read_matrix(esc.at("matrix"), where + ".escape.matrix");
    if (!identity_holds(sub, sub, k, checked_mul(d, d)))
        throw Reject{where + ".escape.matrix_identity", "K^t M K != d^2 M"};
    std::set<Vector3> listed;
    for (const auto& item : esc.at("bad")) listed.insert(read_vector(item, where + ".escape.bad"));
    for (const Vector3& u : unwitnessed)
        if (!listed.count(u)) throw Reject{where + ".coverage(coset=" + coset_key(u) + ")", "coset has no witness"};
    for (const Vector3& u : listed) {
        if (!row_times_transpose_divisible(u, k, d))
            throw Reject{where + ".escape.integrality(coset=" + coset_key(u) + ")", "u K^t not divisible by d"};
        const Vector3 image{narrow((Wide(u.x) * k(0, 0) + Wide(u.y) * k(0, 1) + Wide(u.z) * k(0, 2)) / d),
                            narrow((Wide(u.x) * k(1, 0) + Wide(u.y) * k(1, 1) + Wide(u.z) * k(1, 2)) / d),
                            narrow((Wide(u.x) * k(2, 0) + Wide(u.y) * k(2, 1) + Wide(u.z) * k(2, 2)) / d)};
        if (value_of(sub, image) != value_of(sub, u) || wide_mod(value_of(sub, image), d) != a)
            throw Reject{where + ".escape.descent(coset=" + coset_key(u) + ")", "image leaves the class"};
    }
    if (is_scaled_identity_power(k, d)) throw Reject{where + ".escape.infinite_order", "K/d has finite order"};

    std::set<Vector3> listed_eigen;
    for (const auto& item : esc.at("eigenvectors")) listed_eigen.insert(read_vector(item, where + ".escape.eigenvectors"));
    Matrix3 kp = Matrix3::identity();
    for (int p = 1; p <= kEscapeEigenPowers; ++p) {
        kp = kp * k;
        for (const auto& space : eigen_data(kp).spaces) {
            if (space.dimension > 1)
                throw Reject{where + ".escape.eigenspace_dimension", "power " + std::to_string(p)};
            if (!listed_eigen.count(space.basis.front()))
                throw Reject{where + ".escape.eigenvectors", "missing " + coset_key(space.basis.front())};
        }
    }
    std::set<Wide> covered_values;
    for (const auto& item : esc.at("bases")) {
        const Int m = read_int(item.at("value"), where + ".escape.bases");
        const Vector3 w = read_vector(item.at("witness"), where + ".escape.bases");
        if (value_of(super, w) != m)
            throw Reject{where + ".escape.base_witness(m=" + std::to_string(m) + ")", "witness does not represent m"};
        covered_values.insert(m);
    }
    for (const Vector3& e : listed_eigen)
        if (!covered_values.count(value_of(sub, e)))
            throw Reject{where + ".escape.base_witness(m=" + wide_to_string(value_of(sub, e)) + ")", "no witness"};
}

/// Q(sub) <= Q(super) as recorded in `dir`.
inline void check_direction(const json& dir, const QuadForm& sub, const QuadForm& super, const std::string& where) {
    const std::string method = dir.at("method").get<std::string>();
    if (method == "subform") {
        const Matrix3 t = read_matrix(dir.at("matrix"), where + ".matrix");
        if (!identity_holds(super, sub, t, 1)) throw Reject{where + ".subform.identity", "T^t M_super T != M_sub"};
        return;
    }
    if (method != "cover") throw Reject{"format", where + ".method unknown"};

    const json& classes = dir.at("classes");
    if (!classes.is_array() || classes.empty()) throw Reject{where + ".cover_check", "no classes"};
    std::vector<std::pair<Int, Int>> list;
    for (const auto& cls : classes) {
        const Int d = read_int(cls.at("d"), where + ".d");
        const Int a = read_int(cls.at("a"), where + ".a");
        const std::string here = where + ".class(" + std::to_string(d) + ":" + std::to_string(a) + ")";
        if (d < 1 || d > 1000 || a < 0 || a >= d) throw Reject{here + ".range", "need 0 <= a < d"};
        list.emplace_back(d, a);

        std::vector<Matrix3> transforms;
        for (const auto& t : cls.at("transforms")) transforms.push_back(read_matrix(t, here + ".transforms"));
        for (std::size_t i = 0; i < transforms.size(); ++i)
            if (!identity_holds(super, sub, transforms[i], checked_mul(d, d)))
                throw Reject{here + ".transform.identity(index=" + std::to_string(i) + ")", "T^t M_super T != d^2 M_sub"};

        const json& witnesses = cls.at("witnesses");
        std::set<Vector3> unwitnessed;
        std::size_t scanned = 0, matched = 0;
        for (Int x = 0; x < d; ++x)
            for (Int y = 0; y < d; ++y)
                for (Int z = 0; z < d; ++z) {
                    const Vector3 v{x, y, z};
                    if (wide_mod(value_of(sub, v), d) != a) continue;
                    ++scanned;
                    auto it = witnesses.find(coset_key(v));
                    if (it == witnesses.end()) {
                        unwitnessed.insert(v);
                        continue;
                    }
                    ++matched;
                    const Int index = read_int(*it, here + ".witnesses");
                    if (index < 0 || static_cast<std::size_t>(index) >= transforms.size())
                        throw Reject{here + ".witness.index(coset=" + coset_key(v) + ")", "index out of range"};
                    if (!row_times_transpose_divisible(v, transforms[static_cast<std::size_t>(index)], d))
                        throw Reject{here + ".witness.integrality(coset=" + coset_key(v) + ")", "v T^t not divisible by d"};
                }
        if (matched != witnesses.size()) throw Reject{here + ".witness.extraneous", "witness for a non-residue coset"};
        if (read_int(cls.at("cosets"), here + ".cosets") != static_cast<Int>(scanned))
            throw Reject{here + ".coset_count", "recorded count differs from scan"};
        if (cls.at("escape").is_null()) {
            if (!unwitnessed.empty())
                throw Reject{here + ".coverage(coset=" + coset_key(*unwitnessed.begin()) + ")", "coset has no witness"};
        } else {
            check_escape(cls.at("escape"), sub, super, d, a, unwitnessed, here);
        }
    }

    Int modulus = 1;
    for (const auto& [d, a] : list) modulus = std::lcm(modulus, d);
    if (read_int(dir.at("modulus"), where + ".modulus") != modulus)
        throw Reject{where + ".cover_check.modulus", "recorded modulus is not the lcm"};
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(modulus), 0);
    for (Int x = 0; x < modulus; ++x)
        for (Int y = 0; y < modulus; ++y)
            for (Int z = 0; z < modulus; ++z)
                hit[static_cast<std::size_t>(wide_mod(value_of(sub, {x, y, z}), modulus))] = 1;
    for (Int rho = 0; rho < modulus; ++rho) {
        if (!hit[static_cast<std::size_t>(rho)]) continue;
        bool covered = false;
        for (const auto& [d, a] : list)
            if (rho % d == a) covered = true;
        if (!covered)
            throw Reject{where + ".cover_check(residue=" + std::to_string(rho) + ")",
                         "attainable residue mod " + std::to_string(modulus) + " outside every class"};
    }
}

}  // namespace cert_detail

/// Canonical JSON text of a proof.
inline std::string emit(const PairProof& proof) {
    using nlohmann::json;
    json cert{{"format", kCertificateFormat},
              {"version", kCertificateVersion},
              {"f", cert_detail::to_json(proof.f)},
              {"g", cert_detail::to_json(proof.g)},
              {"empirical_bound", proof.empirical_bound},
              {"directions",
               {{"f_in_g", cert_detail::direction_to_json(proof.f_in_g)},
                {"g_in_f", cert_detail::direction_to_json(proof.g_in_f)}}}};
    return cert.dump(1) + "\n";
}

struct Verdict {
    bool accepted = false;
    std::string clause;  // first failing clause, empty on acceptance
    std::string detail;
};

inline Verdict check(const nlohmann::json& cert) {
    using cert_detail::Reject;
    try {
        if (!cert.is_object() || cert.value("format", "") != kCertificateFormat)
            throw Reject{"format", "not a ternrep certificate"};
        if (!cert.contains("version") || !cert["version"].is_number_integer() || cert["version"] != kCertificateVersion)
            throw Reject{"format.version", "unsupported or missing version"};
        const QuadForm f = cert_detail::read_form(cert.at("f"), "f");
        const QuadForm g = cert_detail::read_form(cert.at("g"), "g");
        if (!is_positive_definite(f)) throw Reject{"forms.positive_definite", "f"};
        if (!is_positive_definite(g)) throw Reject{"forms.positive_definite", "g"};
        const auto& dirs = cert.at("directions");
        if (!dirs.contains("f_in_g") || !dirs.contains("g_in_f")) throw Reject{"directions.missing", "need both"};
        cert_detail::check_direction(dirs.at("f_in_g"), f, g, "f_in_g");
        cert_detail::check_direction(dirs.at("g_in_f"), g, f, "g_in_f");
    } catch (const Reject& r) {
        return {false, r.clause, r.detail};
    } catch (const nlohmann::json::exception& e) {
        return {false, "format", e.what()};
    } catch (const Error& e) {
        return {false, "arithmetic", e.what()};
    }
    return {true, "", ""};
}

inline Verdict check(const std::string& text) {
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        return {false, "format", e.what()};
    }
    return check(parsed);
}

}  // namespace ternrep
