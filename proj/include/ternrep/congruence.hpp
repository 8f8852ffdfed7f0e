#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "ternrep/forms.hpp"
#include "ternrep/isometry.hpp"
#include "ternrep/linalg.hpp"

namespace ternrep {

/// The progression S_{d,a} = { d n + a : n >= 0 }.
struct ResidueClass {
    Int d{1};
    Int a{0};

    static ResidueClass make(Int d, Int a) {
        if (d < 1 || a < 0 || a >= d)
            throw Error(ErrorKind::InvalidInput,
                        "residue class needs 0 <= a < d, got d=" + std::to_string(d) + " a=" + std::to_string(a));
        return {d, a};
    }

    bool contains(Int n) const { return n >= a && mod(n, d) == a; }

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
    friend auto operator<=>(const ResidueClass&, const ResidueClass&) = default;
};

inline std::string to_string(const ResidueClass& cls) { return std::to_string(cls.d) + ":" + std::to_string(cls.a); }

/// Partition of R(g,d,a) into good cosets (with the index of the first
/// transform that moves them to an integral vector) and bad cosets.
struct GoodVectorReport {
    QuadForm f;
    QuadForm g;
    ResidueClass cls;
    TransformSet transforms;
    std::vector<std::pair<Vector3, std::size_t>> good;
    std::vector<Vector3> bad;

    std::size_t total() const { return good.size() + bad.size(); }
    bool precedes() const { return bad.empty(); }
};

namespace detail {

inline std::size_t coset_index(const Vector3& v, Int d) {
    return static_cast<std::size_t>((v.x * d + v.y) * d + v.z);
}

/// Column transform V of a diagonalisation U T V = D, plus the diagonal.
struct Diagonalisation {
    Wide v[3][3];
    Wide diag[3];
};

inline Diagonalisation diagonalise(const Matrix3& t) {
    Wide a[3][3];
    Diagonalisation out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            a[i][j] = t(i, j);
            out.v[i][j] = (i == j);
        }
    auto swap_cols = [&](int p, int q) {
        for (int i = 0; i < 3; ++i) {
            std::swap(a[i][p], a[i][q]);
            std::swap(out.v[i][p], out.v[i][q]);
        }
    };
    for (int k = 0; k < 3; ++k) {
        while (true) {
            int pi = -1, pj = -1;
            for (int i = k; i < 3; ++i)
                for (int j = k; j < 3; ++j)
                    if (a[i][j] != 0 && (pi < 0 || wide_abs(a[i][j]) < wide_abs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi < 0) break;
            if (pi != k)
                for (int j = 0; j < 3; ++j) std::swap(a[pi][j], a[k][j]);
            if (pj != k) swap_cols(pj, k);
            bool clean = true;
            for (int i = k + 1; i < 3; ++i) {
                Wide q = a[i][k] / a[k][k];
                for (int j = k; j < 3; ++j) a[i][j] -= q * a[k][j];
                if (a[i][k] != 0) clean = false;
            }
            for (int j = k + 1; j < 3; ++j) {
                Wide q = a[k][j] / a[k][k];
                for (int i = 0; i < 3; ++i) {
                    a[i][j] -= q * a[i][k];
                    out.v[i][j] -= q * out.v[i][k];
                }
                if (a[k][j] != 0) clean = false;
            }
            if (clean) break;
        }
    }
    for (int k = 0; k < 3; ++k) out.diag[k] = a[k][k];
    return out;
}

/// Calls visit(v) for every v in (Z/dZ)^3 with v T^t == 0 (mod d).
template <class Visit>
void for_each_kernel_coset(const Matrix3& t, Int d, Visit&& visit) {
    // v T^t == 0  <=>  T v^t == 0 (column form). With U T V = D and v = V w
    // this is D w == 0, solved coordinate-wise.
    const Diagonalisation dg = diagonalise(t);
    Wide step[3], count[3];
    for (int i = 0; i < 3; ++i) {
        Wide g = dg.diag[i] == 0 ? Wide(d) : wide_gcd(dg.diag[i], d);
        count[i] = g;
        step[i] = d / g;
    }
    for (Wide k0 = 0; k0 < count[0]; ++k0)
        for (Wide k1 = 0; k1 < count[1]; ++k1)
            for (Wide k2 = 0; k2 < count[2]; ++k2) {
                const Wide w[3] = {k0 * step[0], k1 * step[1], k2 * step[2]};
                Vector3 v;
                for (int i = 0; i < 3; ++i)
                    v[i] = narrow(wide_mod(dg.v[i][0] * w[0] + dg.v[i][1] * w[1] + dg.v[i][2] * w[2], d));
                visit(v);
            }
}

inline Matrix3 reduce_mod(const Matrix3& t, Int d) {
    Matrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = mod(t(i, j), d);
    return out;
}

}  // namespace detail

/// R(g,d,a): cosets v in (Z/dZ)^3 with g(v) == a (mod d), lexicographic.
inline std::vector<Vector3> residue_vectors(const QuadForm& g, const ResidueClass& cls) {
    std::vector<Vector3> out;
    const Int d = cls.d;
    for (Int x = 0; x < d; ++x)
        for (Int y = 0; y < d; ++y)
            for (Int z = 0; z < d; ++z) {
                Vector3 v{x, y, z};
                if (mod(evaluate(g, v), d) == cls.a) out.push_back(v);
            }
    return out;
}

inline GoodVectorReport classify_good(const QuadForm& f, const QuadForm& g, const ResidueClass& cls,
                                      const TransformSet& transforms) {
    if (!transforms.complete)
        throw Error(ErrorKind::IncompleteTransformSet, "classification needs the complete set R(f,g,d)");
    if (transforms.d != cls.d) throw Error(ErrorKind::InvalidInput, "transform set built for a different modulus");

    const Int d = cls.d;
    const auto residues = residue_vectors(g, cls);
    const auto cells = static_cast<std::size_t>(d * d * d);
    std::vector<std::int8_t> wanted(cells, 0);
    for (const auto& v : residues) wanted[detail::coset_index(v, d)] = 1;
    std::vector<std::int64_t> witness(cells, -1);

    std::size_t remaining = residues.size();
    std::set<Matrix3> seen;
    for (std::size_t i = 0; i < transforms.matrices.size() && remaining > 0; ++i) {
        const Matrix3& t = transforms.matrices[i];
        if (!seen.insert(detail::reduce_mod(t, d)).second) continue;
        detail::for_each_kernel_coset(t, d, [&](const Vector3& v) {
            const std::size_t idx = detail::coset_index(v, d);
            if (wanted[idx] && witness[idx] < 0) {
                witness[idx] = static_cast<std::int64_t>(i);
                --remaining;
            }
        });
    }

    GoodVectorReport report{f, g, cls, transforms, {}, {}};
    for (const auto& v : residues) {
        const auto w = witness[detail::coset_index(v, d)];
        if (w >= 0)
            report.good.emplace_back(v, static_cast<std::size_t>(w));
        else
            report.bad.push_back(v);
    }
    return report;
}

/// g precedes f at (d,a) iff the report has no bad cosets.
inline GoodVectorReport precedes(const QuadForm& f, const QuadForm& g, const ResidueClass& cls) {
    return classify_good(f, g, cls, find_transforms(f, g, cls.d));
}

/// (1/d) v T^t when integral.
inline std::optional<Vector3> transport(const Vector3& v, const Matrix3& t, Int d) {
    if (d < 1) throw Error(ErrorKind::InvalidInput, "d must be positive");
    const Vector3 image = v * transpose(t);
    if (image.x % d || image.y % d || image.z % d) return std::nullopt;
    return Vector3{image.x / d, image.y / d, image.z / d};
}

/// Residues mod `modulus` taken by g on (Z/modulus Z)^3, ascending.
inline std::vector<Int> attainable_residues(const QuadForm& g, Int modulus) {
    if (modulus < 1) throw Error(ErrorKind::InvalidInput, "modulus must be positive");
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(modulus), 0);
    const Int m = modulus;
    for (Int x = 0; x < m; ++x)
        for (Int y = 0; y < m; ++y) {
            const Int base = mod(g.a * x * x + g.b * y * y + g.t * x * y, m);
            const Int lin = mod(g.r * y + g.s * x, m);
            Int value = base;  // g at z = 0
            for (Int z = 0; z < m; ++z) {
                hit[static_cast<std::size_t>(value)] = 1;
                // g(x,y,z+1) - g(x,y,z) = c(2z+1) + lin
                value = mod(value + g.c * (2 * z + 1) + lin, m);
            }
        }
    std::vector<Int> out;
    for (Int r = 0; r < m; ++r)
        if (hit[static_cast<std::size_t>(r)]) out.push_back(r);
    return out;
}

struct CoverResult {
    bool covered = false;
    Int modulus = 1;
    std::vector<Int> attainable;
    std::vector<Int> uncovered;
};

inline Int classes_lcm(const std::vector<ResidueClass>& classes) {
    Int l = 1;
    for (const auto& c : classes) l = std::lcm(l, c.d);
    return l;
}

/// Every residue g attains modulo lcm(d_i) lies in one of the classes.
inline CoverResult cover_check(const QuadForm& g, const std::vector<ResidueClass>& classes) {
    if (classes.empty()) throw Error(ErrorKind::InvalidInput, "cover_check needs at least one class");
    CoverResult out;
    out.modulus = classes_lcm(classes);
    out.attainable = attainable_residues(g, out.modulus);
    for (Int rho : out.attainable) {
        bool hit = false;
        for (const auto& c : classes)
            if (mod(rho, c.d) == c.a) {
                hit = true;
                break;
            }
        if (!hit) out.uncovered.push_back(rho);
    }
    out.covered = out.uncovered.empty();
    return out;
}

}  // namespace ternrep
