#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracle.hpp"
#include "ternrep/congruence.hpp"
#include "ternrep/enumerate.hpp"
#include "ternrep/fixtures.hpp"

using namespace ternrep;

namespace {

const QuadForm kF4{8, 14, 50, -8, -4, -4};
const QuadForm kG4{8, 14, 14, 10, 4, 4};

Matrix3 mat(std::array<std::array<Int, 3>, 3> rows) {
    Matrix3 out;
    out.m = rows;
    return out;
}

const Matrix3 kT1 = mat({{{4, 2, 2}, {0, 4, 2}, {0, 0, 2}}});

bool divisible_image(const Vector3& v, const Matrix3& t, Int d) {
    for (int i = 0; i < 3; ++i) {
        Int acc = 0;
        for (int j = 0; j < 3; ++j) acc += v[j] * t(i, j);
        if (acc % d != 0) return false;
    }
    return true;
}

std::set<Vector3> bad_set(const GoodVectorReport& r) { return {r.bad.begin(), r.bad.end()}; }

std::set<Vector3> good_set(const GoodVectorReport& r) {
    std::set<Vector3> out;
    for (const auto& [v, i] : r.good) out.insert(v);
    return out;
}

}  // namespace

TEST(ResidueVectors, FourZero) {
    const auto r = residue_vectors(kG4, ResidueClass::make(4, 0));
    EXPECT_EQ(r.size(), 16u);
    for (const auto& v : r) {
        EXPECT_EQ(v.y % 2, 0);
        EXPECT_EQ(v.z % 2, 0);
    }
    // Every coset with even v2, v3 is present.
    std::size_t expected = 0;
    for (Int x = 0; x < 4; ++x)
        for (Int y = 0; y < 4; y += 2)
            for (Int z = 0; z < 4; z += 2) {
                ++expected;
                EXPECT_NE(std::find(r.begin(), r.end(), Vector3{x, y, z}), r.end());
            }
    EXPECT_EQ(expected, 16u);
}

TEST(ResidueVectors, TwelveTwoAndTrivial) {
    EXPECT_EQ(residue_vectors(kG4, ResidueClass::make(12, 2)).size(), 864u);
    EXPECT_EQ(residue_vectors(kG4, ResidueClass::make(1, 0)), std::vector<Vector3>{(Vector3{0, 0, 0})});
    EXPECT_THROW(ResidueClass::make(12, 12), Error);
    EXPECT_THROW(ResidueClass::make(0, 0), Error);
}

TEST(ClassifyGood, FourZeroIsCoveredByT1Alone) {
    const auto set = find_transforms(kF4, kG4, 4);
    const auto report = classify_good(kF4, kG4, ResidueClass::make(4, 0), set);
    EXPECT_TRUE(report.precedes());
    EXPECT_EQ(report.total(), 16u);
    for (const auto& [v, i] : report.good) {
        EXPECT_TRUE(divisible_image(v, kT1, 4)) << to_string(v);
        EXPECT_TRUE(divisible_image(v, set.matrices[i], 4));
    }
}

TEST(ClassifyGood, TwelveTwoHasThirtyTwoBadCosets) {
    const ResidueClass cls = ResidueClass::make(12, 2);
    const auto set = find_transforms(kF4, kG4, 12);
    const auto report = classify_good(kF4, kG4, cls, set);
    EXPECT_EQ(report.total(), 864u);
    EXPECT_EQ(report.bad.size(), 32u);

    std::set<Vector3> expected;
    for (const auto& v : residue_vectors(kG4, cls)) {
        const bool pm3_y = v.y == 3 || v.y == 9;
        const bool pm3_z = v.z == 3 || v.z == 9;
        if (v.x % 3 != 0 && pm3_y && pm3_z) expected.insert(v);
    }
    EXPECT_EQ(bad_set(report), expected);

    // Brute-force goodness over the full transform set.
    for (const auto& v : residue_vectors(kG4, cls)) {
        bool good = false;
        for (const auto& t : set.matrices) good = good || divisible_image(v, t, 12);
        EXPECT_EQ(good, !expected.count(v)) << to_string(v);
    }
    for (const auto& [v, i] : report.good) EXPECT_TRUE(divisible_image(v, set.matrices[i], 12));
}

TEST(ClassifyGood, FormAgainstItselfHasNoBadCosets) {
    for (const QuadForm& f : {kF4, kG4}) {
        for (Int d : {4, 6, 12}) {
            const auto set = find_transforms(f, f, d);
            ASSERT_TRUE(set.contains(Matrix3::scalar(d)));
            for (Int a = 0; a < d; ++a) EXPECT_TRUE(classify_good(f, f, ResidueClass::make(d, a), set).precedes());
        }
    }
}

TEST(ClassifyGood, RejectsTruncatedSet) {
    SearchOptions options;
    options.max_results = 2;
    const auto partial = find_transforms(kF4, kG4, 12, options);
    EXPECT_THROW(classify_good(kF4, kG4, ResidueClass::make(12, 2), partial), Error);
    try {
        classify_good(kF4, kG4, ResidueClass::make(12, 2), partial);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IncompleteTransformSet);
    }
}

TEST(Precedes, TwelveModulusExamples) {
    EXPECT_TRUE(precedes(kF4, kG4, ResidueClass::make(12, 6)).precedes());
    EXPECT_TRUE(precedes(kF4, kG4, ResidueClass::make(12, 10)).precedes());
    EXPECT_FALSE(precedes(kF4, kG4, ResidueClass::make(12, 2)).precedes());
    EXPECT_TRUE(precedes(kF4, kG4, ResidueClass::make(4, 0)).precedes());
    // The class 10 mod 12 is never reached by g.
    const auto q = represented_set(kG4, 20000);
    for (Int n : q.members) EXPECT_NE(n % 12, 10);
}

TEST(Transport, Examples) {
    EXPECT_EQ(transport({1, 4, 2}, kT1, 4), (Vector3{4, 5, 1}));
    EXPECT_EQ(evaluate(kF4, {4, 5, 1}), 392);
    EXPECT_EQ(evaluate(kG4, {1, 4, 2}), 392);
    EXPECT_EQ(transport({0, 0, 0}, kT1, 4), (Vector3{0, 0, 0}));
    EXPECT_EQ(transport({1, 0, 0}, kT1, 4), (Vector3{1, 0, 0}));
    EXPECT_EQ(transport({1, 1, 0}, kT1, 4), std::nullopt);
}

TEST(CongruenceProperty, TransportPreservesValues) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<Int> coord(-60, 60);
    for (Int d : {4, 12}) {
        const auto set = find_transforms(kF4, kG4, d);
        for (const auto& t : set.matrices) {
            for (int k = 0; k < 40; ++k) {
                const Vector3 v{coord(rng), coord(rng), coord(rng)};
                if (auto image = transport(v, t, d)) {
                    EXPECT_EQ(evaluate(kF4, *image), evaluate(kG4, v));
                }
                // Multiples of d always transport.
                const Vector3 w{d * v.x, d * v.y, d * v.z};
                auto image = transport(w, t, d);
                ASSERT_TRUE(image.has_value());
                EXPECT_EQ(evaluate(kF4, *image), evaluate(kG4, w));
            }
        }
    }
}

TEST(CongruenceProperty, GoodnessIsACosetProperty) {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<Int> lift(-5, 5);
    const ResidueClass cls = ResidueClass::make(12, 2);
    const auto set = find_transforms(kF4, kG4, 12);
    const auto report = classify_good(kF4, kG4, cls, set);
    const auto bad = bad_set(report);
    for (const auto& v : residue_vectors(kG4, cls)) {
        for (int k = 0; k < 3; ++k) {
            const Vector3 u{v.x + 12 * lift(rng), v.y + 12 * lift(rng), v.z + 12 * lift(rng)};
            bool good = false;
            for (const auto& t : set.matrices) good = good || transport(u, t, 12).has_value();
            EXPECT_EQ(good, !bad.count(v));
        }
    }
}

TEST(CongruenceProperty, ClassificationIgnoresTransformOrder) {
    std::mt19937_64 rng(31);
    for (const auto& cls : {ResidueClass::make(12, 2), ResidueClass::make(12, 6), ResidueClass::make(4, 0)}) {
        auto set = find_transforms(kF4, kG4, cls.d);
        const auto base = classify_good(kF4, kG4, cls, set);
        for (int k = 0; k < 3; ++k) {
            std::shuffle(set.matrices.begin(), set.matrices.end(), rng);
            const auto shuffled = classify_good(kF4, kG4, cls, set);
            EXPECT_EQ(bad_set(shuffled), bad_set(base));
            EXPECT_EQ(good_set(shuffled), good_set(base));
        }
    }
}

TEST(CongruenceProperty, ResidueCountsInvariantUnderUnimodularChange) {
    const Matrix3 u = mat({{{1, 2, -1}, {0, 1, 3}, {0, 0, 1}}});
    const Matrix3 w = mat({{{0, 1, 0}, {1, 1, 0}, {2, -1, 1}}});
    for (const auto& set : table_sets()) {
        const QuadForm g = scale(set.forms.back(), 2);
        const std::string& name = set.id;
        for (const Matrix3& p : {u, w}) {
            const QuadForm h = form_from_doubled_gram(transpose(p) * doubled_gram(g) * p);
            for (Int d : {4, 12}) {
                for (Int a = 0; a < d; a += 3)
                    EXPECT_EQ(residue_vectors(h, ResidueClass::make(d, a)).size(),
                              residue_vectors(g, ResidueClass::make(d, a)).size())
                        << name << " " << d << ":" << a;
            }
        }
    }
}

TEST(CongruenceProperty, KernelCosetsMatchBruteForce) {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<Int> coef(-15, 15);
    std::uniform_int_distribution<Int> mod_pick(1, 24);
    for (int trial = 0; trial < 300; ++trial) {
        Matrix3 t;
        for (auto& row : t.m)
            for (auto& x : row) x = coef(rng);
        if (trial % 10 == 0) t.m[2] = t.m[0];  // singular case
        const Int d = mod_pick(rng);
        std::set<Vector3> fast;
        detail::for_each_kernel_coset(t, d, [&](const Vector3& v) { EXPECT_TRUE(fast.insert(v).second); });
        std::set<Vector3> slow;
        for (Int x = 0; x < d; ++x)
            for (Int y = 0; y < d; ++y)
                for (Int z = 0; z < d; ++z)
                    if (divisible_image({x, y, z}, t, d)) slow.insert({x, y, z});
        EXPECT_EQ(fast, slow) << to_string(t) << " d=" << d;
    }
}

TEST(CongruenceProperty, PrecedenceImpliesInclusionUpToBound) {
    const Int bound = 100000;
    const auto pairs = std::vector<std::pair<std::string, std::vector<ResidueClass>>>{
        {"S4", {ResidueClass::make(4, 0), ResidueClass::make(12, 6), ResidueClass::make(12, 10)}},
        {"S6", {ResidueClass::make(4, 2), ResidueClass::make(8, 0), ResidueClass::make(24, 12)}},
    };
    for (const auto& [id, classes] : pairs) {
        const QuadForm f = resolve_form(id + "f");
        const QuadForm g = resolve_form(id + "g");
        const auto qf = represented_set(f, bound);
        const auto qg = represented_set(g, bound);
        for (const auto& cls : classes) {
            ASSERT_TRUE(precedes(f, g, cls).precedes()) << id << " " << to_string(cls);
            for (Int n : qg.members)
                if (mod(n, cls.d) == cls.a) {
                    EXPECT_TRUE(qf.contains(n)) << id << " n=" << n;
                }
        }
    }
}

TEST(CoverCheck, Examples) {
    const auto s4 = cover_check(kG4, {ResidueClass::make(4, 0), ResidueClass::make(12, 2), ResidueClass::make(12, 6),
                                      ResidueClass::make(12, 10)});
    EXPECT_TRUE(s4.covered);
    EXPECT_EQ(s4.modulus, 12);
    for (Int r : s4.attainable) EXPECT_EQ(r % 2, 0);

    const QuadForm g7{4, 4, 8, -2, -4, 0};
    std::vector<ResidueClass> s7{ResidueClass::make(4, 2)};
    for (Int a = 0; a < 24; a += 4) s7.push_back(ResidueClass::make(24, a));
    EXPECT_TRUE(cover_check(g7, s7).covered);

    EXPECT_TRUE(cover_check(kG4, {ResidueClass::make(1, 0)}).covered);

    const auto missing = cover_check(kG4, {ResidueClass::make(4, 0), ResidueClass::make(12, 6), ResidueClass::make(12, 10)});
    EXPECT_FALSE(missing.covered);
    EXPECT_EQ(missing.uncovered, std::vector<Int>{2});
    EXPECT_THROW(cover_check(kG4, {}), Error);
}

TEST(CoverCheck, AttainableResiduesMatchValueScan) {
    for (Int m : {4, 12, 24}) {
        std::set<Int> scanned;
        for (Int x = 0; x < m; ++x)
            for (Int y = 0; y < m; ++y)
                for (Int z = 0; z < m; ++z) scanned.insert(mod(oracle::naive_value(kG4, x, y, z), m));
        const auto fast = attainable_residues(kG4, m);
        EXPECT_EQ(std::set<Int>(fast.begin(), fast.end()), scanned);
    }
}
