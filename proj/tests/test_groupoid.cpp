#include "wg/groupoid.hpp"

#include <random>

#include "doctest.h"

using namespace wg;

namespace {
constexpr int N = 2520;
Scalar q() { return Scalar::generator(N); }
Scalar one() { return Scalar::one(N); }
Scalar m1() { return Scalar::minus_one(N); }

BicharacterMatrix path_matrix(const std::vector<Scalar>& verts, const std::vector<Scalar>& edges) {
    BicharacterMatrix m(static_cast<int>(verts.size()), N);
    for (size_t i = 0; i < verts.size(); ++i)
        m.at(static_cast<int>(i), static_cast<int>(i)) = verts[i];
    for (size_t i = 0; i + 1 < verts.size(); ++i)
        m.at(static_cast<int>(i), static_cast<int>(i) + 1) = edges[i];
    return m;
}

BicharacterMatrix a2() { return path_matrix({q(), q()}, {q().inverse()}); }

BicharacterMatrix a4() {
    return path_matrix({q(), q(), q(), q()}, {q().inverse(), q().inverse(), q().inverse()});
}

// rank-4 fork: center vertex 2 bonded to 1, 3, 4 (the D_4 shape)
BicharacterMatrix d4() {
    BicharacterMatrix m(4, N);
    for (int i = 0; i < 4; ++i)
        m.at(i, i) = q();
    m.at(0, 1) = q().inverse();
    m.at(1, 2) = q().inverse();
    m.at(1, 3) = q().inverse();
    return m;
}

// first diagram of the rank-4 table row 6: (-1, q, q, q) path with q^-1 edges
BicharacterMatrix row6() {
    return path_matrix({m1(), q(), q(), q()}, {q().inverse(), q().inverse(), q().inverse()});
}

// exact coordinates of x in the Z-basis B (solves sum_i c_i B.f[i] = x by
// fraction-free elimination; B is unimodular so the solution is integral)
RootVec coords_in_basis(const Basis& b, const RootVec& x) {
    const int d = b.dim();
    std::vector<std::vector<long long>> a(d, std::vector<long long>(d + 1));
    for (int col = 0; col < d; ++col)
        for (int row = 0; row < d; ++row)
            a[row][col] = b.f[col][row];
    for (int row = 0; row < d; ++row)
        a[row][d] = x[row];
    std::vector<int> pivot_col(d, -1);
    int prow = 0;
    for (int col = 0; col < d && prow < d; ++col) {
        int piv = -1;
        for (int rr = prow; rr < d; ++rr)
            if (a[rr][col] != 0) {
                piv = rr;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(a[piv], a[prow]);
        for (int rr = 0; rr < d; ++rr) {
            if (rr == prow || a[rr][col] == 0)
                continue;
            long long g = std::gcd(a[rr][col], a[prow][col]);
            long long fr = a[prow][col] / g, fp = a[rr][col] / g;
            for (int cc = 0; cc <= d; ++cc)
                a[rr][cc] = a[rr][cc] * fr - a[prow][cc] * fp;
        }
        pivot_col[prow] = col;
        ++prow;
    }
    RootVec c(d, 0);
    for (int row = 0; row < d; ++row) {
        REQUIRE(pivot_col[row] >= 0);
        REQUIRE(a[row][d] % a[row][pivot_col[row]] == 0);
        c[pivot_col[row]] = static_cast<int>(a[row][d] / a[row][pivot_col[row]]);
    }
    return c;
}

bool in_n0_of(const Basis& b, const RootVec& x) {
    for (int v : coords_in_basis(b, x))
        if (v < 0)
            return false;
    return true;
}
} // namespace

TEST_CASE("cartan integers") {
    Basis e = Basis::standard(2);
    CHECK(cartan_integer(a2(), e, 1, 2) == -1);

    BicharacterMatrix m2 = path_matrix({q(), q()}, {q().pow(-2)});
    CHECK(cartan_integer(m2, e, 1, 2) == -2);

    BicharacterMatrix m3 = path_matrix({m1(), q()}, {q()});
    CHECK(cartan_integer(m3, e, 1, 2) == -1);

    BicharacterMatrix undef = path_matrix({q(), q()}, {q()});
    CHECK_FALSE(cartan_integer(undef, e, 1, 2).has_value());
    CHECK_THROWS_AS(reflect(undef, e, 1), ReflectionUndefined);
}

TEST_CASE("reflections") {
    Basis e2 = Basis::standard(2);
    Basis r = reflect(a2(), e2, 1);
    CHECK(r.f == std::vector<RootVec>{{-1, 0}, {1, 1}});

    Basis e4 = Basis::standard(4);
    Basis r6 = reflect(row6(), e4, 1);
    CHECK(print_basis_tuple(r6) == "(-1,12,3,4)");

    // double reflection returns to the start
    for (int i = 1; i <= 4; ++i) {
        Basis once = reflect(a4(), e4, i);
        CHECK(reflect(a4(), once, i) == e4);
    }
    Basis once = reflect(row6(), e4, 1);
    CHECK(reflect(row6(), once, 1) == e4);
}

TEST_CASE("exploration of the classical cases") {
    GroupoidResult ra2 = explore(a2());
    CHECK(ra2.verdict == Verdict::full_finite);
    CHECK(ra2.basis_count == 6);
    CHECK(positive_roots(ra2) == std::set<RootVec>{{1, 0}, {0, 1}, {1, 1}});

    GroupoidResult ra4 = explore(a4());
    CHECK(ra4.verdict == Verdict::full_finite);
    CHECK(ra4.basis_count == 120);
    CHECK(positive_roots(ra4).size() == 10);

    GroupoidResult rd4 = explore(d4());
    CHECK(rd4.verdict == Verdict::full_finite);
    CHECK(positive_roots(rd4).size() == 12);

    BicharacterMatrix single(1, N);
    single.at(0, 0) = q();
    GroupoidResult r1 = explore(single);
    CHECK(positive_roots(r1) == std::set<RootVec>{{1}});
}

TEST_CASE("verdicts beyond finiteness") {
    // undefined Cartan integer straight away
    BicharacterMatrix undef = path_matrix({q(), q()}, {q()});
    GroupoidResult r = explore(undef);
    CHECK(r.verdict == Verdict::not_full);
    CHECK(r.failure_i == 1);

    // affine Cartan type: reflections always defined, orbit never closes
    BicharacterMatrix affine = path_matrix({q(), q()}, {q().pow(-4)});
    GroupoidResult ra = explore(affine, {100000, 50});
    CHECK(ra.verdict == Verdict::cap_exceeded);

    BicharacterMatrix unit(2, N);
    unit.at(0, 0) = one();
    unit.at(1, 1) = q();
    CHECK_THROWS_AS(explore(unit), StateError);
}

TEST_CASE("exploration is twist invariant") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> fe(-3, 3), te(0, N - 1);
    BicharacterMatrix m = row6();
    BicharacterMatrix tw = m;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Scalar t(fe(rng), te(rng), N);
            tw.at(i, j) = tw.at(i, j) * t;
            tw.at(j, i) = tw.at(j, i) * t.inverse();
        }
    GroupoidResult a = explore(m), b = explore(tw);
    CHECK(a.verdict == b.verdict);
    CHECK(a.basis_data == b.basis_data);
    CHECK(a.roots == b.roots);
}

TEST_CASE("every root is one-signed at every reached basis") {
    for (const BicharacterMatrix& m : {a4(), d4(), row6()}) {
        GroupoidResult r = explore(m);
        REQUIRE(r.verdict == Verdict::full_finite);
        for (size_t bi = 0; bi < r.basis_count; ++bi) {
            const Basis f = r.basis(bi);
            for (const RootVec& root : r.roots) {
                RootVec c = coords_in_basis(f, root);
                bool nonneg = true, nonpos = true;
                for (int v : c) {
                    nonneg = nonneg && v >= 0;
                    nonpos = nonpos && v <= 0;
                }
                CHECK((nonneg || nonpos));
            }
        }
    }
}

TEST_CASE("reflection moves exactly one positive root") {
    BicharacterMatrix m = row6();
    GroupoidResult r = explore(m);
    REQUIRE(r.verdict == Verdict::full_finite);
    auto positives = [&](const Basis& b) {
        std::set<RootVec> out;
        for (const RootVec& root : r.roots)
            if (in_n0_of(b, root))
                out.insert(root);
        return out;
    };
    for (size_t bi = 0; bi < r.basis_count; ++bi) {
        const Basis f = r.basis(bi);
        for (int i = 1; i <= m.dim(); ++i) {
            Basis g = reflect(m, f, i);
            std::set<RootVec> expect = positives(f);
            expect.erase(f.f[i - 1]);
            RootVec neg(f.f[i - 1].size());
            for (size_t k = 0; k < neg.size(); ++k)
                neg[k] = -f.f[i - 1][k];
            expect.insert(neg);
            CHECK(positives(g) == expect);
        }
    }
}

TEST_CASE("word application") {
    BicharacterMatrix m = row6();
    WordResult empty = apply_word(m, {});
    CHECK(empty.final == Basis::standard(4));
    CHECK(empty.trace.size() == 1);

    // appendix word for rows 6 and 10, with the full printed chain
    WordResult wr = apply_word(m, {4, 3, 2, 1});
    std::vector<std::string> expect{"(1,2,3,4)", "(-1,12,3,4)", "(2,-12,123,4)",
                                    "(2,3,-123,1234)", "(2,3,4,-1234)"};
    REQUIRE(wr.trace.size() == expect.size());
    for (size_t i = 0; i < expect.size(); ++i)
        CHECK(print_basis_tuple(wr.trace[i]) == expect[i]);

    BicharacterMatrix undef = path_matrix({q(), q()}, {q()});
    try {
        apply_word(undef, {2, 1});
        FAIL("expected ReflectionUndefined");
    } catch (const ReflectionUndefined& e) {
        CHECK(e.word_position == 1);
    }
}

TEST_CASE("finiteness induction certificates") {
    BicharacterMatrix m = row6();
    CHECK(witnesses_finiteness_induction(m, {4, 3, 2, 1}));
    CHECK_FALSE(witnesses_finiteness_induction(a4(), {}));

    // rank 2: some word of length <= 6 certifies A_2 (independent search)
    bool found = false;
    std::vector<ReflectionWord> words{{1}, {2}, {1, 2}, {2, 1}, {1, 2, 1}, {2, 1, 2}};
    for (const auto& w : words)
        found = found || witnesses_finiteness_induction(a2(), w);
    CHECK(found);
}

TEST_CASE("weyl equivalence within and across rows") {
    // row 6 of the rank-4 table: first and second diagram, same parameter
    BicharacterMatrix d1 = row6();
    BicharacterMatrix d2 = path_matrix({m1(), m1(), q(), q()},
                                       {q(), q().inverse(), q().inverse()});
    CHECK(weyl_equivalent(d1, d2));
    CHECK(weyl_equivalent(d2, d1));
    CHECK(weyl_equivalent(d1, d1));
    CHECK_FALSE(weyl_equivalent(a4(), d4()));
    BicharacterMatrix affine = path_matrix({q(), q()}, {q().pow(-4)});
    CHECK_THROWS_AS(weyl_equivalent(affine, affine, ExploreCaps{1000, 20}), StateError);

    // equivalent systems share their exploration statistics
    GroupoidResult r1 = explore(d1), r2 = explore(d2);
    CHECK(r1.roots.size() == r2.roots.size());
    CHECK(r1.basis_count == r2.basis_count);
}

TEST_CASE("result JSON carries the verdict and counts") {
    GroupoidResult r = explore(a2());
    std::string j = r.to_json();
    CHECK(j.find("\"verdict\":\"full_finite\"") != std::string::npos);
    CHECK(j.find("\"num_bases\":6") != std::string::npos);
    CHECK(j.find("\"positive_roots\":[[0,1],[1,0],[1,1]]") != std::string::npos);
}

TEST_CASE("root printing uses the compressed notation") {
    CHECK(print_root({1, 2, 2, 1}) == "12^23^24");
    CHECK(print_root({-1, -2, -2, -1}) == "-12^23^24");
    CHECK(print_root({0, 1, 0, 0}) == "2");
    CHECK(print_root({1, -1, 0, 0}) == "[1,-1,0,0]");
    CHECK(print_root({0, 0, 0, 0}) == "0");
}
