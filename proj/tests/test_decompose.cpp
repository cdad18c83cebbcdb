#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "twistlab/decompose.hpp"

using namespace twistlab;

namespace {

AlgebraPtr a_n(int n, int d = 2, FieldSpec f = FieldSpec::rationals()) {
    GraphSpec g;
    for (int i = 1; i <= n; ++i) g.vertices.push_back("v" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1, d / 2 + d % 2, d / 2});
    return build_zigzag(g, f, d);
}

AlgebraPtr with_isolated(FieldSpec f = FieldSpec::rationals()) {
    GraphSpec g;
    g.vertices = {"v1", "v2", "w"};
    g.edges.push_back({0, 1, 1, 1});
    return build_zigzag(g, f, 2);
}

/* Exhaustive idempotent search over F_3: every coefficient vector of the
 * (homotopy) endomorphism algebra is tested against e^2 = e.  Independent of
 * the minimal-polynomial route used by find_idempotent. */
bool brute_force_has_idempotent_f3(const EndAlgebra& A) {
    const int n = A.dimension;
    REQUIRE(n <= 6);
    const FieldSpec F = FieldSpec::prime(3);
    std::vector<int> digits(n, 0);
    while (true) {
        std::vector<Scalar> e(n, Scalar::zero(F));
        bool zero = true;
        for (int i = 0; i < n; ++i) {
            e[i] = Scalar::of_int(F, digits[i]);
            zero = zero && digits[i] == 0;
        }
        if (!zero) {
            bool ident = true;
            for (int i = 0; i < n; ++i) ident = ident && e[i] == A.identity[i];
            if (!ident && A.product(e, e) == e) return true;
        }
        int k = 0;
        while (k < n && digits[k] == 2) digits[k++] = 0;
        if (k == n) return false;
        ++digits[k];
    }
}

}  // namespace

TEST_CASE("endomorphism algebra dimensions") {
    auto z3 = a_n(3);
    auto P1 = projective(z3, 0), P3 = projective(z3, 2);
    CHECK(endomorphism_algebra(P1).dimension == 1);
    CHECK(endomorphism_algebra(direct_sum(z3, {P1, P1})).dimension == 4);
    CHECK(endomorphism_algebra(direct_sum(z3, {P1, P3})).dimension == 2);
    // the algebra contains its identity with consistent structure constants
    EndAlgebra A = endomorphism_algebra(direct_sum(z3, {P1, P3}));
    CHECK(A.product(A.identity, A.identity) == A.identity);
}

TEST_CASE("find_idempotent: products, matrix algebras and local algebras") {
    auto z3 = a_n(3);
    auto P1 = projective(z3, 0), P2 = projective(z3, 1), P3 = projective(z3, 2);

    EndAlgebra prod = endomorphism_algebra(direct_sum(z3, {P1, P3}));
    auto e = find_idempotent(prod);
    REQUIRE(e.has_value());
    CHECK(prod.product(*e, *e) == *e);

    EndAlgebra mat2 = endomorphism_algebra(direct_sum(z3, {P1, P1}));
    auto e2 = find_idempotent(mat2);
    REQUIRE(e2.has_value());
    CHECK(mat2.product(*e2, *e2) == *e2);

    CHECK(!find_idempotent(endomorphism_algebra(P1)).has_value());
    // the adjacent twist is indecomposable: its endomorphism algebra is local
    EndAlgebra tw = endomorphism_algebra(twist(P1, P2));
    CHECK(tw.dimension == 1);
    CHECK(!find_idempotent(tw).has_value());
}

TEST_CASE("find_idempotent agrees with exhaustive search over F_3") {
    auto z3 = a_n(3, 2, FieldSpec::prime(3));
    auto P1 = projective(z3, 0), P2 = projective(z3, 1), P3 = projective(z3, 2);
    std::vector<TwistedComplex> cases = {
        P1,
        direct_sum(z3, {P1, P3}),
        direct_sum(z3, {P1, P1}),
        direct_sum(z3, {P1, shift(P3, 2)}),
        twist(P1, P2),
        direct_sum(z3, {P2, P2, P2}),
    };
    for (const auto& m : cases) {
        EndAlgebra A = endomorphism_algebra(m);
        if (A.dimension > 6) continue;
        bool brute = brute_force_has_idempotent_f3(A);
        bool found = find_idempotent(A).has_value();
        CHECK(brute == found);
    }
}

TEST_CASE("split_summands: multiplicities, indecomposables, zero") {
    auto z3 = a_n(3);
    auto P1 = projective(z3, 0), P2 = projective(z3, 1), P3 = projective(z3, 2);

    for (uint64_t seed : {0ull, 1ull, 7ull}) {
        TwistedComplex m = scramble(direct_sum(z3, {P1, P1, P3}), seed);
        Limits lim;
        lim.seed = seed;
        SummandReport rep = split_summands(m, lim);
        CHECK(rep.verified);
        REQUIRE(rep.pieces.size() == 2);
        int total = 0;
        for (const auto& p : rep.pieces) total += p.multiplicity;
        CHECK(total == 3);
        for (const auto& p : rep.pieces) {
            CHECK(p.piece.size() == 1);
            CHECK(p.spherical);
        }
        CHECK(rep.orthogonal[0][1]);
        CHECK(rep.orthogonal[1][0]);
    }

    SummandReport tw = split_summands(twist(P1, P2));
    CHECK(tw.verified);
    REQUIRE(tw.pieces.size() == 1);
    CHECK(tw.pieces[0].multiplicity == 1);
    CHECK(tw.pieces[0].piece.size() == 2);

    SummandReport empty = split_summands(TwistedComplex::zero(z3));
    CHECK(empty.pieces.empty());
    CHECK(empty.verified);
}

TEST_CASE("split handles complexes with differentials and mixed shifts") {
    auto z3 = a_n(3);
    auto P1 = projective(z3, 0), P2 = projective(z3, 1), P3 = projective(z3, 2);
    TwistedComplex c = twist(P1, P2);  // indecomposable 2-summand complex
    for (uint64_t seed : {0ull, 3ull}) {
        TwistedComplex m = scramble(direct_sum(z3, {c, P3, c}), seed);
        Limits lim;
        lim.seed = seed;
        SummandReport rep = split_summands(m, lim);
        CHECK(rep.verified);
        REQUIRE(rep.pieces.size() == 2);
        bool saw_c = false, saw_p3 = false;
        for (const auto& p : rep.pieces) {
            if (p.piece.size() == 2) {
                CHECK(p.multiplicity == 2);
                CHECK(is_isomorphic(p.piece, c, seed).isomorphic);
                saw_c = true;
            } else {
                CHECK(p.multiplicity == 1);
                CHECK(is_isomorphic(p.piece, P3, seed).isomorphic);
                saw_p3 = true;
            }
        }
        CHECK(saw_c);
        CHECK(saw_p3);
    }
}

TEST_CASE("recover_collection: positive case is stable across seeds") {
    auto z3 = a_n(3);
    auto P1 = projective(z3, 0), P3 = projective(z3, 2);
    TwistedComplex base = direct_sum(z3, {P1, P1, P3});
    std::vector<std::vector<int>> seen;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        Limits lim;
        lim.seed = seed;
        RecoverResult r = recover_collection(scramble(base, seed), 2, lim);
        REQUIRE(r.ok);
        REQUIRE(r.collection.members.size() == 2);
        std::vector<int> mult = r.multiplicities;
        std::sort(mult.begin(), mult.end());
        CHECK(mult == std::vector<int>{1, 2});
        // the recovered members are P1 and P3 up to shift, in some order
        bool m0p1 = equal_up_to_shift(r.collection.members[0], P1).has_value();
        bool m1p1 = equal_up_to_shift(r.collection.members[1], P1).has_value();
        bool m0p3 = equal_up_to_shift(r.collection.members[0], P3).has_value();
        bool m1p3 = equal_up_to_shift(r.collection.members[1], P3).has_value();
        CHECK(((m0p1 && m1p3) || (m0p3 && m1p1)));
        CHECK(is_strongly_spherical(r.collection).ok);
        seen.push_back(mult);
    }
    for (const auto& m : seen) CHECK(m == seen.front());
}

TEST_CASE("recover_collection diagnostics") {
    auto z3 = a_n(3);
    auto P1 = projective(z3, 0), P2 = projective(z3, 1);
    RecoverResult adj = recover_collection(direct_sum(z3, {P1, P2}), 2);
    CHECK(!adj.ok);
    CHECK(adj.diagnostic.find("orthogonality violation") != std::string::npos);

    auto zi = with_isolated();
    RecoverResult iso = recover_collection(projective(zi, 2), 2);
    CHECK(!iso.ok);
    CHECK(iso.diagnostic.find("not spherical") != std::string::npos);
}

TEST_CASE("dedup up to shift merges shifted copies") {
    auto z3 = a_n(3);
    auto P1 = projective(z3, 0), P3 = projective(z3, 2);
    TwistedComplex m = direct_sum(z3, {P1, shift(P1, 2), P3});
    RecoverResult r = recover_collection(m, 2);
    REQUIRE(r.ok);
    CHECK(r.collection.members.size() == 2);
    std::vector<int> mult = r.multiplicities;
    std::sort(mult.begin(), mult.end());
    CHECK(mult == std::vector<int>{1, 2});
}

TEST_CASE("splitting works over small prime fields") {
    // char 2 and 3 use the Frobenius-style lifting iterations
    for (uint32_t p : {3u, 101u}) {
        auto z3 = a_n(3, 2, FieldSpec::prime(p));
        auto P1 = projective(z3, 0), P3 = projective(z3, 2);
        SummandReport rep = split_summands(direct_sum(z3, {P1, P3, P1}));
        CHECK(rep.verified);
        REQUIRE(rep.pieces.size() == 2);
        int total = 0;
        for (const auto& piece : rep.pieces) total += piece.multiplicity;
        CHECK(total == 3);
    }
}
