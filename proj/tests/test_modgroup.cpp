#include <doctest.h>

#include <random>
#include <set>

#include "weil/errors.hpp"
#include "weil/modgroup.hpp"

using namespace weil;

namespace {

long brute_force_order(long n)
{
    long count = 0;
    for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b)
            for (long c = 0; c < n; ++c)
                for (long d = 0; d < n; ++d) count += mod(a * d - b * c, n) == 1 % n;
    return count;
}

std::set<std::tuple<long, long, long, long>> conjugacy_orbit(const SL2Residue& m)
{
    std::set<std::tuple<long, long, long, long>> orbit;
    sl2_enumerate(m.modulus, [&](const SL2Residue& g) {
        const SL2Residue c = conjugate(g, m);
        orbit.emplace(c.a, c.b, c.c, c.d);
    });
    return orbit;
}

SL2Residue random_element(long modulus, std::mt19937& rng)
{
    const auto all = sl2_elements(modulus, 64);
    return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
}

}  // namespace

TEST_CASE("group orders: streaming enumeration, brute-force scan and closed form")
{
    for (long n = 1; n <= 12; ++n) {
        long streamed = 0;
        std::set<std::tuple<long, long, long, long>> seen;
        sl2_enumerate(n, [&](const SL2Residue& m) {
            ++streamed;
            seen.emplace(m.a, m.b, m.c, m.d);
        });
        CHECK(streamed == brute_force_order(n));
        CHECK(static_cast<long>(seen.size()) == streamed);
        CHECK(sl2_order(n) == streamed);
    }
    for (int e = 1; e <= 5; ++e) CHECK(sl2_order(1L << e) == 3 * (1L << (3 * e - 2)));
    CHECK_THROWS_AS(sl2_enumerate(65, [](const SL2Residue&) {}), ResourceError);
}

TEST_CASE("SL2 arithmetic")
{
    const long n = 8;
    const SL2Residue s = SL2Residue::s_matrix(n);
    CHECK(s * s == SL2Residue::scalar(n, n - 1));
    CHECK(SL2Residue::t_matrix(n, 3) * SL2Residue::t_matrix(n, 6) == SL2Residue::t_matrix(n, 1));
    std::mt19937 rng(1);
    for (int k = 0; k < 20; ++k) {
        const SL2Residue m = random_element(n, rng);
        CHECK(m * m.inverse() == SL2Residue::identity(n));
        CHECK(m.reduce(4) * m.inverse().reduce(4) == SL2Residue::identity(4));
    }
    CHECK_THROWS_AS(SL2Residue::make(8, 1, 1, 1, 1), ArgumentError);
}

TEST_CASE("word decompositions re-evaluate to the source matrix")
{
    CHECK(word_decompose(SL2Residue::identity(8)).tokens.empty());
    std::mt19937 rng(2);
    for (long n : {2L, 5L, 8L, 9L, 12L, 16L, 18L}) {
        for (int k = 0; k < 25; ++k) {
            const SL2Residue m = random_element(n, rng);
            CHECK(word_decompose(m).evaluate(n) == m);
            CHECK(word_decompose_shifted(m, 3).evaluate(n) == m);
            const GeneratorWord b = bruhat_word(m);
            CHECK(b.evaluate(n) == m);
            CHECK((b.s_count() == 2 || b.s_count() == 4 || b.s_count() <= 1));
        }
    }
}

TEST_CASE("conj_profile: definition examples and class invariance")
{
    CHECK(conj_profile(SL2Residue::identity(8), 3).l == 3);
    CHECK(conj_profile(SL2Residue::scalar(8, 7), 3).l == 3);
    // x = 1, l = 1, det U1 = 1.
    const SL2Residue a1 = SL2Residue::make(8, 1, 6, 2, 5);
    const ConjProfile p = conj_profile(a1, 3);
    CHECK(p.l == 1);
    CHECK(p.x == 1);
    CHECK(p.tau == 1);
    std::mt19937 rng(4);
    for (int n : {3, 4}) {
        const long q = 1L << n;
        for (int k = 0; k < 60; ++k) {
            const SL2Residue m = random_element(q, rng), g = random_element(q, rng);
            CHECK(conj_profile(conjugate(g, m), n) == conj_profile(m, n));
        }
    }
}

TEST_CASE("census: row counts, closed forms and totals")
{
    for (int n = 2; n <= 4; ++n) {
        long total = 0;
        for (const auto& row : census(n, 2)) {
            total += row.count;
            CHECK(row.match());
        }
        CHECK(total == sl2_order(1L << n));
    }
    CHECK(class_count_formula(2, 0, "1", 0) == 16);
    long scalars = 0;
    for (const auto& row : census(3))
        if (row.l == 3) {
            CHECK(row.count == 1);
            ++scalars;
        }
    CHECK(scalars == 4);
}

TEST_CASE("class representatives: determinant one, tabulated sizes, full coverage")
{
    for (int n = 2; n <= 5; ++n) {
        long sum = 0;
        for (const auto& r : class_representatives(n)) sum += r.m;
        CHECK(sum == sl2_order(1L << n));
    }
    for (int n = 2; n <= 3; ++n)
        for (const auto& r : class_representatives(n)) {
            CHECK(class_size_bruteforce(r.matrix) == r.m);
            CHECK(static_cast<long>(conjugacy_orbit(r.matrix).size()) == r.m);
        }
    CHECK(class_size_bruteforce(SL2Residue::identity(8)) == 1);
    CHECK(class_size_bruteforce(SL2Residue::make(4, 1, 1, 1, 2)) == 8);
}

TEST_CASE("conjugacy classes from CRT partition the group")
{
    for (long n : {6L, 10L, 12L, 15L}) {
        long total = 0;
        for (const auto& c : conjugacy_classes(n)) {
            total += c.size;
            CHECK(static_cast<long>(conjugacy_orbit(c.representative).size()) == c.size);
        }
        CHECK(total == sl2_order(n));
    }
}

TEST_CASE("Hensel lifting: exactly 8 lifts, summing to the next group order")
{
    for (int n = 1; n <= 3; ++n) {
        long total = 0;
        sl2_enumerate(1L << n, [&](const SL2Residue& m) {
            const long lifts = hensel_lift_count(m);
            CHECK(lifts == 8);
            total += lifts;
        });
        CHECK(total == sl2_order(1L << (n + 1)));
    }
    CHECK(hensel_lift_count(SL2Residue::s_matrix(4)) == 8);
}

TEST_CASE("quadratic counts: examples and closed forms over the full parameter grid")
{
    CHECK(count_quadratic_solutions(1, 1, 1, 1, 1, false).count == 3);
    CHECK(count_quadratic_solutions(1, 1, 2, 1, 2, false).count == 2);
    CHECK(count_quadratic_solutions(1, 1, 1, 1, 1, true).count == 2);
    for (int n = 1; n <= 6; ++n)
        for (long a = 1; a <= 7; a += 2)
            for (long c = 0; c <= 7; ++c)
                for (long d = 1; d <= 7; d += 2) {
                    for (long b = 1; b <= 7; b += 2) CHECK(count_quadratic_solutions(a, b, c, d, n, false).match());
                    for (long b = 0; b <= 7; ++b) CHECK(count_quadratic_solutions(a, b, c, d, n, true).match());
                }
    CHECK_THROWS_AS(count_quadratic_solutions(2, 1, 1, 1, 3, false), ArgumentError);
    CHECK_THROWS_AS(count_quadratic_solutions(1, 1, 1, 2, 3, true), ArgumentError);
}

TEST_CASE("symplectic generators preserve the form and generate the whole group")
{
    for (long n = 2; n <= 8; ++n) {
        const auto gens = sp_generators(1, n);
        for (const auto& g : gens) CHECK(g.preserves_form());
        CHECK(group_closure_order(gens, 100000) == sl2_order(n));
    }
    const auto gens2 = sp_generators(2, 2);
    for (const auto& g : gens2) CHECK(g.preserves_form());
    CHECK(group_closure_order(gens2, 100000) == 720);
}

TEST_CASE("orbit census: divisor count and diagonal representatives")
{
    CHECK(orbit_census(6, 1).count == 4);
    CHECK(orbit_census(5, 1).count == 2);
    CHECK(orbit_census(4, 2).count == 3);
    for (long n = 1; n <= 12; ++n) CHECK(orbit_census(n, 1).match());
    for (long n = 1; n <= 4; ++n) CHECK(orbit_census(n, 2).match());
    for (long n = 2; n <= 6; ++n) {
        const auto c = orbit_census(n, 1);
        long covered = 0;
        for (long s : c.sizes) covered += s;
        CHECK(covered == n * n);
    }
}
