#include <doctest.h>

#include <random>

#include "weil/analysis.hpp"
#include "weil/errors.hpp"

using namespace weil;

namespace {

// Mean of |Tr|^2 over the group, straight from lifted matrices.
mpq_class char_sum_by_matrices(int level)
{
    const GenusOneLift lift(level);
    mpq_class total = 0;
    long count = 0;
    sl2_enumerate(lift.modulus(), [&](const SL2Residue& m) {
        total += trace(lift.evaluate(m)).norm_sq().to_rational();
        ++count;
    });
    return total / count;
}

}  // namespace

TEST_CASE("character sums against matrix-level enumeration")
{
    for (int p : {2, 3, 4, 5}) CHECK(char_sum(p).value == char_sum_by_matrices(p));
}

TEST_CASE("character sums: 2-power and odd prime-power values")
{
    CHECK(char_sum(2).value == 1);
    CHECK(char_sum(4).value == 2);
    CHECK(char_sum(8).value == 3);
    CHECK(char_sum(3).value == 2);
    CHECK(char_sum(5).value == 2);
    CHECK(char_sum(7).value == 2);
    CHECK(char_sum(9).value == 3);
    for (int p : {2, 4}) {
        const auto full = char_sum(p, CharSumMethod::FullEnumeration);
        const auto cen = char_sum(p, CharSumMethod::Census);
        const auto cls = char_sum(p, CharSumMethod::Classes);
        CHECK(full.value == cen.value);
        CHECK(full.value == cls.value);
    }
    CHECK(char_sum(16, CharSumMethod::Census, 4).value == 4);
    CHECK_THROWS_AS(char_sum(3, CharSumMethod::Census), ResourceError);
    CHECK_THROWS_AS(char_sum(1), ArgumentError);
}

TEST_CASE("worker count does not change the result")
{
    CHECK(char_sum(12, CharSumMethod::Classes, 1).value == char_sum(12, CharSumMethod::Classes, 5).value);
}

TEST_CASE("multiplicativity on coprime levels")
{
    const auto r = char_sum_multiplicativity(3, 5);
    CHECK(r.s_ab == 4);
    CHECK(r.holds());
    CHECK(char_sum_multiplicativity(2, 3).s_ab == 2);
    CHECK(char_sum_multiplicativity(4, 3).holds());
    CHECK_THROWS_AS(char_sum_multiplicativity(3, 9), ArgumentError);
}

TEST_CASE("trace table rows and diagonal lifts")
{
    for (int n = 2; n <= 4; ++n) {
        const TraceTable t = trace_table(n);
        CHECK(t.all_match());
        for (const auto& r : t.rows) {
            if (r.l == n) {
                if (r.representative == SL2Residue::identity(1L << n).to_string())
                    CHECK(r.measured == mpq_class(1L << (2 * n - 2)));
            }
            if (r.l == 0 && r.s == 0) CHECK(r.measured == 1);
            if (r.l == n - 1 && r.x_class == "1") CHECK(r.measured == 0);
        }
        CHECK(t.diagonal.size() == static_cast<std::size_t>(1L << (n - 1)));
    }
    const std::string csv = trace_table(2).to_csv();
    CHECK(csv.rfind("n,l,x_class,s,measured,expected,match\n", 0) == 0);
}

TEST_CASE("expected trace values outside the table are absent")
{
    ConjProfile p;
    p.l = 1;
    p.x = 1;
    p.s = 2;
    CHECK(expected_trace_abs_sq(4, p).has_value());
    p.l = 2;
    p.x = 3;
    CHECK(expected_trace_abs_sq(4, p) == mpq_class(4));
}

TEST_CASE("faithfulness at small odd levels")
{
    for (int p : {3, 5}) {
        const auto r = kernel_check(p);
        CHECK(r.elements == sl2_order(p));
        CHECK(r.injective());
        CHECK(r.minus_identity_distinct);
    }
    CHECK_THROWS_AS(kernel_check(4), ResourceError);
}

TEST_CASE("semiclassical traces vanish exactly below the level")
{
    for (int p = 3; p <= 9; ++p) {
        std::vector<std::vector<long>> monos;
        for (long a = 0; a <= 4; ++a)
            for (long b = 0; a + b <= 4; ++b) monos.push_back({a, b});
        for (const auto& r : semiclassical_traces(p, 1, monos)) {
            const long deg = r.exponents[0] + r.exponents[1];
            if (deg < p) CHECK(r.gap == 0);
            // Multiples of the level in both exponents give the identity operator.
            const bool trivial = r.exponents[0] % p == 0 && r.exponents[1] % p == 0;
            CHECK(r.value == (trivial ? 1 : 0));
        }
    }
    const auto g2 = semiclassical_traces(3, 2, {{0, 0, 0, 0}, {1, 0, 0, 1}, {3, 0, 0, 3}});
    CHECK(g2[0].value == 1);
    CHECK(g2[1].value == 0);
    CHECK(g2[2].value == 1);
    CHECK_THROWS_AS(semiclassical_traces(3, 1, {{1, 2, 3}}), ArgumentError);
}
