#include <doctest.h>

#include <json.hpp>

#include "weil/decompose.hpp"
#include "weil/errors.hpp"

using namespace weil;

namespace {

long divisor_count_oracle(long n)
{
    long c = 0;
    for (long d = 1; d * d <= n; ++d)
        if (n % d == 0) c += (d * d == n) ? 1 : 2;
    return c;
}

long ipow(long b, int e)
{
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

TEST_CASE("sigma counts divisors")
{
    for (long n = 1; n <= 200; ++n) CHECK(sigma(n) == divisor_count_oracle(n));
    CHECK(expected_factor_count(9) == 3);
    CHECK(expected_factor_count(8) == 3);
    CHECK(expected_factor_count(2) == 1);
}

TEST_CASE("parity split: invariant bases with orbit-count dimensions")
{
    for (int genus = 1; genus <= 2; ++genus)
        for (int p = 2; p <= (genus == 1 ? 9 : 4); ++p) {
            const ParityBases b = parity_bases(p, genus);
            const auto [plus, minus] = parity_dimensions(p, genus);
            CHECK(b.plus.cols() == plus);
            CHECK(b.minus.cols() == minus);
            CHECK(plus + minus == ipow(p, genus));
        }
    // g = 1: fixed points of a -> -a are 0, plus p/2 for even p.
    CHECK(parity_dimensions(7, 1) == std::pair<long, long>{4, 3});
    CHECK(parity_dimensions(8, 1) == std::pair<long, long>{5, 3});
}

TEST_CASE("CRT intertwiner")
{
    for (auto [a, b, g] : {std::tuple{3, 5, 1}, std::tuple{2, 3, 1}, std::tuple{4, 3, 1}, std::tuple{2, 3, 2}}) {
        const CrtData d = crt_check(a, b, g);
        CHECK(d.pairing_bijective);
        CHECK(d.pass());
    }
    CHECK_THROWS_AS(crt_check(3, 6, 1), ArgumentError);
    CHECK_THROWS_AS(crt_check(3, 9, 1), ArgumentError);
}

TEST_CASE("tower embedding and complement")
{
    for (auto [r, n, g] : {std::tuple{2, 1, 1}, std::tuple{3, 0, 1}, std::tuple{3, 1, 1}, std::tuple{2, 1, 2}}) {
        const TowerData d = tower_check(r, n, g);
        CHECK(d.pass());
        CHECK(d.gvecs.cols() + d.wbasis.cols() == ipow(ipow(r, n + 2), g));
        CHECK(d.gvecs.cols() == ipow(ipow(r, n), g));
    }
    CHECK_THROWS_AS(tower_check(4, 1, 1), ArgumentError);
}

TEST_CASE("decomposition tree: dimensions sum to p^g and leaves match the commutant")
{
    for (int p : {2, 3, 4, 5, 6, 7, 8, 9, 12, 15}) {
        const DecompositionTree t = decomposition_tree(p, 1);
        CHECK(t.total_dim() == p);
        CHECK(static_cast<long>(t.factors.size()) == expected_factor_count(p));
        CHECK(commutant_dimension(p, 1) == static_cast<int>(t.factors.size()));
    }
    for (int p : {2, 3, 4}) {
        const DecompositionTree t = decomposition_tree(p, 2);
        CHECK(t.total_dim() == p * p);
        CHECK(commutant_dimension(p, 2) == static_cast<int>(t.factors.size()));
    }
    CHECK(decomposition_tree(9, 1).factors.size() == 3);
    CHECK(decomposition_tree(2, 1).factors.size() == 1);
    CHECK_THROWS_AS(commutant_dimension(17, 1), ResourceError);
}

TEST_CASE("decomposition JSON is deterministic and well formed")
{
    const std::string a = decomposition_tree(12, 1).to_json();
    CHECK(a == decomposition_tree(12, 1).to_json());
    const auto j = nlohmann::json::parse(a);
    CHECK(j["level"] == 12);
    CHECK(j["factor_count"] == 4);
    long dim = 0;
    for (const auto& f : j["factors"]) {
        long d = 1;
        for (const auto& l : f["tensor"]) d *= l["dim"].get<long>();
        dim += d;
    }
    CHECK(dim == 12);
}

TEST_CASE("omega operators at an odd prime power")
{
    const OmegaFamily f = omega_family(9, 1);
    CHECK(f.operators.size() == 3);
    CHECK(f.all_commute());
    CHECK(f.independent());
    CHECK(f.pass());
    long orbit_total = 0;
    for (const auto& op : f.operators) orbit_total += op.orbit_size;
    CHECK(orbit_total == 81);
    for (int p : {3, 5}) CHECK(omega_family(p, 1).pass());
}

TEST_CASE("SU2/SO3 audit: odd summands fill the odd part")
{
    for (int p = 2; p <= 30; ++p) CHECK(su2_so3_labels(p, p <= 12).pass());
}
