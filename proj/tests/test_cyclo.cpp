#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "weil/cyclo.hpp"
#include "weil/errors.hpp"

using namespace weil;

namespace {

// Evaluates the power-basis coefficients at exp(2 pi i / L).
std::complex<double> evaluate(const CycloElt& z)
{
    if (!z.field()) return {z.coeff(0).get_d(), 0.0};
    const int order = z.field()->order();
    std::complex<double> acc = 0.0;
    for (int k = 0; k < z.degree(); ++k)
        acc += z.coeff(k).get_d() * std::polar(1.0, 2.0 * std::numbers::pi * k / order);
    return acc;
}

int moebius(long n)
{
    int mu = 1;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    return n > 1 ? -mu : mu;
}

CycloElt random_element(const FieldPtr& field, std::mt19937& rng)
{
    std::uniform_int_distribution<int> coeff(-4, 4), den(1, 3);
    std::vector<mpq_class> c;
    for (int k = 0; k < field->degree(); ++k) c.emplace_back(coeff(rng), den(rng));
    return CycloElt(field, c);
}

}  // namespace

TEST_CASE("cyclotomic polynomials have degree phi(L) and known small forms")
{
    CHECK(cyclotomic_polynomial(1) == std::vector<long>{-1, 1});
    CHECK(cyclotomic_polynomial(4) == std::vector<long>{1, 0, 1});
    CHECK(cyclotomic_polynomial(12) == std::vector<long>{1, 0, -1, 0, 1});
    CHECK(cyclotomic_polynomial(24) == std::vector<long>{1, 0, 0, 0, -1, 0, 0, 0, 1});
    for (int order : {1, 2, 3, 6, 8, 9, 15, 24, 40, 72})
        CHECK(static_cast<long>(cyclotomic_polynomial(order).size()) == euler_phi(order) + 1);
}

TEST_CASE("fields are interned by order")
{
    CHECK(make_field(24) == make_field(24));
    CHECK(make_field(24) != make_field(48));
    CHECK_THROWS_AS(make_field(0), ArgumentError);
}

TEST_CASE("roots of unity: order, multiplicativity and primitive sums")
{
    for (int order : {1, 2, 3, 4, 6, 8, 12, 24, 30, 72}) {
        const auto field = make_field(order);
        const CycloElt zeta = root_of_unity(field, 1);
        CHECK(zeta.pow(order).is_one());
        for (int d = 1; d < order; ++d)
            if (order % d == 0) CHECK_FALSE(zeta.pow(d).is_one());
        CHECK(root_of_unity(field, 5) * root_of_unity(field, 7) == root_of_unity(field, 12));
        CHECK(root_of_unity(field, -3) == root_of_unity(field, order - 3));
        CycloElt primitive_sum(field, mpq_class(0));
        for (int k = 1; k <= order; ++k)
            if (std::gcd(k, order) == 1) primitive_sum += root_of_unity(field, k);
        CHECK(primitive_sum == CycloElt(moebius(order)));
    }
}

TEST_CASE("field operations agree with the complex embedding")
{
    std::mt19937 rng(17);
    for (int order : {3, 8, 12, 24, 40}) {
        const auto field = make_field(order);
        for (int trial = 0; trial < 20; ++trial) {
            const CycloElt z = random_element(field, rng);
            const CycloElt w = random_element(field, rng);
            const auto ez = evaluate(z), ew = evaluate(w);
            CHECK(std::abs(evaluate(z + w) - (ez + ew)) < 1e-9);
            CHECK(std::abs(evaluate(z - w) - (ez - ew)) < 1e-9);
            CHECK(std::abs(evaluate(z * w) - ez * ew) < 1e-9);
            CHECK(std::abs(evaluate(z.conj()) - std::conj(ez)) < 1e-9);
            CHECK(std::abs(evaluate(z.norm_sq()) - std::norm(ez)) < 1e-9);
            CHECK(std::abs(embed_complex(z) - ez) < 1e-9);
            if (!z.is_zero()) {
                CHECK((z * z.inverse()).is_one());
                CHECK(std::abs(evaluate(w / z) - ew / ez) < 1e-9);
            }
        }
    }
}

TEST_CASE("ring axioms hold exactly")
{
    std::mt19937 rng(3);
    const auto field = make_field(24);
    for (int trial = 0; trial < 10; ++trial) {
        const CycloElt a = random_element(field, rng), b = random_element(field, rng), c = random_element(field, rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("rational constants coerce into any field")
{
    const auto field = make_field(12);
    const CycloElt zeta = root_of_unity(field, 1);
    const CycloElt half(mpq_class(1, 2));
    CHECK(half.is_rational());
    CHECK((zeta + half - zeta) == half);
    CHECK((half * 2).is_one());
    CHECK((zeta * zeta.conj()).to_rational() == 1);
    CHECK_THROWS_AS(zeta.to_rational(), ArgumentError);
}

TEST_CASE("errors: division by zero and mixed fields")
{
    const CycloElt zero(make_field(8), mpq_class(0));
    CHECK_THROWS_AS(zero.inverse(), DivisionByZero);
    CHECK_THROWS_AS(root_of_unity(make_field(8), 1) + root_of_unity(make_field(12), 1), FieldMismatch);
}

TEST_CASE("Gauss-type sums: |sum_k zeta^(k^2)|^2 over odd prime moduli equals the modulus")
{
    for (int q : {3, 5, 7, 11, 13}) {
        const auto field = make_field(q);
        CycloElt g(field, mpq_class(0));
        for (int k = 0; k < q; ++k) g += root_of_unity(field, static_cast<long>(k) * k);
        CHECK(g.norm_sq() == CycloElt(q));
    }
}
