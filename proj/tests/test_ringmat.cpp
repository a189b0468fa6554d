#include <doctest.h>

#include <random>

#include <Eigen/LU>

#include "weil/ringmat.hpp"

using namespace weil;

namespace {

using QMat = Mat<mpq_class>;

QMat random_int_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937& rng, int span = 3)
{
    std::uniform_int_distribution<int> d(-span, span);
    QMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = d(rng);
    return m;
}

Eigen::MatrixXd to_double(const QMat& m)
{
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
    return out;
}

QMat diag(std::initializer_list<long> values)
{
    QMat m = QMat::Constant(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()), 0);
    Eigen::Index k = 0;
    for (long v : values) m(k, k) = v, ++k;
    return m;
}

RingMatrix fourier(int n)
{
    const auto field = make_field(n);
    RingMatrix f(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f(i, j) = root_of_unity(field, static_cast<long>(i) * j);
    return f;
}

}  // namespace

TEST_CASE("rank agrees with floating point LU on small integer matrices")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index r = 1 + trial % 5, c = 1 + (trial / 5) % 5;
        QMat m = random_int_matrix(r, c, rng, 1);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(to_double(m));
        CHECK(rank(m) == lu.rank());
    }
}

TEST_CASE("inverse and nullspace satisfy their defining identities")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const QMat m = random_int_matrix(4, 4, rng);
        const auto inv = inverse_matrix(m);
        const Eigen::Index rk = rank(m);
        CHECK(inv.has_value() == (rk == 4));
        if (inv) CHECK(is_identity(matmul(m, *inv)));
        const QMat ns = nullspace(m);
        CHECK(ns.cols() == 4 - rk);
        if (ns.cols()) CHECK(is_zero_matrix(matmul(m, ns)));
    }
    QMat singular(2, 2);
    singular << 1, 2, 2, 4;
    CHECK_FALSE(inverse_matrix(singular).has_value());
}

TEST_CASE("kron obeys the mixed-product rule")
{
    std::mt19937 rng(9);
    const QMat a = random_int_matrix(2, 3, rng), b = random_int_matrix(2, 2, rng);
    const QMat c = random_int_matrix(3, 2, rng), d = random_int_matrix(2, 3, rng);
    CHECK(equal(matmul(kron(a, b), kron(c, d)), kron(matmul(a, c), matmul(b, d))));
    CHECK(kron(a, b).rows() == 4);
    CHECK(kron(a, b).cols() == 6);
}

TEST_CASE("shape errors")
{
    const QMat a = QMat::Constant(2, 3, 1);
    CHECK_THROWS_AS(matmul(a, a), ShapeError);
    CHECK_THROWS_AS(trace(a), ShapeError);
    CHECK_THROWS_AS(add(a, QMat(QMat::Constant(3, 2, 1))), ShapeError);
}

TEST_CASE("commutant dimensions: sum of squared eigenvalue multiplicities")
{
    CHECK(solve_commutant<mpq_class>({diag({1, 2, 3})}).dimension == 3);
    CHECK(solve_commutant<mpq_class>({diag({1, 1, 2})}).dimension == 5);
    CHECK(solve_commutant<mpq_class>({diag({4, 4, 4, 4})}).dimension == 16);
    // The cyclic shift commutes exactly with circulants.
    QMat shift = QMat::Constant(5, 5, 0);
    for (int i = 0; i < 5; ++i) shift((i + 1) % 5, i) = 1;
    const auto c = solve_commutant<mpq_class>({shift});
    CHECK(c.dimension == 5);
    for (const auto& theta : c.basis) CHECK(commutes(theta, shift));
    CHECK(solve_commutant<mpq_class>({shift, diag({1, 2, 3, 4, 5})}).dimension == 1);
}

TEST_CASE("Fourier matrix: F F^dagger = n and unit diagonals are unitary")
{
    for (int n : {2, 3, 4, 6}) {
        const RingMatrix f = fourier(n);
        const RingMatrix g = matmul(f, dagger(f));
        const auto w = equal_up_to_scalar(g, identity(n, f(0, 0).field()));
        REQUIRE(w.has_value());
        CHECK(w->lambda == CycloElt(n));
        CHECK_FALSE(is_unitary(f));
    }
    const auto field = make_field(8);
    RingMatrix d = identity(3, field);
    d(1, 1) = root_of_unity(field, 3);
    d(2, 2) = root_of_unity(field, 5);
    CHECK(is_unitary(d));
}

TEST_CASE("equal_up_to_scalar finds the scalar and its norm")
{
    const auto field = make_field(12);
    RingMatrix m = identity(3, field);
    m(0, 2) = root_of_unity(field, 1);
    const CycloElt unit = root_of_unity(field, 5);
    const auto w = equal_up_to_scalar(scalar_mul(unit, m), m);
    REQUIRE(w.has_value());
    CHECK(w->lambda == unit);
    CHECK(w->unit_norm);
    const auto w2 = equal_up_to_scalar(scalar_mul(CycloElt(field, mpq_class(2)), m), m);
    REQUIRE(w2.has_value());
    CHECK_FALSE(w2->unit_norm);
    RingMatrix other = m;
    other(1, 1) = CycloElt(field, mpq_class(3));
    CHECK_FALSE(equal_up_to_scalar(other, m).has_value());
}

TEST_CASE("restrict_to_span returns the block on an invariant subspace")
{
    const QMat m = diag({1, 2, 3});
    QMat span = QMat::Constant(3, 2, 0);
    span(0, 0) = 1;
    span(2, 1) = 1;
    const auto block = restrict_to_span(m, span);
    REQUIRE(block.has_value());
    CHECK(equal(*block, diag({1, 3})));
    QMat skew = span;
    skew(1, 0) = 1;
    CHECK_FALSE(restrict_to_span(m, skew).has_value());
    const QMat dependent = QMat::Constant(3, 2, 1);
    CHECK_THROWS_AS(restrict_to_span(m, dependent), ArgumentError);
}
