#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <gmpxx.h>

#include "weil/cyclo.hpp"
#include "weil/errors.hpp"

namespace Eigen {
template <>
struct NumTraits<weil::CycloElt> : GenericNumTraits<weil::CycloElt> {
    using Real = weil::CycloElt;
    using NonInteger = weil::CycloElt;
    using Nested = weil::CycloElt;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 16,
        MulCost = 64
    };
};
}  // namespace Eigen

namespace weil {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using RingMatrix = Mat<CycloElt>;

// Scalar hooks used by the templates below. Exact scalars only.
inline bool is_zero(const mpq_class& x) { return x == 0; }
inline mpq_class conj(const mpq_class& x) { return x; }
inline mpq_class inverse(const mpq_class& x)
{
    if (x == 0) throw DivisionByZero("inverse of zero");
    return 1 / x;
}
inline mpq_class norm_sq(const mpq_class& x) { return x * x; }

// A scalar equal to v living in the same field as proto.
inline mpq_class scalar_like(const mpq_class&, long v) { return v; }
inline CycloElt scalar_like(const CycloElt& proto, long v)
{
    return proto.field() ? CycloElt(proto.field(), mpq_class(v)) : CycloElt(v);
}

// Representative entry carrying the field of m (first entry that has one).
inline const mpq_class& prototype(const Mat<mpq_class>& m) { return m(0, 0); }
inline const CycloElt& prototype(const RingMatrix& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j).field()) return m(i, j);
    return m(0, 0);
}

template <class Scalar>
Mat<Scalar> zeros_like(const Mat<Scalar>& proto, Eigen::Index rows, Eigen::Index cols)
{
    const Scalar zero = scalar_like(prototype(proto), 0);
    Mat<Scalar> out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = zero;
    return out;
}

template <class Scalar>
Mat<Scalar> identity_like(const Mat<Scalar>& proto, Eigen::Index n)
{
    Mat<Scalar> out = zeros_like(proto, n, n);
    const Scalar one = scalar_like(prototype(proto), 1);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = one;
    return out;
}

RingMatrix identity(Eigen::Index n, const FieldPtr& field);
RingMatrix zeros(Eigen::Index rows, Eigen::Index cols, const FieldPtr& field);

template <class Scalar>
Mat<Scalar> matmul(const Mat<Scalar>& a, const Mat<Scalar>& b)
{
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
    Mat<Scalar> out = zeros_like(a, a.rows(), b.cols());
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const Scalar& aik = a(i, k);
            if (is_zero(aik)) continue;
            for (Eigen::Index j = 0; j < b.cols(); ++j) {
                const Scalar& bkj = b(k, j);
                if (is_zero(bkj)) continue;
                out(i, j) += aik * bkj;
            }
        }
    }
    return out;
}

template <class Scalar>
Mat<Scalar> add(const Mat<Scalar>& a, const Mat<Scalar>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("add: shapes differ");
    Mat<Scalar> out = a;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, j) += b(i, j);
    return out;
}

template <class Scalar>
Mat<Scalar> sub(const Mat<Scalar>& a, const Mat<Scalar>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("sub: shapes differ");
    Mat<Scalar> out = a;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, j) -= b(i, j);
    return out;
}

template <class Scalar>
Mat<Scalar> scalar_mul(const Scalar& s, const Mat<Scalar>& m)
{
    Mat<Scalar> out = m;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!is_zero(out(i, j))) out(i, j) = s * out(i, j);
    return out;
}

template <class Scalar>
Scalar trace(const Mat<Scalar>& m)
{
    if (m.rows() != m.cols()) throw ShapeError("trace: matrix not square");
    Scalar t = scalar_like(prototype(m), 0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

template <class Scalar>
Mat<Scalar> dagger(const Mat<Scalar>& m)
{
    Mat<Scalar> out(m.cols(), m.rows());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) out(j, i) = conj(m(i, j));
    return out;
}

template <class Scalar>
Mat<Scalar> kron(const Mat<Scalar>& m, const Mat<Scalar>& n)
{
    Mat<Scalar> out = zeros_like(m, m.rows() * n.rows(), m.cols() * n.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (is_zero(m(i, j))) continue;
            for (Eigen::Index k = 0; k < n.rows(); ++k)
                for (Eigen::Index l = 0; l < n.cols(); ++l)
                    if (!is_zero(n(k, l))) out(i * n.rows() + k, j * n.cols() + l) = m(i, j) * n(k, l);
        }
    return out;
}

template <class Scalar>
bool equal(const Mat<Scalar>& a, const Mat<Scalar>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

template <class Scalar>
bool is_zero_matrix(const Mat<Scalar>& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!is_zero(m(i, j))) return false;
    return true;
}

template <class Scalar>
bool is_identity(const Mat<Scalar>& m)
{
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const bool ok = (i == j) ? m(i, j) == scalar_like(m(i, j), 1) : is_zero(m(i, j));
            if (!ok) return false;
        }
    return true;
}

template <class Scalar>
struct ScalarWitness {
    Scalar lambda;
    bool unit_norm;
};

// M = lambda * N, with lambda read off the first nonzero entry of N (column-major scan).
template <class Scalar>
std::optional<ScalarWitness<Scalar>> equal_up_to_scalar(const Mat<Scalar>& m, const Mat<Scalar>& n)
{
    if (m.rows() != n.rows() || m.cols() != n.cols()) throw ShapeError("equal_up_to_scalar: shapes differ");
    std::optional<Scalar> lambda;
    for (Eigen::Index j = 0; j < n.cols() && !lambda; ++j)
        for (Eigen::Index i = 0; i < n.rows(); ++i)
            if (!is_zero(n(i, j))) {
                lambda = m(i, j) / n(i, j);
                break;
            }
    if (!lambda) {
        if (!is_zero_matrix(m)) return std::nullopt;
        return ScalarWitness<Scalar>{scalar_like(prototype(m), 1), true};
    }
    for (Eigen::Index j = 0; j < n.cols(); ++j)
        for (Eigen::Index i = 0; i < n.rows(); ++i) {
            if (is_zero(n(i, j))) {
                if (!is_zero(m(i, j))) return std::nullopt;
            } else if (m(i, j) != *lambda * n(i, j)) {
                return std::nullopt;
            }
        }
    const bool unit = norm_sq(*lambda) == scalar_like(*lambda, 1);
    return ScalarWitness<Scalar>{*lambda, unit};
}

template <class Scalar>
bool is_unitary(const Mat<Scalar>& m)
{
    if (m.rows() != m.cols()) throw ShapeError("is_unitary: matrix not square");
    return is_identity(matmul(dagger(m), m));
}

template <class Scalar>
bool commutes(const Mat<Scalar>& a, const Mat<Scalar>& b)
{
    return equal(matmul(a, b), matmul(b, a));
}

// In-place reduced row echelon form; pivot = first nonzero entry in the column.
// Returns the pivot column of each nonzero row.
template <class Scalar>
std::vector<Eigen::Index> rref(Mat<Scalar>& m)
{
    std::vector<Eigen::Index> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
        Eigen::Index sel = -1;
        for (Eigen::Index i = row; i < m.rows(); ++i)
            if (!is_zero(m(i, col))) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != row) m.row(sel).swap(m.row(row));
        const Scalar inv = inverse(m(row, col));
        for (Eigen::Index j = col; j < m.cols(); ++j)
            if (!is_zero(m(row, j))) m(row, j) = m(row, j) * inv;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i == row || is_zero(m(i, col))) continue;
            const Scalar f = m(i, col);
            for (Eigen::Index j = col; j < m.cols(); ++j)
                if (!is_zero(m(row, j))) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class Scalar>
Eigen::Index rank(Mat<Scalar> m)
{
    return static_cast<Eigen::Index>(rref(m).size());
}

template <class Scalar>
std::optional<Mat<Scalar>> inverse_matrix(const Mat<Scalar>& m)
{
    if (m.rows() != m.cols()) throw ShapeError("inverse_matrix: matrix not square");
    const Eigen::Index n = m.rows();
    Mat<Scalar> aug = zeros_like(m, n, 2 * n);
    aug.leftCols(n) = m;
    aug.rightCols(n) = identity_like(m, n);
    const auto pivots = rref(aug);
    if (static_cast<Eigen::Index>(pivots.size()) < n || pivots[static_cast<std::size_t>(n - 1)] != n - 1)
        return std::nullopt;
    return Mat<Scalar>(aug.rightCols(n));
}

// Columns span the right null space of m.
template <class Scalar>
Mat<Scalar> nullspace(const Mat<Scalar>& m)
{
    Mat<Scalar> r = m;
    const auto pivots = rref(r);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (auto c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<Eigen::Index> free;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) free.push_back(c);
    Mat<Scalar> out = zeros_like(m, m.cols(), static_cast<Eigen::Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) {
        const Eigen::Index f = free[k];
        out(f, static_cast<Eigen::Index>(k)) = scalar_like(prototype(m), 1);
        for (std::size_t p = 0; p < pivots.size(); ++p)
            if (!is_zero(r(static_cast<Eigen::Index>(p), f)))
                out(pivots[p], static_cast<Eigen::Index>(k)) = -r(static_cast<Eigen::Index>(p), f);
    }
    return out;
}

// Matrix of m restricted to the column span of `span`, or nullopt when the span is not invariant.
template <class Scalar>
std::optional<Mat<Scalar>> restrict_to_span(const Mat<Scalar>& m, const Mat<Scalar>& span)
{
    if (m.rows() != m.cols() || span.rows() != m.rows()) throw ShapeError("restrict_to_span: shapes differ");
    const Eigen::Index k = span.cols();
    if (rank(span) != k) throw ArgumentError("restrict_to_span: span vectors are linearly dependent");
    const Mat<Scalar> image = matmul(m, span);
    Mat<Scalar> aug = zeros_like(span, span.rows(), 2 * k);
    aug.leftCols(k) = span;
    aug.rightCols(k) = image;
    const auto pivots = rref(aug);
    if (static_cast<Eigen::Index>(pivots.size()) > k) return std::nullopt;
    return Mat<Scalar>(aug.block(0, k, k, k));
}

template <class Scalar>
struct Commutant {
    int dimension = 0;
    std::vector<Mat<Scalar>> basis;
};

namespace detail {

template <class Scalar>
using SparseRow = std::map<Eigen::Index, Scalar>;

// Semi-echelon elimination over sparse rows: each stored row has its lowest column as pivot,
// normalised to 1.
template <class Scalar>
class SparseEchelon {
public:
    void insert(SparseRow<Scalar> row)
    {
        auto it = row.begin();
        while (it != row.end()) {
            auto piv = pivots_.find(it->first);
            if (piv == pivots_.end()) {
                ++it;
                continue;
            }
            const Eigen::Index col = it->first;
            const Scalar factor = it->second;
            for (const auto& [c, v] : piv->second) {
                auto hit = row.find(c);
                if (hit == row.end()) {
                    row.emplace(c, -(factor * v));
                } else {
                    hit->second -= factor * v;
                    if (is_zero(hit->second)) row.erase(hit);
                }
            }
            it = row.upper_bound(col);
        }
        if (row.empty()) return;
        const Eigen::Index lead = row.begin()->first;
        const Scalar inv = inverse(row.begin()->second);
        for (auto& [c, v] : row) v = (c == lead) ? scalar_like(v, 1) : v * inv;
        pivots_.emplace(lead, std::move(row));
    }

    bool is_pivot(Eigen::Index c) const { return pivots_.count(c) != 0; }
    const std::map<Eigen::Index, SparseRow<Scalar>>& rows() const { return pivots_; }

private:
    std::map<Eigen::Index, SparseRow<Scalar>> pivots_;
};

}  // namespace detail

// Joint commutant {Theta : Theta M = M Theta for all M in ms}, unknown Theta(i,j) at index i*n+j.
template <class Scalar>
Commutant<Scalar> solve_commutant(const std::vector<Mat<Scalar>>& ms)
{
    if (ms.empty()) throw ArgumentError("solve_commutant: empty generator list");
    const Eigen::Index n = ms.front().rows();
    for (const auto& m : ms)
        if (m.rows() != n || m.cols() != n) throw ShapeError("solve_commutant: generators must be square of equal size");

    std::vector<detail::SparseRow<Scalar>> equations;
    for (const auto& m : ms) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                detail::SparseRow<Scalar> row;
                auto accumulate = [&row](Eigen::Index col, const Scalar& v) {
                    auto hit = row.find(col);
                    if (hit == row.end()) {
                        row.emplace(col, v);
                    } else {
                        hit->second += v;
                        if (is_zero(hit->second)) row.erase(hit);
                    }
                };
                for (Eigen::Index k = 0; k < n; ++k) {
                    if (!is_zero(m(k, j))) accumulate(i * n + k, m(k, j));
                    if (!is_zero(m(i, k))) accumulate(k * n + j, -m(i, k));
                }
                if (!row.empty()) equations.push_back(std::move(row));
            }
    }
    std::stable_sort(equations.begin(), equations.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    detail::SparseEchelon<Scalar> echelon;
    for (auto& eq : equations) echelon.insert(std::move(eq));

    const Scalar zero = scalar_like(prototype(ms.front()), 0);
    const Scalar one = scalar_like(prototype(ms.front()), 1);
    Commutant<Scalar> result;
    for (Eigen::Index f = 0; f < n * n; ++f) {
        if (echelon.is_pivot(f)) continue;
        std::vector<Scalar> x(static_cast<std::size_t>(n * n), zero);
        x[static_cast<std::size_t>(f)] = one;
        const auto& rows = echelon.rows();
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
            Scalar acc = zero;
            for (const auto& [c, v] : it->second)
                if (c != it->first && !is_zero(x[static_cast<std::size_t>(c)])) acc -= v * x[static_cast<std::size_t>(c)];
            x[static_cast<std::size_t>(it->first)] = acc;
        }
        Mat<Scalar> theta = zeros_like(ms.front(), n, n);
        for (Eigen::Index u = 0; u < n * n; ++u) theta(u / n, u % n) = x[static_cast<std::size_t>(u)];
        result.basis.push_back(std::move(theta));
    }
    result.dimension = static_cast<int>(result.basis.size());
    for (const auto& theta : result.basis)
        for (const auto& m : ms)
            if (!commutes(theta, m)) throw DefectError("solve_commutant: basis element fails to commute");
    return result;
}

}  // namespace weil
