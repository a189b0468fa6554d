#include "weil/ringmat.hpp"

namespace weil {

RingMatrix zeros(Eigen::Index rows, Eigen::Index cols, const FieldPtr& field)
{
    const CycloElt zero(field, mpq_class(0));
    RingMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = zero;
    return out;
}

RingMatrix identity(Eigen::Index n, const FieldPtr& field)
{
    RingMatrix out = zeros(n, n, field);
    const CycloElt one(field, mpq_class(1));
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = one;
    return out;
}

}  // namespace weil
