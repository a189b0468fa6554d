// Trace of a genus-one word image without forming matrices. Writing the word cyclically as
// D(t_1) S^{e_1} D(t_2) S^{e_2} ... D(t_k) S^{e_k}, with D(t) = diag(A^{-t i^2}) and S^{e} having
// entries A^{-2 e i j}, the trace is a global scalar times
//   sum over (i_1, ..., i_k) of A^{ sum_j -t_j i_j^2 - 2 e_j i_j i_{j+1} }   (indices cyclic),
// which is accumulated as an exponent histogram and converted to a field element once.

#include <vector>

#include "weil/errors.hpp"
#include "weil/weilrep.hpp"

namespace weil {

namespace {

struct Node {
    long t = 0;  // T power preceding the S factor
    int e = 1;   // +1 for S, -1 for S^{-1}
};

using Histogram = std::vector<long>;

}  // namespace

CycloElt GenusOneLift::histogram_value(const std::vector<long>& counts) const
{
    const FieldPtr& field = rep_.field();
    const long order = field->order();
    std::vector<mpz_class> wide(static_cast<std::size_t>(order), 0);
    for (std::size_t e = 0; e < counts.size(); ++e)
        if (counts[e] != 0) wide[static_cast<std::size_t>(mod(static_cast<long>(e) * rep_.zeta_step(), order))] += counts[e];
    return CycloElt::from_integers(field, std::move(wide), 1);
}

CycloElt GenusOneLift::trace(const GeneratorWord& word) const
{
    const long p = rep_.level();
    const long o = rep_.root_order();
    CycloElt scalar(rep_.field(), mpq_class(1));

    std::vector<Node> nodes;
    long pending = 0;
    long total_t = 0;
    for (const auto& tok : word.tokens) {
        if (tok.kind == TokenKind::T) {
            pending += tok.power;
            total_t += tok.power;
            continue;
        }
        const bool fwd = tok.kind == TokenKind::S;
        scalar *= fwd ? kappa_ : kappa_inv_;
        nodes.push_back({pending, fwd ? 1 : -1});
        pending = 0;
    }
    scalar *= t_scalar_.pow(total_t);
    if (!nodes.empty()) nodes.front().t += pending;

    const std::size_t k = nodes.size();
    auto sq = [o](long i) { return mod(i * i, o); };
    Histogram hist(static_cast<std::size_t>(o), 0);
    auto bump = [&hist, o](long e, long count = 1) { hist[static_cast<std::size_t>(mod(e, o))] += count; };

    if (k == 0) {
        for (long i = 0; i < p; ++i) bump(-pending * sq(i));
        return scalar * histogram_value(hist);
    }
    if (k == 1) {
        const long t = nodes[0].t, e = nodes[0].e;
        for (long i = 0; i < p; ++i) bump(-(t + 2 * e) * sq(i));
        return scalar * histogram_value(hist);
    }
    if (k == 2) {
        const long t1 = mod(nodes[0].t, o), t2 = mod(nodes[1].t, o);
        const long cross = mod(-2 * (nodes[0].e + nodes[1].e), o);
        for (long i = 0; i < p; ++i)
            for (long j = 0; j < p; ++j) bump(-t1 * sq(i) - t2 * sq(j) + cross * ((i * j) % o));
        return scalar * histogram_value(hist);
    }
    if (k == 3) {
        if (p * p * p > 50'000'000) throw ResourceError("trace: three-S word too large");
        const long t1 = mod(nodes[0].t, o), t2 = mod(nodes[1].t, o), t3 = mod(nodes[2].t, o);
        const long c1 = -2 * nodes[0].e, c2 = -2 * nodes[1].e, c3 = -2 * nodes[2].e;
        for (long a = 0; a < p; ++a)
            for (long b = 0; b < p; ++b)
                for (long c = 0; c < p; ++c)
                    bump(-t1 * sq(a) - t2 * sq(b) - t3 * sq(c) + c1 * a * b + c2 * b * c + c3 * c * a);
        return scalar * histogram_value(hist);
    }
    if (k == 4) {
        // Summing out i_2 and i_4 leaves inner sums h_2(e_1 i_1 + e_2 i_3) and h_4(e_4 i_1 + e_3 i_3).
        const int e1 = nodes[0].e, e2 = nodes[1].e, e3 = nodes[2].e, e4 = nodes[3].e;
        const long t1 = mod(nodes[0].t, o), t2 = mod(nodes[1].t, o), t3 = mod(nodes[2].t, o), t4 = mod(nodes[3].t, o);
        if (e4 * e1 == e3 * e2) {
            // (e_4, e_3) = s (e_1, e_2): both inner sums depend on u = e_1 i_1 + e_2 i_3 only.
            const long s = e4 * e1;
            auto inner = [&](long t, long u) {
                Histogram h(static_cast<std::size_t>(o), 0);
                for (long i = 0; i < p; ++i) h[static_cast<std::size_t>(mod(-t * sq(i) - 2 * u * i, o))] += 1;
                return histogram_value(h);
            };
            std::vector<Histogram> outer(static_cast<std::size_t>(p), Histogram(static_cast<std::size_t>(o), 0));
            for (long a = 0; a < p; ++a)
                for (long c = 0; c < p; ++c) {
                    const long u = mod(e1 * a + e2 * c, p);
                    outer[static_cast<std::size_t>(u)][static_cast<std::size_t>(mod(-t1 * sq(a) - t3 * sq(c), o))] += 1;
                }
            CycloElt sum(rep_.field(), mpq_class(0));
            for (long u = 0; u < p; ++u) {
                const CycloElt k_u = histogram_value(outer[static_cast<std::size_t>(u)]);
                if (k_u.is_zero()) continue;
                sum += k_u * inner(t2, u) * inner(t4, s * u);
            }
            return scalar * sum;
        }
        if (p * p * p * p > 100'000'000) throw ResourceError("trace: four-S word too large");
        const long c1 = -2 * e1, c2 = -2 * e2, c3 = -2 * e3, c4 = -2 * e4;
        for (long a = 0; a < p; ++a)
            for (long b = 0; b < p; ++b)
                for (long c = 0; c < p; ++c)
                    for (long d = 0; d < p; ++d)
                        bump(-t1 * sq(a) - t2 * sq(b) - t3 * sq(c) - t4 * sq(d) + c1 * a * b + c2 * b * c + c3 * c * d +
                             c4 * d * a);
        return scalar * histogram_value(hist);
    }
    return weil::trace(evaluate(word));
}

}  // namespace weil
