#include "weil/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "weil/decompose.hpp"
#include "weil/errors.hpp"

namespace weil {

namespace {

long pow2(int e) { return 1L << e; }

int log2_exact(long v)
{
    int e = 0;
    while ((1L << e) < v) ++e;
    return (1L << e) == v ? e : -1;
}

// Evaluates task(i) for i in [0, count) on up to `workers` threads; results summed in index order.
mpq_class ordered_sum(long count, int workers, const std::function<mpq_class(long)>& task)
{
    std::vector<mpq_class> parts(static_cast<std::size_t>(count));
    const int threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (threads == 1) {
        for (long i = 0; i < count; ++i) parts[static_cast<std::size_t>(i)] = task(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (long i = t; i < count; i += threads) parts[static_cast<std::size_t>(i)] = task(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(t)] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    mpq_class total = 0;
    for (const auto& v : parts) total += v;
    return total;
}

}  // namespace

std::string method_name(CharSumMethod method)
{
    switch (method) {
        case CharSumMethod::Auto: return "auto";
        case CharSumMethod::FullEnumeration: return "full-enumeration";
        case CharSumMethod::Census: return "census-representatives";
        case CharSumMethod::Classes: return "conjugacy-classes";
    }
    return {};
}

CharSumReport char_sum(int level, CharSumMethod method, int workers)
{
    if (level < 2) throw ArgumentError("char_sum: level must be at least 2");
    const GenusOneLift lift(level);
    const long modulus = lift.modulus();
    const int n = log2_exact(modulus);
    if (method == CharSumMethod::Auto) {
        if (modulus <= 32)
            method = CharSumMethod::FullEnumeration;
        else if (n > 0 && modulus <= 64)
            method = CharSumMethod::Census;
        else
            method = CharSumMethod::Classes;
    }

    CharSumReport report;
    report.level = level;
    report.modulus = modulus;
    report.method = method;
    report.expected = expected_factor_count(level);

    mpq_class total;
    switch (method) {
        case CharSumMethod::FullEnumeration: {
            if (modulus > 32) throw ResourceError("char_sum: full enumeration needs modulus <= 32");
            total = ordered_sum(modulus, workers, [&](long a) -> mpq_class {
                mpq_class part = 0;
                sl2_enumerate_range(modulus, a, a + 1, [&](const SL2Residue& m) { part += lift.trace_abs_sq(m); });
                return part;
            });
            report.class_count = sl2_order(modulus);
            break;
        }
        case CharSumMethod::Census: {
            if (n < 2 || modulus > 64) throw ResourceError("char_sum: census mode needs modulus 2^n <= 64");
            const auto reps = class_representatives(n);
            total = ordered_sum(static_cast<long>(reps.size()), workers, [&](long i) -> mpq_class {
                const auto& r = reps[static_cast<std::size_t>(i)];
                return mpq_class(r.m) * lift.trace_abs_sq(r.matrix);
            });
            report.class_count = static_cast<long>(reps.size());
            break;
        }
        case CharSumMethod::Classes: {
            const auto classes = conjugacy_classes(modulus);
            total = ordered_sum(static_cast<long>(classes.size()), workers, [&](long i) -> mpq_class {
                const auto& c = classes[static_cast<std::size_t>(i)];
                return mpq_class(c.size) * lift.trace_abs_sq(c.representative);
            });
            report.class_count = static_cast<long>(classes.size());
            break;
        }
        case CharSumMethod::Auto: break;
    }
    report.value = total / mpq_class(sl2_order(modulus));
    report.value.canonicalize();
    return report;
}

MultiplicativityReport char_sum_multiplicativity(int a, int b, int workers)
{
    if (std::gcd(a, b) != 1) throw ArgumentError("multiplicativity: levels must be coprime");
    if (a % 2 == 0 && b % 2 == 0) throw ArgumentError("multiplicativity: levels must be coprime");
    MultiplicativityReport r;
    r.a = a;
    r.b = b;
    r.s_a = char_sum(a, CharSumMethod::Auto, workers).value;
    r.s_b = char_sum(b, CharSumMethod::Auto, workers).value;
    r.s_ab = char_sum(a * b, CharSumMethod::Auto, workers).value;
    return r;
}

std::optional<mpq_class> expected_trace_abs_sq(int n, const ConjProfile& p)
{
    const std::string x = x_class(p);
    const int l = p.l, s = p.s;
    auto two = [](int e) { return mpq_class(pow2(e)); };
    if (l == 0) {
        if (s <= n - 2) return two(s);
        if (s == n - 1) return mpq_class(0);
        return two(n - 1);
    }
    if (x == "1") {
        if (l == n) return two(2 * n - 2);
        if (l == n - 1) return mpq_class(0);
        if (s <= n + l - 2) return two(s);
        if (s == n + l - 1) return mpq_class(0);
        return two(n + l - 1);
    }
    if (x == "-1" && l >= 2) return mpq_class(4);
    if (x == "2^(l-1)+1" && l >= 3) return two(2 * l - 2);
    if (x == "2^(l-1)-1" && l >= 3) return mpq_class(4);
    return std::nullopt;
}

bool TraceTable::all_match() const
{
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.match() && r.constant_on_class; }) &&
           std::all_of(diagonal.begin(), diagonal.end(), [](const auto& d) { return d.word_matches && d.is_permutation; });
}

std::string TraceTable::to_csv() const
{
    std::ostringstream os;
    os << "n,l,x_class,s,measured,expected,match\n";
    for (const auto& r : rows)
        os << r.n << "," << r.l << "," << r.x_class << "," << r.s << "," << r.measured.get_str() << ","
           << (r.expected ? r.expected->get_str() : std::string("")) << "," << (r.match() ? "true" : "false") << "\n";
    return os.str();
}

TraceTable trace_table(int n)
{
    if (n < 2 || n > 5) throw ResourceError("trace_table: n must be in 2..5");
    const int level = static_cast<int>(pow2(n - 1));
    const long modulus = pow2(n);
    const GenusOneLift lift(level);
    TraceTable table;
    table.n = n;

    std::mt19937_64 rng(0x5eed + static_cast<unsigned>(n));
    const auto group = sl2_elements(modulus, 64);
    std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);

    for (const auto& rep : class_representatives(n)) {
        TraceTableRow row;
        const ConjProfile prof = conj_profile(rep.matrix, n);
        row.n = n;
        row.l = prof.l;
        row.x_class = x_class(prof);
        row.s = prof.s;
        row.tau = prof.tau;
        row.representative = rep.matrix.to_string();
        row.measured = lift.trace_abs_sq(rep.matrix);
        row.expected = expected_trace_abs_sq(n, prof);
        row.constant_on_class = true;
        for (int k = 0; k < 4; ++k) {
            const auto& g = group[pick(rng)];
            if (lift.trace_abs_sq(conjugate(g, rep.matrix)) != row.measured) row.constant_on_class = false;
        }
        table.rows.push_back(std::move(row));
    }

    // The diagonal elements D_a lift to scalar multiples of permutation matrices.
    const long dim = level;
    for (long a = 1; a < modulus; a += 2) {
        const long ainv = mod_inverse(a, modulus);
        const SL2Residue target = SL2Residue::make(modulus, a, 0, 0, ainv);
        GeneratorWord w;
        w.tokens = {{TokenKind::T, a}, {TokenKind::S, 1}, {TokenKind::T, ainv},
                    {TokenKind::S, 1}, {TokenKind::T, a}, {TokenKind::S, 1}};
        DiagonalCheck check;
        check.a = a;
        check.word_matches = w.evaluate(modulus) == target;
        const RingMatrix image = lift.evaluate(w);
        RingMatrix perm = zeros(dim, dim, lift.rep().field());
        for (long i = 0; i < dim; ++i) perm(i, mod(a * i, dim)) = CycloElt(lift.rep().field(), mpq_class(1));
        const auto witness = equal_up_to_scalar(image, perm);
        check.is_permutation = witness && witness->unit_norm;
        table.diagonal.push_back(check);
    }
    return table;
}

FaithfulnessReport kernel_check(int level)
{
    if (level % 2 == 0 || level < 3 || level > 7) throw ResourceError("kernel_check: level must be 3, 5 or 7");
    const GenusOneLift lift(level);
    FaithfulnessReport report;
    report.level = level;
    std::map<std::string, long> seen;
    auto key_of = [](const RingMatrix& m) {
        std::optional<CycloElt> lead;
        for (Eigen::Index j = 0; j < m.cols() && !lead; ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                if (!m(i, j).is_zero()) {
                    lead = m(i, j);
                    break;
                }
        const CycloElt inv = lead->inverse();
        std::string key;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) key += (m(i, j) * inv).to_string() + ";";
        return key;
    };
    sl2_enumerate(level, [&](const SL2Residue& m) {
        ++report.elements;
        ++seen[key_of(lift.evaluate(m))];
    });
    report.projective_classes = static_cast<long>(seen.size());
    const RingMatrix minus = lift.evaluate(SL2Residue::scalar(level, level - 1));
    report.minus_identity_distinct = !equal_up_to_scalar(minus, lift.rep().identity()).has_value();
    return report;
}

std::vector<SemiclassicalReport> semiclassical_traces(int level, int genus, const std::vector<std::vector<long>>& monomials)
{
    const WeilRep rep(level, genus);
    std::vector<SemiclassicalReport> out;
    for (const auto& mono : monomials) {
        if (mono.size() != static_cast<std::size_t>(2 * genus)) throw ArgumentError("monomial has the wrong length");
        // x_i is the Mod direction (n_i), y_i the Shift direction (m_i).
        HeisenbergElt h{std::vector<long>(static_cast<std::size_t>(2 * genus), 0), 0};
        bool empty = true;
        for (int i = 0; i < genus; ++i) {
            h.x[static_cast<std::size_t>(2 * i + 1)] = mono[static_cast<std::size_t>(2 * i)];
            h.x[static_cast<std::size_t>(2 * i)] = mono[static_cast<std::size_t>(2 * i + 1)];
            empty = empty && mono[static_cast<std::size_t>(2 * i)] == 0 && mono[static_cast<std::size_t>(2 * i + 1)] == 0;
        }
        const CycloElt tr = trace(schrodinger(rep, h));
        if (!tr.is_rational()) throw DefectError("semiclassical trace is not rational");
        SemiclassicalReport r;
        r.level = level;
        r.genus = genus;
        r.exponents = mono;
        r.value = tr.to_rational() / mpq_class(rep.dim());
        r.value.canonicalize();
        r.target = empty ? 1 : 0;
        r.gap = abs(r.value - r.target);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace weil
