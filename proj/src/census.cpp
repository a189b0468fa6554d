#include <algorithm>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "weil/errors.hpp"
#include "weil/modgroup.hpp"

namespace weil {

namespace {

long pow2(int e) { return 1L << e; }

// 2-adic valuation of t mod 2^width, with v(0) = width.
int valuation(long t, int width)
{
    t = mod(t, pow2(width));
    if (t == 0) return width;
    int v = 0;
    while ((t & 1) == 0) {
        t >>= 1;
        ++v;
    }
    return v;
}

int x_class_rank(const std::string& x)
{
    if (x == "1") return 0;
    if (x == "-1") return 1;
    if (x == "2^(l-1)+1") return 2;
    return 3;
}

}  // namespace

ConjProfile conj_profile(const SL2Residue& m, int n)
{
    const long big = pow2(n);
    if (m.modulus != big) throw ArgumentError("conj_profile: modulus must be 2^n");
    ConjProfile p;
    int l = 0;
    while (l < n) {
        const long q = pow2(l + 1);
        if (m.b % q != 0 || m.c % q != 0 || mod(m.a - m.d, q) != 0) break;
        ++l;
    }
    p.l = l;
    p.x = m.a % pow2(l);
    if (l == 0) {
        // With A = [[1, b], [c, 1 + bc]] up to conjugacy, s = v2(b) = v2(Tr - 2).
        p.tau = m.trace();
        p.s = valuation(mod(p.tau - 2, big), n);
    } else if (l == n) {
        p.tau = 0;
        p.s = 2 * n;
    } else {
        const long q = pow2(l);
        const long small = pow2(n - l);
        const long u11 = (m.a - p.x) / q, u12 = m.b / q, u21 = m.c / q, u22 = (m.d - p.x) / q;
        p.tau = mod(u11 * u22 - u12 * u21, small);
        p.s = 2 * l + valuation(p.tau, n - l);
    }
    return p;
}

std::string x_class(const ConjProfile& p)
{
    if (p.l == 0) return "1";
    const long q = pow2(p.l);
    if (p.x == 1 % q) return "1";
    if (p.x == q - 1) return "-1";
    if (p.l >= 2 && p.x == q / 2 + 1) return "2^(l-1)+1";
    return "2^(l-1)-1";
}

std::optional<long> class_count_formula(int n, int l, const std::string& x, std::optional<int> s)
{
    if (l == n) {
        if (s) return std::nullopt;
        return 1;
    }
    if (l == 0) {
        if (x != "1" || !s) return std::nullopt;
        if (*s == 0) return pow2(3 * n - 2);
        if (*s >= 1 && *s <= n - 1) return 3 * pow2(3 * n - *s - 3);
        if (*s == n) return 3 * pow2(2 * n - 2);
        return std::nullopt;
    }
    if (x == "1") {
        if (!s || *s < 2 * l || *s > l + n) return std::nullopt;
        if (*s == l + n) return 3 * pow2(2 * n - 2 * l - 2);
        return 3 * pow2(3 * n - l - *s - 3);
    }
    if (s) return std::nullopt;
    if (x == "-1" && l >= 2) return 3 * pow2(3 * n - 3 * l - 2);
    if ((x == "2^(l-1)+1" || x == "2^(l-1)-1") && l >= 3) return pow2(3 * n - 3 * l);
    return std::nullopt;
}

std::vector<CensusRow> census(int n, int workers)
{
    if (n < 2 || n > 6) throw ResourceError("census: n must lie in 2..6");
    const long big = pow2(n);
    using Key = std::tuple<int, int, int>;  // l, x rank, s (-1 when aggregated)
    auto key_for = [n](const ConjProfile& p) {
        const std::string x = x_class(p);
        const bool per_s = p.l < n && x == "1";
        return Key{p.l, x_class_rank(x), per_s ? p.s : -1};
    };
    workers = std::max(1, std::min(workers, static_cast<int>(big)));
    std::vector<std::map<Key, long>> partial(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    const long chunk = (big + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            auto& counts = partial[static_cast<std::size_t>(w)];
            sl2_enumerate_range(big, std::min(big, w * chunk), std::min(big, (w + 1) * chunk),
                                [&](const SL2Residue& m) { ++counts[key_for(conj_profile(m, n))]; });
        });
    }
    for (auto& t : pool) t.join();
    std::map<Key, long> counts;
    for (const auto& part : partial)
        for (const auto& [k, v] : part) counts[k] += v;

    // Every key with a closed form, so that missing classes show up as zero counts.
    const char* labels[] = {"1", "-1", "2^(l-1)+1", "2^(l-1)-1"};
    for (int s = 0; s <= n; ++s) counts.try_emplace(Key{0, 0, s}, 0);
    for (int l = 1; l < n; ++l) {
        for (int s = 2 * l; s <= l + n; ++s) counts.try_emplace(Key{l, 0, s}, 0);
        if (l >= 2) counts.try_emplace(Key{l, 1, -1}, 0);
        if (l >= 3) {
            counts.try_emplace(Key{l, 2, -1}, 0);
            counts.try_emplace(Key{l, 3, -1}, 0);
        }
    }
    for (int r = 0; r < (n >= 3 ? 4 : 2); ++r) counts.try_emplace(Key{n, r, -1}, 0);

    std::vector<CensusRow> rows;
    for (const auto& [k, v] : counts) {
        const auto [l, xr, s] = k;
        CensusRow row;
        row.l = l;
        row.x_class = labels[xr];
        if (s >= 0) row.s = s;
        row.count = v;
        row.expected = class_count_formula(n, l, row.x_class, row.s);
        rows.push_back(row);
    }
    return rows;
}

std::string census_csv(int n, const std::vector<CensusRow>& rows)
{
    std::ostringstream os;
    os << "n,l,x_class,s,count,expected,match\n";
    for (const auto& r : rows) {
        os << n << "," << r.l << "," << r.x_class << "," << (r.s ? std::to_string(*r.s) : std::string("*")) << ","
           << r.count << "," << (r.expected ? std::to_string(*r.expected) : std::string()) << ","
           << (r.match() ? "true" : "false") << "\n";
    }
    return os.str();
}

long quadratic_closed_form(long A, long B, long C, long D, int n, bool even_cross)
{
    if (n < 1 || n > 10) throw ArgumentError("quadratic count: n must lie in 1..10");
    if (!even_cross) {
        if (((A * B * D) & 1) == 0) throw ArgumentError("odd-cross form requires A*B*D odd");
        return (C % 2 == 0) ? pow2(n - 1) : 3 * pow2(n - 1);
    }
    if ((A & 1) == 0 || (D & 1) == 0) throw ArgumentError("even-cross form requires A and D odd");
    const long delta = A * C - B * B;
    const long ad = A * D;
    if (n == 1) return 2;
    if (n == 2) {
        const long d4 = mod(delta, 4);
        if (d4 == 2 || d4 == 3) return 4;
        return mod(ad, 4) == 1 ? 8 : 0;
    }
    const long d8 = mod(delta, 8);
    const long ad8 = mod(ad, 8);
    if (d8 == 0) return ad8 == 1 ? pow2(n + 2) : 0;
    if (d8 == 2 || d8 == 4 || d8 == 6) return (ad8 == 1 || ad8 == mod(1 + delta, 8)) ? pow2(n + 1) : 0;
    if (d8 == 1 || d8 == 5) return (ad8 == 1 || ad8 == 5) ? pow2(n + 1) : 0;
    return pow2(n);
}

QuadraticCount count_quadratic_solutions(long A, long B, long C, long D, int n, bool even_cross)
{
    QuadraticCount out;
    out.expected = quadratic_closed_form(A, B, C, D, n, even_cross);
    const long q = pow2(n);
    const long cross = even_cross ? 2 * B : B;
    for (long x = 0; x < q; ++x)
        for (long y = 0; y < q; ++y) out.count += mod(A * x * x + cross * x * y + C * y * y - D, q) == 0;
    return out;
}

namespace {

SL2Residue rep_a0(int n, long tau, long c1)
{
    const long q = pow2(n);
    return SL2Residue::make(q, 1, mod_inverse(c1, q) * (tau - 2), c1, tau - 1);
}

// x = 1 representative with det(U1) = tau: the B_l pattern at x = 1, which has determinant 1.
SL2Residue rep_a(int n, int l, long tau, long c1)
{
    const long q = pow2(n);
    const long t = pow2(l);
    return SL2Residue::make(q, 1, -mod_inverse(c1, q) * t * tau, c1 * t, 1 - t * t * tau);
}

SL2Residue rep_b(int n, int l, long tau, long c1)
{
    const long q = pow2(n);
    const long t = pow2(l);
    const long u = 1 + t / 2;
    const long d = u - mod_inverse(u, q) * (t + t * t / 4 + t * t * tau);
    return SL2Residue::make(q, u, -mod_inverse(c1, q) * t * tau, t * c1, d);
}

}  // namespace

std::vector<ClassRep> class_representatives(int n)
{
    if (n < 2) throw ArgumentError("class_representatives: n must be at least 2");
    const long q = pow2(n);
    std::vector<ClassRep> reps;
    auto emit = [&reps](SL2Residue m, std::string family, int l, long tau, long c1, long size) {
        for (auto& r : reps)
            if (r.matrix == m) {
                r.m += size;
                return;
            }
        reps.push_back({m, std::move(family), l, tau, c1, size});
    };
    auto emit_a = [&](int l, long tau, std::initializer_list<long> c1s, long size) {
        for (long c1 : c1s) emit(rep_a(n, l, tau, c1), "A", l, tau, c1, size);
        if (l >= 2)
            for (long c1 : c1s) emit(-rep_a(n, l, tau, c1), "-A", l, tau, c1, size);
    };

    for (long tau = 0; tau < q; ++tau) {
        if (tau % 2 == 1) emit(rep_a0(n, tau, 1), "A0", 0, tau, 1, pow2(2 * n - 1));
        else if (tau % 4 == 2)
            for (long c1 : {1, 3, 5, 7}) emit(rep_a0(n, tau, c1), "A0", 0, tau, c1, 3 * pow2(2 * n - 4));
        else
            for (long c1 : {1, 3}) emit(rep_a0(n, tau, c1), "A0", 0, tau, c1, 3 * pow2(2 * n - 3));
    }
    for (int l = 1; l < n; ++l) {
        const long width = pow2(n - l);
        for (long tau = 0; tau < width; ++tau) {
            if (l == n - 1) {
                emit_a(l, tau, {1}, 3);
            } else if (l == n - 2) {
                if (tau % 4 <= 1) emit_a(l, tau, {1, 3}, 6);
                else emit_a(l, tau, {1}, 12);
            } else if (l == 1) {
                const long t8 = tau % 8;
                if (t8 == 1 || t8 == 0) emit_a(l, tau, {1, 3, 5, 7}, 3 * pow2(2 * n - 6));
                else if (t8 % 2 == 1) emit_a(l, tau, {1, tau}, 3 * pow2(2 * n - 5));
                else emit_a(l, tau, {1, 3}, 3 * pow2(2 * n - 5));
            } else {
                const long t8 = tau % 8;
                if (t8 == 1 || t8 == 4 || t8 == 5) emit_a(l, tau, {1, 3}, 3 * pow2(2 * n - 2 * l - 3));
                else if (t8 == 3 || t8 == 7) emit_a(l, tau, {1}, 3 * pow2(2 * n - 2 * l - 2));
                else if (t8 == 2) emit_a(l, tau, {1, 5}, 3 * pow2(2 * n - 2 * l - 3));
                else emit_a(l, tau, {1, 3, 5, 7}, 3 * pow2(2 * n - 2 * l - 4));
            }
        }
        if (l >= 3) {
            for (long tau = 0; tau < width; ++tau) {
                const long size = (tau % 2 == 1) ? pow2(2 * n - 2 * l - 1) : 3 * pow2(2 * n - 2 * l - 1);
                emit(rep_b(n, l, tau, 1), "B", l, tau, 1, size);
                emit(-rep_b(n, l, tau, 1), "-B", l, tau, 1, size);
            }
        }
    }
    std::vector<long> scalars;
    for (long x : {1L, q - 1, q / 2 + 1, q / 2 - 1})
        if (std::find(scalars.begin(), scalars.end(), x) == scalars.end()) scalars.push_back(x);
    for (long x : scalars) emit(SL2Residue::scalar(q, x), "scalar", n, 0, 1, 1);
    return reps;
}

}  // namespace weil
