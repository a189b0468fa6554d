#include "weil/modgroup.hpp"

#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "weil/errors.hpp"

namespace weil {

long mod(long a, long n)
{
    const long r = a % n;
    return r < 0 ? r + n : r;
}

long gcd_long(long a, long b) { return std::gcd(a, b); }

namespace {

// Returns g = gcd(a, b) and x, y with a x + b y = g.
long ext_gcd(long a, long b, long& x, long& y)
{
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return a >= 0 ? a : -a;
    }
    long x1 = 0, y1 = 0;
    const long g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

long floor_div(long a, long b)
{
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long symmetric(long a, long n)
{
    const long r = mod(a, n);
    return 2 * r > n ? r - n : r;
}

}  // namespace

long mod_inverse(long a, long n)
{
    long x = 0, y = 0;
    const long g = ext_gcd(mod(a, n), n, x, y);
    if (g != 1) throw ArgumentError("no inverse of " + std::to_string(a) + " mod " + std::to_string(n));
    return mod(x, n);
}

std::vector<std::pair<long, int>> factorize(long n)
{
    std::vector<std::pair<long, int>> out;
    for (long q = 2; q * q <= n; ++q) {
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        if (e > 0) out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<long> divisors(long n)
{
    std::vector<long> out;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

long divisor_count(long n) { return static_cast<long>(divisors(n).size()); }

SL2Residue SL2Residue::make(long modulus, long a, long b, long c, long d)
{
    if (modulus < 1) throw ArgumentError("modulus must be positive");
    SL2Residue m{modulus, mod(a, modulus), mod(b, modulus), mod(c, modulus), mod(d, modulus)};
    if (mod(m.a * m.d - m.b * m.c, modulus) != mod(1, modulus))
        throw ArgumentError("matrix " + m.to_string() + " does not have determinant 1");
    return m;
}

SL2Residue SL2Residue::identity(long modulus) { return make(modulus, 1, 0, 0, 1); }
SL2Residue SL2Residue::s_matrix(long modulus) { return make(modulus, 0, 1, -1, 0); }
SL2Residue SL2Residue::t_matrix(long modulus, long k) { return make(modulus, 1, k, 0, 1); }
SL2Residue SL2Residue::scalar(long modulus, long x) { return make(modulus, x, 0, 0, mod_inverse(x, modulus)); }

SL2Residue SL2Residue::operator*(const SL2Residue& r) const
{
    if (modulus != r.modulus) throw ArgumentError("SL2 product of different moduli");
    const long n = modulus;
    return {n, mod(a * r.a + b * r.c, n), mod(a * r.b + b * r.d, n), mod(c * r.a + d * r.c, n),
            mod(c * r.b + d * r.d, n)};
}

SL2Residue SL2Residue::inverse() const { return {modulus, d, mod(-b, modulus), mod(-c, modulus), a}; }

SL2Residue SL2Residue::operator-() const
{
    return {modulus, mod(-a, modulus), mod(-b, modulus), mod(-c, modulus), mod(-d, modulus)};
}

SL2Residue SL2Residue::reduce(long new_modulus) const
{
    if (modulus % new_modulus != 0) throw ArgumentError("reduction modulus must divide the modulus");
    return {new_modulus, mod(a, new_modulus), mod(b, new_modulus), mod(c, new_modulus), mod(d, new_modulus)};
}

std::string SL2Residue::to_string() const
{
    std::ostringstream os;
    os << "[[" << a << "," << b << "],[" << c << "," << d << "]] mod " << modulus;
    return os.str();
}

long sl2_order(long modulus)
{
    long order = modulus * modulus * modulus;
    for (const auto& [q, e] : factorize(modulus)) order = order / (q * q) * (q * q - 1);
    return order;
}

namespace {

void enumerate_range_impl(long n, long a_begin, long a_end, const std::function<void(const SL2Residue&)>& visit)
{
    for (long a = a_begin; a < a_end; ++a) {
        const long g = std::gcd(a, n);
        const long step = n / g;
        const long unit = g == n ? 0 : mod_inverse(a / g, step);
        for (long b = 0; b < n; ++b)
            for (long c = 0; c < n; ++c) {
                const long rhs = mod(1 + b * c, n);
                if (rhs % g != 0) continue;
                const long d0 = step == 1 ? 0 : mod((rhs / g) * unit, step);
                for (long t = 0; t < g; ++t) visit(SL2Residue{n, a, b, c, d0 + t * step});
            }
    }
}

}  // namespace

void sl2_enumerate(long modulus, const std::function<void(const SL2Residue&)>& visit, long bound)
{
    if (modulus < 1) throw ArgumentError("modulus must be positive");
    if (modulus > bound) throw ResourceError("SL2 enumeration modulus " + std::to_string(modulus) + " exceeds bound");
    enumerate_range_impl(modulus, 0, modulus, visit);
}

void sl2_enumerate_range(long modulus, long a_begin, long a_end, const std::function<void(const SL2Residue&)>& visit)
{
    enumerate_range_impl(modulus, a_begin, a_end, visit);
}

std::vector<SL2Residue> sl2_elements(long modulus, long bound)
{
    std::vector<SL2Residue> out;
    out.reserve(static_cast<std::size_t>(sl2_order(modulus)));
    sl2_enumerate(modulus, [&out](const SL2Residue& m) { out.push_back(m); }, bound);
    return out;
}

SL2Residue GeneratorWord::evaluate(long modulus) const
{
    SL2Residue m = SL2Residue::identity(modulus);
    const SL2Residue s = SL2Residue::s_matrix(modulus);
    for (const auto& t : tokens) {
        switch (t.kind) {
            case TokenKind::S: m = m * s; break;
            case TokenKind::SInv: m = m * s.inverse(); break;
            case TokenKind::T: m = m * SL2Residue::t_matrix(modulus, t.power); break;
        }
    }
    return m;
}

std::string GeneratorWord::to_string() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) os << " ";
        switch (tokens[i].kind) {
            case TokenKind::S: os << "S"; break;
            case TokenKind::SInv: os << "S^-1"; break;
            case TokenKind::T: os << "T^" << tokens[i].power; break;
        }
    }
    return os.str();
}

int GeneratorWord::s_count() const
{
    int k = 0;
    for (const auto& t : tokens) k += t.kind != TokenKind::T;
    return k;
}

namespace {

void push_t(std::vector<Token>& tokens, long k, long n)
{
    const long r = mod(k, n);
    if (r != 0) tokens.push_back({TokenKind::T, r});
}

}  // namespace

GeneratorWord word_decompose(const SL2Residue& m)
{
    const long n = m.modulus;
    if (n == 1) return {};
    // Integer lift of the first column with coprime entries.
    const long a0 = symmetric(m.a, n);
    const long c0 = symmetric(m.c, n);
    long a1 = 0, c1 = 0;
    bool found = false;
    for (long radius = 0; !found; ++radius) {
        for (long i = -radius; i <= radius && !found; ++i)
            for (long j = -radius; j <= radius && !found; ++j) {
                if (std::max(std::labs(i), std::labs(j)) != radius) continue;
                if (std::gcd(a0 + i * n, c0 + j * n) == 1) {
                    a1 = a0 + i * n;
                    c1 = c0 + j * n;
                    found = true;
                }
            }
    }
    long x = 0, y = 0;
    ext_gcd(a1, c1, x, y);
    long b1 = -y, d1 = x;  // a1 d1 - b1 c1 = 1
    // Correct by an upper unipotent factor so the lift reduces to m.
    const SL2Residue base = SL2Residue::make(n, a1, b1, c1, d1);
    const SL2Residue u = base.inverse() * m;
    b1 += u.b * a1;
    d1 += u.b * c1;

    std::vector<Token> tokens;
    long a = a1, b = b1, c = c1, d = d1;
    while (c != 0) {
        const long q = floor_div(a, c);
        push_t(tokens, q, n);
        a -= q * c;
        b -= q * d;
        // current = S * (S^-1 current)
        tokens.push_back({TokenKind::S, 1});
        const long na = -c, nb = -d, nc = a, nd = b;
        a = na;
        b = nb;
        c = nc;
        d = nd;
    }
    if (a == -1) {
        tokens.push_back({TokenKind::S, 1});
        tokens.push_back({TokenKind::S, 1});
        b = -b;
    }
    push_t(tokens, b, n);
    GeneratorWord w{std::move(tokens)};
    if (!(w.evaluate(n) == m)) throw DefectError("word_decompose failed for " + m.to_string());
    return w;
}

GeneratorWord word_decompose_shifted(const SL2Residue& m, long shift)
{
    const long n = m.modulus;
    GeneratorWord w = word_decompose(m * SL2Residue::t_matrix(n, shift));
    push_t(w.tokens, -shift, n);
    return w;
}

GeneratorWord bruhat_word(const SL2Residue& m)
{
    const long n = m.modulus;
    if (n == 1) return {};
    if (std::gcd(m.c, n) == 1) {
        // [[1,x],[0,1]] [[1,0],[c,1]] [[1,y],[0,1]] with [[1,0],[c,1]] = S^-1 T^-c S.
        const long ci = mod_inverse(m.c, n);
        std::vector<Token> tokens;
        push_t(tokens, (m.a - 1) * ci, n);
        tokens.push_back({TokenKind::SInv, 1});
        push_t(tokens, -m.c, n);
        tokens.push_back({TokenKind::S, 1});
        push_t(tokens, (m.d - 1) * ci, n);
        GeneratorWord w{std::move(tokens)};
        if (!(w.evaluate(n) == m)) throw DefectError("bruhat_word failed for " + m.to_string());
        return w;
    }
    for (long k = 1; k < n; ++k) {
        if (std::gcd(mod(m.c + k * m.a, n), n) != 1) continue;
        // m = [[1,0],[-k,1]] m' with m' = [[1,0],[k,1]] m; [[1,0],[-k,1]] = S^-1 T^k S.
        const SL2Residue lower = SL2Residue::make(n, 1, 0, k, 1);
        GeneratorWord tail = bruhat_word(lower * m);
        std::vector<Token> tokens;
        tokens.push_back({TokenKind::SInv, 1});
        push_t(tokens, k, n);
        tokens.push_back({TokenKind::S, 1});
        tokens.insert(tokens.end(), tail.tokens.begin(), tail.tokens.end());
        GeneratorWord w{std::move(tokens)};
        if (!(w.evaluate(n) == m)) throw DefectError("bruhat_word failed for " + m.to_string());
        return w;
    }
    return word_decompose(m);
}

namespace {

std::uint64_t key_of(const SL2Residue& m)
{
    const auto n = static_cast<std::uint64_t>(m.modulus);
    return ((static_cast<std::uint64_t>(m.a) * n + static_cast<std::uint64_t>(m.b)) * n +
            static_cast<std::uint64_t>(m.c)) * n + static_cast<std::uint64_t>(m.d);
}

// Conjugacy class of m by closure under conjugation with S and T.
std::vector<SL2Residue> class_closure(const SL2Residue& m)
{
    const long n = m.modulus;
    const SL2Residue gens[2] = {SL2Residue::s_matrix(n), SL2Residue::t_matrix(n, 1)};
    std::unordered_set<std::uint64_t> seen{key_of(m)};
    std::vector<SL2Residue> out{m};
    for (std::size_t head = 0; head < out.size(); ++head)
        for (const auto& g : gens) {
            const SL2Residue next = conjugate(g, out[head]);
            if (seen.insert(key_of(next)).second) out.push_back(next);
        }
    return out;
}

struct PrimePowerClass {
    SL2Residue rep;
    long size;
};

std::vector<PrimePowerClass> prime_power_classes(long q)
{
    if (q > 64) throw ResourceError("conjugacy classes: prime-power factor " + std::to_string(q) + " too large");
    std::unordered_set<std::uint64_t> done;
    std::vector<PrimePowerClass> out;
    sl2_enumerate(q, [&](const SL2Residue& m) {
        if (done.count(key_of(m))) return;
        const auto cls = class_closure(m);
        std::optional<SL2Residue> best;
        for (const auto& e : cls) {
            done.insert(key_of(e));
            if (std::gcd(e.c, q) == 1 && (!best || key_of(e) < key_of(*best))) best = e;
        }
        out.push_back({best ? *best : m, static_cast<long>(cls.size())});
    }, q);
    return out;
}

long crt_combine(long r1, long m1, long r2, long m2)
{
    // x = r1 mod m1, x = r2 mod m2, coprime moduli.
    const long inv = mod_inverse(m1, m2);
    return mod(r1 + m1 * mod((r2 - r1) * inv, m2), m1 * m2);
}

}  // namespace

long class_size_bruteforce(const SL2Residue& m)
{
    if (m.modulus > 8) throw ResourceError("class_size_bruteforce: modulus above 8");
    return static_cast<long>(class_closure(m).size());
}

long hensel_lift_count(const SL2Residue& m)
{
    const long n = m.modulus;
    if (n < 2 || (n & (n - 1)) != 0) throw ArgumentError("hensel_lift_count: modulus must be a power of two");
    const long big = 2 * n;
    if (big > kDefaultEnumerationBound * 1024) throw ResourceError("hensel_lift_count: modulus too large");
    long count = 0;
    for (int mask = 0; mask < 16; ++mask) {
        const long a = m.a + ((mask & 1) ? n : 0);
        const long b = m.b + ((mask & 2) ? n : 0);
        const long c = m.c + ((mask & 4) ? n : 0);
        const long d = m.d + ((mask & 8) ? n : 0);
        count += mod(a * d - b * c, big) == 1;
    }
    return count;
}

std::vector<ConjugacyClass> conjugacy_classes(long modulus)
{
    std::vector<ConjugacyClass> classes{{SL2Residue::identity(1), 1}};
    long built = 1;
    for (const auto& [r, e] : factorize(modulus)) {
        long q = 1;
        for (int i = 0; i < e; ++i) q *= r;
        const auto local = prime_power_classes(q);
        std::vector<ConjugacyClass> next;
        next.reserve(classes.size() * local.size());
        for (const auto& g : classes)
            for (const auto& h : local) {
                const auto& x = g.representative;
                const auto& y = h.rep;
                SL2Residue m{built * q, crt_combine(x.a, built, y.a, q), crt_combine(x.b, built, y.b, q),
                             crt_combine(x.c, built, y.c, q), crt_combine(x.d, built, y.d, q)};
                next.push_back({m, g.size * h.size});
            }
        classes = std::move(next);
        built *= q;
    }
    if (modulus == 1) classes.front().representative = SL2Residue::identity(1);
    return classes;
}

SpMatrix SpMatrix::identity(int genus, long modulus)
{
    SpMatrix m{genus, modulus, std::vector<long>(static_cast<std::size_t>(4 * genus * genus), 0)};
    for (int i = 0; i < 2 * genus; ++i) m.at(i, i) = mod(1, modulus);
    return m;
}

std::vector<long> SpMatrix::apply(const std::vector<long>& v) const
{
    const int dim = 2 * genus;
    std::vector<long> out(static_cast<std::size_t>(dim), 0);
    for (int i = 0; i < dim; ++i) {
        long acc = 0;
        for (int j = 0; j < dim; ++j) acc += at(i, j) * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = mod(acc, modulus);
    }
    return out;
}

SpMatrix SpMatrix::operator*(const SpMatrix& rhs) const
{
    const int dim = 2 * genus;
    SpMatrix out{genus, modulus, std::vector<long>(entries.size(), 0)};
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            long acc = 0;
            for (int k = 0; k < dim; ++k) acc += at(i, k) * rhs.at(k, j);
            out.at(i, j) = mod(acc, modulus);
        }
    return out;
}

long symplectic_form(const std::vector<long>& u, const std::vector<long>& v, long modulus)
{
    long acc = 0;
    for (std::size_t i = 0; i + 1 < u.size(); i += 2) acc += u[i + 1] * v[i] - u[i] * v[i + 1];
    return mod(acc, modulus);
}

bool SpMatrix::preserves_form() const
{
    const int dim = 2 * genus;
    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
            std::vector<long> ek(static_cast<std::size_t>(dim), 0), el(static_cast<std::size_t>(dim), 0);
            ek[static_cast<std::size_t>(k)] = 1;
            el[static_cast<std::size_t>(l)] = 1;
            if (symplectic_form(apply(ek), apply(el), modulus) != symplectic_form(ek, el, modulus)) return false;
        }
    return true;
}

std::vector<long> lattice_x(int genus, int i)
{
    std::vector<long> v(static_cast<std::size_t>(2 * genus), 0);
    v[static_cast<std::size_t>(2 * i + 1)] = 1;
    return v;
}

std::vector<long> lattice_y(int genus, int i)
{
    std::vector<long> v(static_cast<std::size_t>(2 * genus), 0);
    v[static_cast<std::size_t>(2 * i)] = 1;
    return v;
}

namespace {

SpMatrix transvection(const std::vector<long>& gamma, int genus, long modulus)
{
    const int dim = 2 * genus;
    SpMatrix m{genus, modulus, std::vector<long>(static_cast<std::size_t>(dim * dim), 0)};
    for (int k = 0; k < dim; ++k) {
        std::vector<long> ek(static_cast<std::size_t>(dim), 0);
        ek[static_cast<std::size_t>(k)] = 1;
        const long w = symplectic_form(ek, gamma, modulus);
        for (int i = 0; i < dim; ++i)
            m.at(i, k) = mod(ek[static_cast<std::size_t>(i)] + w * gamma[static_cast<std::size_t>(i)], modulus);
    }
    return m;
}

}  // namespace

std::vector<SpMatrix> sp_generators(int genus, long modulus)
{
    if (genus < 1) throw ArgumentError("sp_generators: genus must be at least 1");
    std::vector<SpMatrix> out;
    for (int i = 0; i < genus; ++i) {
        out.push_back(transvection(lattice_x(genus, i), genus, modulus));
        out.push_back(transvection(lattice_y(genus, i), genus, modulus));
    }
    for (int i = 0; i < genus; ++i)
        for (int j = i + 1; j < genus; ++j) {
            auto gamma = lattice_x(genus, i);
            gamma[static_cast<std::size_t>(2 * j + 1)] = -1;
            out.push_back(transvection(gamma, genus, modulus));
        }
    return out;
}

long group_closure_order(const std::vector<SpMatrix>& gens, long limit)
{
    if (gens.empty()) return 1;
    const SpMatrix id = SpMatrix::identity(gens.front().genus, gens.front().modulus);
    std::set<std::vector<long>> seen{id.entries};
    std::deque<SpMatrix> queue{id};
    while (!queue.empty()) {
        const SpMatrix cur = queue.front();
        queue.pop_front();
        for (const auto& g : gens) {
            SpMatrix next = cur * g;
            if (seen.insert(next.entries).second) {
                if (static_cast<long>(seen.size()) > limit) throw ResourceError("group closure exceeds limit");
                queue.push_back(std::move(next));
            }
        }
    }
    return static_cast<long>(seen.size());
}

std::vector<std::vector<long>> orbit(const std::vector<long>& start, const std::vector<SpMatrix>& gens)
{
    std::set<std::vector<long>> seen{start};
    std::vector<std::vector<long>> out{start};
    for (std::size_t head = 0; head < out.size(); ++head)
        for (const auto& g : gens) {
            auto next = g.apply(out[head]);
            if (seen.insert(next).second) out.push_back(std::move(next));
        }
    return out;
}

OrbitCensus orbit_census(long modulus, int genus)
{
    const int dim = 2 * genus;
    long total = 1;
    for (int i = 0; i < dim; ++i) {
        total *= modulus;
        if (total > 1000000) throw ResourceError("orbit_census: N^(2g) exceeds 10^6");
    }
    const auto gens = sp_generators(genus, modulus);
    auto encode = [&](const std::vector<long>& v) {
        long k = 0;
        for (long x : v) k = k * modulus + x;
        return k;
    };
    auto decode = [&](long k) {
        std::vector<long> v(static_cast<std::size_t>(dim));
        for (int i = dim - 1; i >= 0; --i) {
            v[static_cast<std::size_t>(i)] = k % modulus;
            k /= modulus;
        }
        return v;
    };
    std::vector<int> label(static_cast<std::size_t>(total), -1);
    OrbitCensus result;
    result.expected = divisor_count(modulus);
    for (long start = 0; start < total; ++start) {
        if (label[static_cast<std::size_t>(start)] >= 0) continue;
        const int id = static_cast<int>(result.count++);
        std::vector<long> queue{start};
        label[static_cast<std::size_t>(start)] = id;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto v = decode(queue[head]);
            for (const auto& g : gens) {
                const long k = encode(g.apply(v));
                if (label[static_cast<std::size_t>(k)] < 0) {
                    label[static_cast<std::size_t>(k)] = id;
                    queue.push_back(k);
                }
            }
        }
        result.sizes.push_back(static_cast<long>(queue.size()));
    }
    // Locate the diagonal representative (0, d, ..., 0, d) of each orbit.
    std::vector<long> delta_of(static_cast<std::size_t>(result.count), -1);
    bool ok = true;
    for (long d : divisors(modulus)) {
        std::vector<long> v(static_cast<std::size_t>(dim), 0);
        for (int i = 0; i < genus; ++i) v[static_cast<std::size_t>(2 * i + 1)] = d % modulus;
        const int id = label[static_cast<std::size_t>(encode(v))];
        if (delta_of[static_cast<std::size_t>(id)] >= 0) ok = false;
        delta_of[static_cast<std::size_t>(id)] = d;
    }
    for (long id = 0; id < result.count; ++id) {
        const long d = delta_of[static_cast<std::size_t>(id)];
        if (d < 0) {
            ok = false;
            continue;
        }
        std::vector<long> v(static_cast<std::size_t>(dim), 0);
        for (int i = 0; i < genus; ++i) v[static_cast<std::size_t>(2 * i + 1)] = d % modulus;
        result.representatives.push_back(v);
        result.deltas.push_back(d);
    }
    result.representatives_ok = ok;
    return result;
}

}  // namespace weil
