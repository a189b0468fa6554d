#include "weil/decompose.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <json.hpp>

#include "weil/errors.hpp"
#include "weil/modgroup.hpp"

namespace weil {

namespace {

long ipow(long base, int exp)
{
    long out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

// Index of the multi-index -a.
long negated_index(const WeilRep& rep, long idx)
{
    auto ds = rep.digits(idx);
    for (auto& d : ds) d = mod(-d, rep.level());
    return rep.index(ds);
}

bool stable_under(const RingMatrix& m, const RingMatrix& span)
{
    if (span.cols() == 0) return true;
    return restrict_to_span(m, span).has_value();
}

void set_unit(RingMatrix& m, long row, long col, long value, const FieldPtr& field)
{
    m(row, col) = CycloElt(field, mpq_class(value));
}

}  // namespace

std::pair<long, long> parity_dimensions(int level, int genus)
{
    const long n = ipow(level, genus);
    long fixed = 0;
    for (long idx = 0; idx < n; ++idx) {
        long rem = idx;
        bool self = true;
        for (int k = 0; k < genus; ++k) {
            const long d = rem % level;
            rem /= level;
            if (mod(-d, level) != d) self = false;
        }
        if (self) ++fixed;
    }
    return {(n + fixed) / 2, (n - fixed) / 2};
}

ParityBases parity_bases(int level, int genus, bool verify)
{
    const WeilRep rep(level, genus);
    const auto [dplus, dminus] = parity_dimensions(level, genus);
    ParityBases out{zeros(rep.dim(), dplus, rep.field()), zeros(rep.dim(), dminus, rep.field())};
    long cp = 0, cm = 0;
    for (long idx = 0; idx < rep.dim(); ++idx) {
        const long neg = negated_index(rep, idx);
        if (neg < idx) continue;
        set_unit(out.plus, idx, cp, 1, rep.field());
        if (neg != idx) {
            set_unit(out.plus, neg, cp, 1, rep.field());
            set_unit(out.minus, idx, cm, 1, rep.field());
            set_unit(out.minus, neg, cm, -1, rep.field());
            ++cm;
        }
        ++cp;
    }
    if (verify)
        for (const auto& tag : rep.tags()) {
            const auto& g = rep.generator(tag);
            if (!stable_under(g, out.plus) || !stable_under(g, out.minus))
                throw DefectError("parity part not stable under " + tag.name());
        }
    return out;
}

bool CrtData::pass() const
{
    return pairing_bijective && !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

CrtData crt_check(int a, int b, int genus)
{
    if (a < 2 || b < 2) throw ArgumentError("crt_check: levels must be at least 2");
    if (b % 2 == 0) throw ArgumentError("crt_check: b must be odd");
    if (std::gcd(a, b) != 1) throw ArgumentError("crt_check: levels must be coprime");
    const bool even = a % 2 == 0;
    const long ab = static_cast<long>(a) * b;

    CrtData data;
    data.a = a;
    data.b = b;
    data.genus = genus;
    // a' u + b v = 1 with a' = a (odd a) or 2a (even a).
    const long a_eff = even ? 2L * a : a;
    data.u = mod_inverse(a_eff, b);
    data.v = (1 - a_eff * data.u) / b;
    const long ycoef = mod(a_eff * data.u, ab);
    const long xcoef = mod(data.v * b, ab);
    data.pairing.resize(static_cast<std::size_t>(ab));
    std::set<long> seen;
    for (long x = 0; x < a; ++x)
        for (long y = 0; y < b; ++y) {
            const long f = mod(x * xcoef + y * ycoef, ab);
            data.pairing[static_cast<std::size_t>(x * b + y)] = f;
            seen.insert(f);
        }
    data.pairing_bijective = static_cast<long>(seen.size()) == ab;
    data.note = "pairing f(x, y) = x*v*b + y*a'*u with a' = a (odd) or 2a (even)";

    const WeilRep big(static_cast<int>(ab), genus);
    const long step = big.zeta_step();
    const WeilRep rep_a(a, genus, big.field(), step * data.v * b);
    const WeilRep rep_b(b, genus, big.field(), step * a_eff * data.u);

    const long da = rep_a.dim(), db = rep_b.dim();
    data.psi.resize(static_cast<std::size_t>(da * db));
    for (long ia = 0; ia < da; ++ia)
        for (long ib = 0; ib < db; ++ib) {
            const auto xs = rep_a.digits(ia);
            const auto ys = rep_b.digits(ib);
            std::vector<long> fs(xs.size());
            for (std::size_t k = 0; k < xs.size(); ++k) fs[k] = data.f(xs[k], ys[k]);
            data.psi[static_cast<std::size_t>(ia * db + ib)] = big.index(fs);
        }

    for (const auto& tag : big.tags()) {
        const RingMatrix k = kron(rep_a.generator(tag), rep_b.generator(tag));
        const RingMatrix& target = big.generator(tag);
        bool ok = true;
        for (long i = 0; i < k.rows() && ok; ++i)
            for (long j = 0; j < k.cols() && ok; ++j)
                ok = target(data.psi[static_cast<std::size_t>(i)], data.psi[static_cast<std::size_t>(j)]) == k(i, j);
        data.checks.push_back({tag.name(), ok});
    }
    return data;
}

bool TowerData::pass() const
{
    auto all = [](const std::vector<GeneratorCheck>& cs) {
        return !cs.empty() && std::all_of(cs.begin(), cs.end(), [](const auto& c) { return c.pass; });
    };
    return independent && orthogonal && all(restriction_checks) && all(complement_checks);
}

TowerData tower_check(int r, int n, int genus)
{
    if (r < 2 || factorize(r).size() != 1 || factorize(r).front().second != 1) throw ArgumentError("tower_check: r must be prime");
    if (n < 0 || (r == 2 && n < 1)) throw ArgumentError("tower_check: exponent out of range");
    const long big_level = ipow(r, n + 2);
    const long small_level = ipow(r, n);
    if (ipow(big_level, genus) > 256) throw ResourceError("tower_check: module too large");

    const WeilRep big(static_cast<int>(big_level), genus);
    const FieldPtr& field = big.field();

    // One handle: the g-vectors, then the complement vectors.
    RingMatrix g1 = zeros(big_level, small_level, field);
    for (long i = 0; i < small_level; ++i)
        for (long k = 0; k < r; ++k) set_unit(g1, mod(r * (i + k * small_level), big_level), i, 1, field);
    RingMatrix w1m = zeros(big_level, big_level - small_level, field);
    long wc = 0;
    for (long i = 0; i < big_level; ++i)
        if (i % r != 0) set_unit(w1m, i, wc++, 1, field);
    for (long i = 0; i < small_level; ++i)
        for (long k = 1; k < r; ++k) {
            set_unit(w1m, r * i, wc, 1, field);
            set_unit(w1m, mod(r * (i + k * small_level), big_level), wc, -1, field);
            ++wc;
        }

    TowerData data;
    data.r = r;
    data.n = n;
    data.genus = genus;

    // Tensor products across handles; complement columns need at least one w factor.
    const long gcount = ipow(small_level, genus);
    const long total = big.dim();
    data.gvecs = zeros(total, gcount, field);
    data.wbasis = zeros(total, total - gcount, field);
    const long per = big_level;  // basis vectors per handle: small_level g's then the w's
    long gcol = 0, wcol = 0;
    for (long combo = 0; combo < ipow(per, genus); ++combo) {
        std::vector<long> pick(static_cast<std::size_t>(genus));
        long rem = combo;
        for (int h = genus - 1; h >= 0; --h) {
            pick[static_cast<std::size_t>(h)] = rem % per;
            rem /= per;
        }
        bool any_w = false;
        RingMatrix col = zeros(1, 1, field);
        col(0, 0) = CycloElt(field, mpq_class(1));
        for (long choice : pick) {
            const bool is_w = choice >= small_level;
            any_w = any_w || is_w;
            const RingMatrix factor = is_w ? RingMatrix(w1m.col(choice - small_level)) : RingMatrix(g1.col(choice));
            col = kron(col, factor);
        }
        if (any_w)
            data.wbasis.col(wcol++) = col.col(0);
        else
            data.gvecs.col(gcol++) = col.col(0);
    }

    data.independent = rank(data.gvecs) == gcount && rank(data.wbasis) == total - gcount;
    data.orthogonal = is_zero_matrix(matmul(RingMatrix(data.gvecs.transpose()), data.wbasis));

    const bool trivial = small_level == 1;
    std::optional<WeilRep> small;
    if (!trivial) small.emplace(static_cast<int>(small_level), genus, field, big.zeta_step() * r * r);
    for (const auto& tag : big.tags()) {
        const auto& g = big.generator(tag);
        const auto restricted = restrict_to_span(g, data.gvecs);
        bool ok = restricted.has_value();
        if (ok) ok = trivial ? is_identity(*restricted) : equal(*restricted, small->generator(tag));
        data.restriction_checks.push_back({tag.name(), ok});
        data.complement_checks.push_back({tag.name(), stable_under(g, data.wbasis)});
    }
    return data;
}

long TensorFactor::dim() const
{
    long d = 1;
    for (const auto& f : tensor) d *= f.dim;
    return d;
}

int TensorFactor::minus_count() const
{
    return static_cast<int>(std::count_if(tensor.begin(), tensor.end(), [](const auto& f) { return f.parity == "-"; }));
}

long DecompositionTree::total_dim() const
{
    long d = 0;
    for (const auto& f : factors) d += f.dim();
    return d;
}

std::string DecompositionTree::to_json() const
{
    nlohmann::ordered_json j;
    j["level"] = level;
    j["genus"] = genus;
    j["factor_count"] = factors.size();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : factors) {
        auto t = nlohmann::ordered_json::array();
        for (const auto& l : f.tensor) {
            nlohmann::ordered_json e;
            e["kind"] = l.kind;
            e["prime_power"] = l.prime_power;
            e["parity"] = l.parity;
            e["dim"] = l.dim;
            t.push_back(e);
        }
        nlohmann::ordered_json entry;
        entry["tensor"] = t;
        arr.push_back(entry);
    }
    j["factors"] = arr;
    return j.dump(2);
}

long sigma(long n)
{
    long count = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) ++count;
    return count;
}

long expected_factor_count(int level) { return level % 2 == 0 ? sigma(level / 2) : sigma(level); }

namespace {

// Irreducible pieces of U_{r^n} at genus g.
std::vector<FactorLabel> prime_power_leaves(long r, int n, int g)
{
    std::vector<FactorLabel> out;
    int k = n;
    const int floor_k = r == 2 ? 3 : 2;
    while (k >= floor_k) {
        const long q = ipow(r, k);
        const long half = (ipow(q, g) - ipow(q / (r * r), g)) / 2;
        out.push_back({"W", q, "+", g, half});
        out.push_back({"W", q, "-", g, half});
        k -= 2;
    }
    const long q = ipow(r, k);
    if (r == 2) {
        if (k == 2) {
            const long fixed = ipow(2, g);
            out.push_back({"U", 4, "+", g, (ipow(4, g) + fixed) / 2});
            out.push_back({"U", 4, "-", g, (ipow(4, g) - fixed) / 2});
        } else {
            out.push_back({"U", 2, "none", g, ipow(2, g)});
        }
    } else if (k == 1) {
        out.push_back({"U", q, "+", g, (ipow(q, g) + 1) / 2});
        out.push_back({"U", q, "-", g, (ipow(q, g) - 1) / 2});
    } else {
        out.push_back({"trivial", 1, "+", g, 1});
    }
    return out;
}

}  // namespace

DecompositionTree decomposition_tree(int level, int genus)
{
    if (level < 2) throw ArgumentError("level must be at least 2");
    DecompositionTree tree;
    tree.level = level;
    tree.genus = genus;
    tree.factors.push_back(TensorFactor{});
    for (const auto& [r, n] : factorize(level)) {
        std::vector<TensorFactor> next;
        for (const auto& partial : tree.factors)
            for (const auto& leaf : prime_power_leaves(r, n, genus)) {
                TensorFactor t = partial;
                t.tensor.push_back(leaf);
                next.push_back(std::move(t));
            }
        tree.factors = std::move(next);
    }
    return tree;
}

int commutant_dimension(int level, int genus)
{
    if (ipow(level, 2 * genus) > 256) throw ResourceError("commutant_dimension: p^{2g} exceeds 256");
    const WeilRep rep(level, genus);
    return solve_commutant(rep.generator_list()).dimension;
}

bool OmegaFamily::all_commute() const
{
    return std::all_of(operators.begin(), operators.end(), [](const auto& o) { return o.commutes; });
}

namespace {

OmegaOperator build_omega(const WeilRep& rep, long delta)
{
    const int g = rep.genus();
    const long n = lattice_modulus(rep.level());
    if (ipow(n, 2 * g) > 1'000'000) throw ResourceError("omega: lattice too large");
    std::vector<long> start(static_cast<std::size_t>(2 * g), 0);
    for (int i = 0; i < g; ++i) start[static_cast<std::size_t>(2 * i + 1)] = mod(delta, n);
    const auto pts = orbit(start, sp_generators(g, n));
    OmegaOperator out;
    out.delta = delta;
    out.orbit_size = static_cast<long>(pts.size());
    out.matrix = zeros(rep.dim(), rep.dim(), rep.field());
    for (const auto& h : pts) out.matrix = add(out.matrix, weyl_operator(rep, HeisenbergElt{h, 0}));
    out.commutes = true;
    for (const auto& gen : rep.generator_list()) out.commutes = out.commutes && commutes(out.matrix, gen);
    return out;
}

}  // namespace

OmegaOperator omega_projector(long delta, int level, int genus)
{
    if (delta < 1 || level % delta != 0) throw ArgumentError("omega: delta must divide the level");
    return build_omega(WeilRep(level, genus), delta);
}

OmegaFamily omega_family(int level, int genus)
{
    const WeilRep rep(level, genus);
    OmegaFamily fam;
    fam.level = level;
    fam.genus = genus;
    fam.lattice_modulus = lattice_modulus(level);
    fam.expected = sigma(level);
    for (long d : divisors(level)) fam.operators.push_back(build_omega(rep, d));
    const long n2 = rep.dim() * rep.dim();
    RingMatrix stacked = zeros(n2, static_cast<long>(fam.operators.size()), rep.field());
    for (std::size_t k = 0; k < fam.operators.size(); ++k)
        for (long u = 0; u < n2; ++u)
            stacked(u, static_cast<long>(k)) = fam.operators[k].matrix(u / rep.dim(), u % rep.dim());
    fam.rank = rank(stacked);
    if (ipow(level, 2 * genus) <= 256) fam.commutant_dim = solve_commutant(rep.generator_list()).dimension;
    return fam;
}

OddPartAudit su2_so3_labels(int level, bool verify_parity)
{
    OddPartAudit audit;
    audit.level = level;
    for (const auto& f : decomposition_tree(level, 1).factors)
        if (f.minus_count() % 2 == 1) {
            audit.summands.push_back(f);
            audit.total_dim += f.dim();
        }
    audit.minus_dim = verify_parity ? parity_bases(level, 1, true).minus.cols() : parity_dimensions(level, 1).second;
    return audit;
}

}  // namespace weil
