#include "weil/weilrep.hpp"

#include <numeric>

#include "weil/errors.hpp"

namespace weil {

int field_order(int level)
{
    if (level < 1) throw ArgumentError("level must be positive");
    return std::lcm(2 * level, 24);
}

long root_order(int level) { return level % 2 == 0 ? 2L * level : level; }

long lattice_modulus(int level) { return root_order(level); }

std::string GenTag::name() const
{
    switch (kind) {
        case GenKind::X: return "X" + std::to_string(i + 1);
        case GenKind::Y: return "Y" + std::to_string(i + 1);
        case GenKind::Z: return "Z" + std::to_string(i + 1) + std::to_string(j + 1);
    }
    return {};
}

WeilRep::WeilRep(int level, int genus)
    : WeilRep(level, genus, make_field(field_order(level)), field_order(level) / weil::root_order(level))
{
}

WeilRep::WeilRep(int level, int genus, FieldPtr field, long zeta_step)
    : level_(level), genus_(genus), dim_(1), root_order_(weil::root_order(level)), field_(std::move(field)), step_(zeta_step)
{
    if (level < 2) throw ArgumentError("level must be at least 2");
    if (genus < 1) throw ArgumentError("genus must be at least 1");
    const long order = field_->order();
    if (order / std::gcd(order, mod(step_, order)) != root_order_)
        throw ArgumentError("substituted root has the wrong multiplicative order");
    for (int i = 0; i < genus; ++i) {
        if (dim_ > (1L << 20) / level) throw ResourceError("representation dimension too large");
        dim_ *= level;
    }
    powers_.reserve(static_cast<std::size_t>(root_order_));
    for (long e = 0; e < root_order_; ++e) powers_.push_back(root_of_unity(field_, e * step_));
    build();
}

const CycloElt& WeilRep::a_pow(long e) const { return powers_[static_cast<std::size_t>(mod(e, root_order_))]; }

CycloElt WeilRep::beta() const
{
    if (field_->order() % 24 != 0) throw ArgumentError("field does not contain a 24th root of unity");
    return root_of_unity(field_, field_->order() / 24);
}

CycloElt WeilRep::gauss_sum(long a, long b) const
{
    std::vector<long> counts(static_cast<std::size_t>(root_order_), 0);
    for (long k = 0; k < root_order_; ++k) ++counts[static_cast<std::size_t>(mod(a * k * k + b * k, root_order_))];
    CycloElt sum(field_, mpq_class(0));
    for (long e = 0; e < root_order_; ++e)
        if (counts[static_cast<std::size_t>(e)] != 0) sum += CycloElt(counts[static_cast<std::size_t>(e)]) * a_pow(e);
    return sum;
}

std::vector<long> WeilRep::digits(long idx) const
{
    std::vector<long> out(static_cast<std::size_t>(genus_));
    for (int i = genus_ - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = idx % level_;
        idx /= level_;
    }
    return out;
}

long WeilRep::index(const std::vector<long>& ds) const
{
    long idx = 0;
    for (long d : ds) idx = idx * level_ + mod(d, level_);
    return idx;
}

RingMatrix WeilRep::identity() const { return weil::identity(dim_, field_); }

void WeilRep::build()
{
    const long p = level_;
    RingMatrix x1 = zeros(p, p, field_);
    RingMatrix y1 = zeros(p, p, field_);
    const CycloElt c = gauss_sum(1, 0) / CycloElt(root_order_);
    for (long i = 0; i < p; ++i) {
        x1(i, i) = a_pow(i * i);
        for (long j = 0; j < p; ++j) y1(i, j) = c * a_pow(-(i - j) * (i - j));
    }
    auto embed = [&](const RingMatrix& handle, int i) {
        long before = 1, after = 1;
        for (int k = 0; k < i; ++k) before *= p;
        for (int k = i + 1; k < genus_; ++k) after *= p;
        return kron(kron(weil::identity(before, field_), handle), weil::identity(after, field_));
    };
    for (int i = 0; i < genus_; ++i) {
        xs_.push_back(embed(x1, i));
        ys_.push_back(embed(y1, i));
    }
    zs_.assign(static_cast<std::size_t>(genus_ * genus_), RingMatrix());
    for (int i = 0; i < genus_; ++i)
        for (int j = 0; j < genus_; ++j) {
            if (i == j) continue;
            RingMatrix zm = zeros(dim_, dim_, field_);
            for (long idx = 0; idx < dim_; ++idx) {
                const auto ds = digits(idx);
                const long diff = ds[static_cast<std::size_t>(i)] - ds[static_cast<std::size_t>(j)];
                zm(idx, idx) = a_pow(diff * diff);
            }
            zs_[static_cast<std::size_t>(i * genus_ + j)] = std::move(zm);
        }
}

const RingMatrix& WeilRep::x(int i) const
{
    if (i < 0 || i >= genus_) throw IndexError("handle index out of range");
    return xs_[static_cast<std::size_t>(i)];
}

const RingMatrix& WeilRep::y(int i) const
{
    if (i < 0 || i >= genus_) throw IndexError("handle index out of range");
    return ys_[static_cast<std::size_t>(i)];
}

const RingMatrix& WeilRep::z(int i, int j) const
{
    if (genus_ < 2) throw IndexError("Z generators need genus at least 2");
    if (i < 0 || j < 0 || i >= genus_ || j >= genus_ || i == j) throw IndexError("Z index out of range");
    return zs_[static_cast<std::size_t>(i * genus_ + j)];
}

const RingMatrix& WeilRep::generator(const GenTag& tag) const
{
    switch (tag.kind) {
        case GenKind::X: return x(tag.i);
        case GenKind::Y: return y(tag.i);
        case GenKind::Z: return z(tag.i, tag.j);
    }
    throw IndexError("unknown generator");
}

std::vector<GenTag> WeilRep::tags() const
{
    std::vector<GenTag> out;
    for (int i = 0; i < genus_; ++i) out.push_back({GenKind::X, i, 0});
    for (int i = 0; i < genus_; ++i) out.push_back({GenKind::Y, i, 0});
    for (int i = 0; i < genus_; ++i)
        for (int j = i + 1; j < genus_; ++j) out.push_back({GenKind::Z, i, j});
    return out;
}

std::vector<RingMatrix> WeilRep::generator_list() const
{
    std::vector<RingMatrix> out;
    for (const auto& t : tags()) out.push_back(generator(t));
    return out;
}

CycloElt gauss_sum(long a, long b, int level) { return WeilRep(level, 1).gauss_sum(a, b); }

RingMatrix generator_matrix(const WeilRep& rep, const GenTag& tag) { return rep.generator(tag); }

RingMatrix hopf_matrix(const WeilRep& rep)
{
    const long n = rep.dim();
    RingMatrix s = zeros(n, n, rep.field());
    for (long i = 0; i < n; ++i) {
        const auto di = rep.digits(i);
        for (long j = 0; j < n; ++j) {
            const auto dj = rep.digits(j);
            long e = 0;
            for (std::size_t k = 0; k < di.size(); ++k) e += di[k] * dj[k];
            s(i, j) = rep.a_pow(-2 * e);
        }
    }
    return s;
}

RingMatrix hopf_inverse(const WeilRep& rep)
{
    const CycloElt scale(mpq_class(1, static_cast<unsigned long>(rep.dim())));
    RingMatrix inv = dagger(hopf_matrix(rep));  // the pairing matrix is symmetric
    return scalar_mul(scale, inv);
}

RingMatrix schrodinger(const WeilRep& rep, const HeisenbergElt& h)
{
    const int g = rep.genus();
    if (h.x.size() != static_cast<std::size_t>(2 * g)) throw ArgumentError("Heisenberg vector has the wrong length");
    const long n = rep.dim();
    RingMatrix out = zeros(n, n, rep.field());
    for (long col = 0; col < n; ++col) {
        auto ds = rep.digits(col);
        long e = h.z;
        for (int i = 0; i < g; ++i) {
            auto& a = ds[static_cast<std::size_t>(i)];
            e += 2 * h.x[static_cast<std::size_t>(2 * i + 1)] * a;
            a += h.x[static_cast<std::size_t>(2 * i)];
        }
        out(rep.index(ds), col) = rep.a_pow(e);
    }
    return out;
}

RingMatrix weyl_operator(const WeilRep& rep, const HeisenbergElt& h)
{
    HeisenbergElt shifted = h;
    for (int i = 0; i < rep.genus(); ++i)
        shifted.z += h.x[static_cast<std::size_t>(2 * i)] * h.x[static_cast<std::size_t>(2 * i + 1)];
    return schrodinger(rep, shifted);
}

namespace {

HeisenbergElt lattice_point(const std::vector<long>& v) { return HeisenbergElt{v, 0}; }

// Reads h' off a monomial matrix proportional to some Add(h', 0); nullopt when it is not of that shape.
std::optional<std::vector<long>> read_translation(const WeilRep& rep, const RingMatrix& c)
{
    const int g = rep.genus();
    const long p = rep.level();
    long row0 = -1;
    for (long r = 0; r < rep.dim(); ++r)
        if (!c(r, 0).is_zero()) {
            row0 = r;
            break;
        }
    if (row0 < 0) return std::nullopt;
    const auto shift = rep.digits(row0);
    std::vector<long> h(static_cast<std::size_t>(2 * g), 0);
    for (int i = 0; i < g; ++i) {
        h[static_cast<std::size_t>(2 * i)] = shift[static_cast<std::size_t>(i)];
        std::vector<long> unit(static_cast<std::size_t>(g), 0);
        unit[static_cast<std::size_t>(i)] = 1;
        auto target = shift;
        target[static_cast<std::size_t>(i)] += 1;
        const CycloElt& base = c(row0, 0);
        const CycloElt& next = c(rep.index(target), rep.index(unit));
        if (next.is_zero()) return std::nullopt;
        const CycloElt ratio = next / base;
        bool hit = false;
        for (long n = 0; n < p && !hit; ++n)
            if (rep.a_pow(2 * n) == ratio) {
                h[static_cast<std::size_t>(2 * i + 1)] = n;
                hit = true;
            }
        if (!hit) return std::nullopt;
    }
    return h;
}

}  // namespace

EgorovReport egorov_map(const WeilRep& rep, const GenTag& tag)
{
    const RingMatrix& pi = rep.generator(tag);
    const RingMatrix pi_inv = dagger(pi);
    const int g = rep.genus();
    const long p = rep.level();
    const int rank2 = 2 * g;

    auto conjugated = [&](const std::vector<long>& h) { return matmul(matmul(pi, schrodinger(rep, lattice_point(h))), pi_inv); };

    EgorovReport report;
    report.tag = tag;
    report.map = SpMatrix::identity(g, p);
    report.unit_witnesses = true;
    for (int k = 0; k < rank2; ++k) {
        std::vector<long> e(static_cast<std::size_t>(rank2), 0);
        e[static_cast<std::size_t>(k)] = 1;
        const RingMatrix c = conjugated(e);
        const auto image = read_translation(rep, c);
        if (!image) throw DefectError("Egorov: no lattice image for generator " + tag.name());
        const auto witness = equal_up_to_scalar(c, schrodinger(rep, lattice_point(*image)));
        if (!witness) throw DefectError("Egorov: conjugate is not a translation for generator " + tag.name());
        report.unit_witnesses = report.unit_witnesses && witness->unit_norm;
        report.witnesses.push_back(witness->lambda);
        for (int r = 0; r < rank2; ++r) report.map.at(r, k) = mod((*image)[static_cast<std::size_t>(r)], p);
    }
    report.found = true;

    report.additive = true;
    for (int k = 0; k < rank2 && report.additive; ++k)
        for (int l = k + 1; l < rank2 && report.additive; ++l) {
            std::vector<long> h(static_cast<std::size_t>(rank2), 0);
            h[static_cast<std::size_t>(k)] = 1;
            h[static_cast<std::size_t>(l)] = 1;
            const auto w = equal_up_to_scalar(conjugated(h), schrodinger(rep, lattice_point(report.map.apply(h))));
            report.additive = w && w->unit_norm;
        }

    report.preserves_pairing = report.map.preserves_form();
    return report;
}

int schrodinger_commutant_dimension(const WeilRep& rep)
{
    std::vector<RingMatrix> ops;
    for (int k = 0; k < 2 * rep.genus(); ++k) {
        std::vector<long> e(static_cast<std::size_t>(2 * rep.genus()), 0);
        e[static_cast<std::size_t>(k)] = 1;
        ops.push_back(schrodinger(rep, lattice_point(e)));
    }
    return solve_commutant(ops).dimension;
}

GenusOneLift::GenusOneLift(int level) : rep_(level, 1)
{
    const bool even = level % 2 == 0;
    const CycloElt one(rep_.field(), mpq_class(1));
    const CycloElt beta_inv = even ? rep_.beta().inverse() : one;
    kappa_ = beta_inv.pow(3) * rep_.gauss_sum(-1, 0) / CycloElt(rep_.root_order());
    kappa_inv_ = kappa_.inverse() / CycloElt(level);
    t_scalar_ = beta_inv;
    const RingMatrix h = hopf_matrix(rep_);
    s_ = scalar_mul(kappa_, h);
    s_inv_ = scalar_mul(kappa_inv_, dagger(h));
}

RingMatrix GenusOneLift::t_image(long power) const
{
    const long p = rep_.level();
    RingMatrix out = zeros(p, p, rep_.field());
    const CycloElt scale = t_scalar_.pow(power);
    for (long i = 0; i < p; ++i) out(i, i) = scale * rep_.a_pow(-power * i * i);
    return out;
}

RingMatrix GenusOneLift::evaluate(const GeneratorWord& word) const
{
    RingMatrix out = rep_.identity();
    for (const auto& tok : word.tokens) {
        switch (tok.kind) {
            case TokenKind::S: out = matmul(out, s_); break;
            case TokenKind::SInv: out = matmul(out, s_inv_); break;
            case TokenKind::T: {
                const CycloElt scale = t_scalar_.pow(tok.power);
                for (Eigen::Index j = 0; j < out.cols(); ++j) {
                    const CycloElt f = scale * rep_.a_pow(-tok.power * j * j);
                    for (Eigen::Index i = 0; i < out.rows(); ++i)
                        if (!out(i, j).is_zero()) out(i, j) = out(i, j) * f;
                }
                break;
            }
        }
    }
    return out;
}

void GenusOneLift::check_modulus(const SL2Residue& m) const
{
    if (m.modulus != modulus()) throw ArgumentError("group element has the wrong modulus for this level");
}

RingMatrix GenusOneLift::evaluate(const SL2Residue& m) const
{
    check_modulus(m);
    return evaluate(word_decompose(m));
}

mpq_class GenusOneLift::trace_abs_sq(const SL2Residue& m) const
{
    check_modulus(m);
    const CycloElt n = trace(bruhat_word(m)).norm_sq();
    if (!n.is_rational()) throw DefectError("|Tr|^2 is not rational");
    return n.to_rational();
}

RingMatrix lift_genus1(int level, const SL2Residue& m) { return GenusOneLift(level).evaluate(m); }

mpq_class trace_abs_sq(int level, const SL2Residue& m) { return GenusOneLift(level).trace_abs_sq(m); }

}  // namespace weil
