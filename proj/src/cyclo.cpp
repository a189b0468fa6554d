#include "weil/cyclo.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "weil/errors.hpp"

namespace weil {

namespace {

std::vector<long> poly_exact_div(std::vector<long> num, const std::vector<long>& den)
{
    // den is monic; returns quotient, requires zero remainder.
    const std::size_t dn = den.size() - 1;
    std::vector<long> quot(num.size() - dn, 0);
    for (std::size_t k = num.size(); k-- > dn;) {
        const long c = num[k];
        quot[k - dn] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
    }
    for (std::size_t j = 0; j < dn; ++j)
        if (num[j] != 0) throw DefectError("cyclotomic division left a remainder");
    return quot;
}

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p)
{
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Returns (q, r) with a = q b + r.
std::pair<QPoly, QPoly> poly_divmod(QPoly a, const QPoly& b)
{
    trim(a);
    QPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
    const mpq_class lead = b.back();
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        const mpq_class c = a.back() / lead;
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        trim(a);
    }
    return {q, a};
}

QPoly poly_mul(const QPoly& a, const QPoly& b)
{
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

QPoly poly_sub(QPoly a, const QPoly& b)
{
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

// Reduces a wide integer polynomial (length >= degree) mod the monic modulus in place.
void reduce_wide(std::vector<mpz_class>& wide, const std::vector<long>& modulus)
{
    const std::size_t d = modulus.size() - 1;
    for (std::size_t k = wide.size(); k-- > d;) {
        if (wide[k] == 0) continue;
        mpz_class c = wide[k];
        wide[k] = 0;
        for (std::size_t j = 0; j < d; ++j) {
            const long m = modulus[j];
            if (m > 0)
                mpz_submul_ui(wide[k - d + j].get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(m));
            else if (m < 0)
                mpz_addmul_ui(wide[k - d + j].get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(-m));
        }
    }
    wide.resize(d);
}

}  // namespace

long euler_phi(long n)
{
    long result = n;
    for (long q = 2; q * q <= n; ++q) {
        if (n % q != 0) continue;
        while (n % q == 0) n /= q;
        result -= result / q;
    }
    if (n > 1) result -= result / n;
    return result;
}

std::vector<long> cyclotomic_polynomial(int order)
{
    if (order < 1) throw ArgumentError("cyclotomic order must be positive");
    std::vector<long> poly(static_cast<std::size_t>(order) + 1, 0);
    poly[0] = -1;
    poly[static_cast<std::size_t>(order)] = 1;
    for (int d = 1; d < order; ++d)
        if (order % d == 0) poly = poly_exact_div(poly, cyclotomic_polynomial(d));
    return poly;
}

CycloField::CycloField(int order)
    : order_(order), degree_(static_cast<int>(euler_phi(order))), modulus_(cyclotomic_polynomial(order))
{
    const auto d = static_cast<std::size_t>(degree_);
    powers_.reserve(static_cast<std::size_t>(order_));
    std::vector<long> cur(d, 0);
    cur[0] = 1;
    for (int k = 0; k < order_; ++k) {
        powers_.push_back(cur);
        // multiply by zeta
        const long top = cur[d - 1];
        for (std::size_t j = d - 1; j > 0; --j) cur[j] = cur[j - 1] - top * modulus_[j];
        cur[0] = -top * modulus_[0];
    }
}

const std::vector<long>& CycloField::power(long k) const
{
    long r = k % order_;
    if (r < 0) r += order_;
    return powers_[static_cast<std::size_t>(r)];
}

FieldPtr make_field(int order)
{
    if (order < 1) throw ArgumentError("field order must be positive");
    static std::mutex mutex;
    static std::map<int, FieldPtr> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    auto field = std::make_shared<const CycloField>(order);
    cache.emplace(order, field);
    return field;
}

CycloElt::CycloElt() : num_(1, 0), den_(1) {}

CycloElt::CycloElt(long value) : num_(1, value), den_(1) {}

CycloElt::CycloElt(const mpq_class& value) : num_(1, value.get_num()), den_(value.get_den()) {}

CycloElt::CycloElt(FieldPtr field, const mpq_class& value) : field_(std::move(field)), den_(value.get_den())
{
    num_.assign(static_cast<std::size_t>(field_->degree()), 0);
    num_[0] = value.get_num();
}

CycloElt::CycloElt(FieldPtr field, const std::vector<mpq_class>& coeffs) : field_(std::move(field)), den_(1)
{
    for (const auto& c : coeffs) den_ = lcm(den_, mpz_class(c.get_den()));
    std::vector<mpz_class> wide(std::max<std::size_t>(coeffs.size(), static_cast<std::size_t>(field_->degree())), 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) wide[i] = coeffs[i].get_num() * (den_ / coeffs[i].get_den());
    reduce_wide(wide, field_->modulus());
    num_ = std::move(wide);
    normalize();
}

CycloElt CycloElt::from_integers(FieldPtr field, std::vector<mpz_class> numerators, mpz_class denominator)
{
    if (denominator == 0) throw DivisionByZero("zero denominator");
    CycloElt z;
    z.field_ = std::move(field);
    if (numerators.size() < static_cast<std::size_t>(z.field_->degree()))
        numerators.resize(static_cast<std::size_t>(z.field_->degree()), 0);
    reduce_wide(numerators, z.field_->modulus());
    z.num_ = std::move(numerators);
    z.den_ = std::move(denominator);
    z.normalize();
    return z;
}

void CycloElt::normalize()
{
    if (den_ == 1) return;
    if (den_ < 0) {
        den_ = -den_;
        for (auto& c : num_) c = -c;
    }
    mpz_class g = den_;
    for (const auto& c : num_) {
        if (c == 0) continue;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) return;
    }
    bool all_zero = true;
    for (const auto& c : num_) all_zero = all_zero && c == 0;
    if (all_zero) {
        den_ = 1;
        return;
    }
    if (g == 1) return;
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
}

CycloElt CycloElt::in_field(const FieldPtr& field) const
{
    if (field_ == field) return *this;
    if (field_) throw FieldMismatch("element already belongs to another cyclotomic field");
    CycloElt z;
    z.field_ = field;
    z.num_.assign(static_cast<std::size_t>(field->degree()), 0);
    z.num_[0] = num_[0];
    z.den_ = den_;
    return z;
}

void CycloElt::align(CycloElt& other)
{
    if (field_ == other.field_) return;
    if (!field_) {
        *this = in_field(other.field_);
    } else if (!other.field_) {
        other = other.in_field(field_);
    } else {
        throw FieldMismatch("operands live in different cyclotomic fields");
    }
}

mpq_class CycloElt::coeff(int i) const
{
    mpq_class q(num_.at(static_cast<std::size_t>(i)), den_);
    q.canonicalize();
    return q;
}

std::vector<mpq_class> CycloElt::coeffs() const
{
    std::vector<mpq_class> out;
    out.reserve(num_.size());
    for (std::size_t i = 0; i < num_.size(); ++i) out.push_back(coeff(static_cast<int>(i)));
    return out;
}

bool CycloElt::is_zero() const
{
    for (const auto& c : num_)
        if (c != 0) return false;
    return true;
}

bool CycloElt::is_rational() const
{
    for (std::size_t i = 1; i < num_.size(); ++i)
        if (num_[i] != 0) return false;
    return true;
}

bool CycloElt::is_one() const { return is_rational() && den_ == 1 && num_[0] == 1; }

mpq_class CycloElt::to_rational() const
{
    if (!is_rational()) throw ArgumentError("cyclotomic element is not rational: " + to_string());
    return coeff(0);
}

CycloElt& CycloElt::operator+=(const CycloElt& rhs)
{
    CycloElt other = rhs;
    align(other);
    if (den_ == other.den_) {
        for (std::size_t i = 0; i < num_.size(); ++i) num_[i] += other.num_[i];
    } else {
        for (std::size_t i = 0; i < num_.size(); ++i) {
            num_[i] *= other.den_;
            mpz_addmul(num_[i].get_mpz_t(), other.num_[i].get_mpz_t(), den_.get_mpz_t());
        }
        den_ *= other.den_;
    }
    normalize();
    return *this;
}

CycloElt& CycloElt::operator-=(const CycloElt& rhs) { return *this += -rhs; }

CycloElt CycloElt::operator-() const
{
    CycloElt z = *this;
    for (auto& c : z.num_) c = -c;
    return z;
}

CycloElt operator*(const CycloElt& lhs, const CycloElt& rhs)
{
    if (lhs.field_ != rhs.field_ && lhs.field_ && rhs.field_)
        throw FieldMismatch("operands live in different cyclotomic fields");
    const CycloElt* scalar = nullptr;
    const CycloElt* other = nullptr;
    if (lhs.is_rational()) {
        scalar = &lhs;
        other = &rhs;
    } else if (rhs.is_rational()) {
        scalar = &rhs;
        other = &lhs;
    }
    CycloElt out;
    out.field_ = lhs.field_ ? lhs.field_ : rhs.field_;
    if (scalar) {
        out.num_ = other->num_;
        if (!other->field_ && out.field_) out = other->in_field(out.field_);
        for (auto& c : out.num_) c *= scalar->num_[0];
        out.den_ = other->den_ * scalar->den_;
        out.normalize();
        return out;
    }
    const std::size_t d = lhs.num_.size();
    thread_local std::vector<mpz_class> wide;
    wide.resize(2 * d - 1);
    for (auto& w : wide) w = 0;
    for (std::size_t i = 0; i < d; ++i) {
        if (lhs.num_[i] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (rhs.num_[j] == 0) continue;
            mpz_addmul(wide[i + j].get_mpz_t(), lhs.num_[i].get_mpz_t(), rhs.num_[j].get_mpz_t());
        }
    }
    const auto& modulus = out.field_->modulus();
    for (std::size_t k = wide.size(); k-- > d;) {
        if (wide[k] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) {
            const long m = modulus[j];
            if (m > 0)
                mpz_submul_ui(wide[k - d + j].get_mpz_t(), wide[k].get_mpz_t(), static_cast<unsigned long>(m));
            else if (m < 0)
                mpz_addmul_ui(wide[k - d + j].get_mpz_t(), wide[k].get_mpz_t(), static_cast<unsigned long>(-m));
        }
    }
    out.num_.assign(wide.begin(), wide.begin() + static_cast<std::ptrdiff_t>(d));
    out.den_ = lhs.den_ * rhs.den_;
    out.normalize();
    return out;
}

CycloElt& CycloElt::operator*=(const CycloElt& rhs)
{
    *this = *this * rhs;
    return *this;
}

CycloElt& CycloElt::operator/=(const CycloElt& rhs)
{
    *this = *this * rhs.inverse();
    return *this;
}

bool operator==(const CycloElt& lhs, const CycloElt& rhs)
{
    if (lhs.field_ != rhs.field_) {
        if (lhs.field_ && rhs.field_) throw FieldMismatch("comparing elements of different fields");
        if (!lhs.is_rational() || !rhs.is_rational()) return false;
        return lhs.den_ == rhs.den_ && lhs.num_[0] == rhs.num_[0];
    }
    return lhs.den_ == rhs.den_ && lhs.num_ == rhs.num_;
}

int compare(const CycloElt& lhs, const CycloElt& rhs)
{
    if (lhs.field_ != rhs.field_) {
        CycloElt a = lhs;
        CycloElt b = rhs;
        a.align(b);
        return compare(a, b);
    }
    for (std::size_t i = 0; i < lhs.num_.size(); ++i) {
        const mpz_class l = lhs.num_[i] * rhs.den_;
        const mpz_class r = rhs.num_[i] * lhs.den_;
        const int c = cmp(l, r);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
}

CycloElt CycloElt::inverse() const
{
    if (is_zero()) throw DivisionByZero("inverse of zero");
    if (is_rational()) {
        CycloElt z = *this;
        z.num_[0] = den_;
        z.den_ = num_[0];
        z.normalize();
        return z;
    }
    // Extended Euclid: find s with s * self = 1 mod modulus.
    QPoly a(num_.size());
    for (std::size_t i = 0; i < num_.size(); ++i) a[i] = mpq_class(num_[i]);
    trim(a);
    QPoly b(field_->modulus().begin(), field_->modulus().end());
    QPoly s0{1}, s1{};
    QPoly r0 = a, r1 = b;
    while (!r1.empty()) {
        auto [q, r] = poly_divmod(r0, r1);
        QPoly s2 = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r0 is a nonzero constant gcd.
    if (r0.size() != 1) throw DefectError("cyclotomic modulus is not irreducible");
    for (auto& c : s0) c /= r0[0];
    std::vector<mpq_class> coeffs(s0.begin(), s0.end());
    // Multiply numerator back by the denominator of self.
    for (auto& c : coeffs) c *= den_;
    return CycloElt(field_, coeffs);
}

CycloElt CycloElt::conj() const
{
    if (!field_ || is_rational()) return *this;
    const std::size_t d = num_.size();
    std::vector<mpz_class> out(d, 0);
    for (std::size_t k = 0; k < d; ++k) {
        if (num_[k] == 0) continue;
        const auto& p = field_->power(-static_cast<long>(k));
        for (std::size_t j = 0; j < d; ++j) {
            if (p[j] > 0)
                mpz_addmul_ui(out[j].get_mpz_t(), num_[k].get_mpz_t(), static_cast<unsigned long>(p[j]));
            else if (p[j] < 0)
                mpz_submul_ui(out[j].get_mpz_t(), num_[k].get_mpz_t(), static_cast<unsigned long>(-p[j]));
        }
    }
    CycloElt z;
    z.field_ = field_;
    z.num_ = std::move(out);
    z.den_ = den_;
    return z;
}

CycloElt CycloElt::norm_sq() const { return *this * conj(); }

CycloElt CycloElt::pow(long exponent) const
{
    if (exponent < 0) return inverse().pow(-exponent);
    CycloElt result = field_ ? CycloElt(field_, mpq_class(1)) : CycloElt(1);
    CycloElt base = *this;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        exponent >>= 1;
        if (exponent > 0) base *= base;
    }
    return result;
}

std::complex<double> CycloElt::embed_complex(int precision_bits) const
{
    if (precision_bits < 1 || precision_bits > 52)
        throw ArgumentError("embed_complex supports 1..52 bits of precision");
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    const int order = field_ ? field_->order() : 1;
    const long double den = mpz_get_d(den_.get_mpz_t());
    long double re = 0, im = 0;
    for (std::size_t k = 0; k < num_.size(); ++k) {
        if (num_[k] == 0) continue;
        const long double c = mpz_get_d(num_[k].get_mpz_t());
        const long double angle = two_pi * static_cast<long double>(k) / order;
        re += c * std::cos(angle);
        im += c * std::sin(angle);
    }
    return {static_cast<double>(re / den), static_cast<double>(im / den)};
}

std::string CycloElt::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < num_.size(); ++k) {
        if (num_[k] == 0) continue;
        mpq_class c(num_[k], den_);
        c.canonicalize();
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        const mpq_class mag = abs(c);
        if (k == 0) os << mag.get_str();
        else {
            if (mag != 1) os << mag.get_str() << "*";
            os << "z";
            if (k > 1) os << "^" << k;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

CycloElt root_of_unity(const FieldPtr& field, long k)
{
    const auto& p = field->power(k);
    std::vector<mpz_class> num(p.begin(), p.end());
    return CycloElt::from_integers(field, std::move(num), 1);
}

}  // namespace weil
