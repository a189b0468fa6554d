#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace weil {

// Q(zeta_L) with zeta_L = exp(2 pi i / L); elements use the power basis 1, zeta, ..., zeta^(d-1).
class CycloField {
public:
    explicit CycloField(int order);

    int order() const noexcept { return order_; }
    int degree() const noexcept { return degree_; }
    // Cyclotomic polynomial, lowest degree first, length degree() + 1, monic.
    const std::vector<long>& modulus() const noexcept { return modulus_; }
    // zeta^k reduced mod the cyclotomic polynomial; k is taken mod order().
    const std::vector<long>& power(long k) const;

private:
    int order_;
    int degree_;
    std::vector<long> modulus_;
    std::vector<std::vector<long>> powers_;
};

using FieldPtr = std::shared_ptr<const CycloField>;

// Fields are interned: equal orders give the same pointer.
FieldPtr make_field(int order);

std::vector<long> cyclotomic_polynomial(int order);
long euler_phi(long n);

// Exact element of a cyclotomic field, stored as integer numerators over one positive
// denominator with gcd 1. An element without a field is a rational constant; it is
// coerced into the field of whatever it is combined with.
class CycloElt {
public:
    CycloElt();
    CycloElt(long value);  // NOLINT(google-explicit-constructor): Eigen needs Scalar(0), Scalar(1)
    explicit CycloElt(const mpq_class& value);
    CycloElt(FieldPtr field, const mpq_class& value);
    // Coefficients of 1, zeta, zeta^2, ... of any length; reduced on construction.
    CycloElt(FieldPtr field, const std::vector<mpq_class>& coeffs);
    static CycloElt from_integers(FieldPtr field, std::vector<mpz_class> numerators, mpz_class denominator);

    const FieldPtr& field() const noexcept { return field_; }
    int degree() const noexcept { return static_cast<int>(num_.size()); }
    mpq_class coeff(int i) const;
    std::vector<mpq_class> coeffs() const;
    const std::vector<mpz_class>& numerators() const noexcept { return num_; }
    const mpz_class& denominator() const noexcept { return den_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;
    mpq_class to_rational() const;  // throws ArgumentError when not rational

    CycloElt inverse() const;
    CycloElt conj() const;
    CycloElt norm_sq() const;
    CycloElt pow(long exponent) const;
    CycloElt in_field(const FieldPtr& field) const;

    std::complex<double> embed_complex(int precision_bits = 52) const;
    std::string to_string() const;

    CycloElt& operator+=(const CycloElt& rhs);
    CycloElt& operator-=(const CycloElt& rhs);
    CycloElt& operator*=(const CycloElt& rhs);
    CycloElt& operator/=(const CycloElt& rhs);
    CycloElt operator-() const;

    friend CycloElt operator+(CycloElt lhs, const CycloElt& rhs) { return lhs += rhs; }
    friend CycloElt operator-(CycloElt lhs, const CycloElt& rhs) { return lhs -= rhs; }
    friend CycloElt operator*(const CycloElt& lhs, const CycloElt& rhs);
    friend CycloElt operator/(CycloElt lhs, const CycloElt& rhs) { return lhs /= rhs; }
    friend bool operator==(const CycloElt& lhs, const CycloElt& rhs);
    friend bool operator!=(const CycloElt& lhs, const CycloElt& rhs) { return !(lhs == rhs); }
    // Total order on elements of one field (coefficient-lexicographic), for sorting.
    friend int compare(const CycloElt& lhs, const CycloElt& rhs);

private:
    FieldPtr field_;
    std::vector<mpz_class> num_;
    mpz_class den_;

    void normalize();
    void align(CycloElt& other);
};

CycloElt root_of_unity(const FieldPtr& field, long k);

inline CycloElt conj(const CycloElt& z) { return z.conj(); }
inline CycloElt norm_sq(const CycloElt& z) { return z.norm_sq(); }
inline CycloElt inverse(const CycloElt& z) { return z.inverse(); }
inline bool is_zero(const CycloElt& z) { return z.is_zero(); }
inline std::complex<double> embed_complex(const CycloElt& z, int precision_bits = 52)
{
    return z.embed_complex(precision_bits);
}

}  // namespace weil
