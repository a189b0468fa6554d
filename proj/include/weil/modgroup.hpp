#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace weil {

long mod(long a, long n);
long mod_inverse(long a, long n);  // throws ArgumentError when a is not a unit
long gcd_long(long a, long b);
long divisor_count(long n);
std::vector<long> divisors(long n);
// Prime-power factorisation as (prime, exponent) pairs in increasing prime order.
std::vector<std::pair<long, int>> factorize(long n);

// Element [[a, b], [c, d]] of SL2(Z/NZ), entries kept in [0, N).
struct SL2Residue {
    long modulus = 1;
    long a = 0, b = 0, c = 0, d = 0;

    static SL2Residue make(long modulus, long a, long b, long c, long d);  // throws if det != 1
    static SL2Residue identity(long modulus);
    static SL2Residue s_matrix(long modulus);  // [[0, 1], [-1, 0]]
    static SL2Residue t_matrix(long modulus, long k = 1);  // [[1, k], [0, 1]]
    static SL2Residue scalar(long modulus, long x);

    SL2Residue operator*(const SL2Residue& rhs) const;
    SL2Residue inverse() const;
    SL2Residue operator-() const;
    SL2Residue reduce(long new_modulus) const;  // new_modulus must divide modulus
    long trace() const { return mod(a + d, modulus); }
    bool operator==(const SL2Residue& rhs) const = default;
    std::string to_string() const;
};

inline SL2Residue conjugate(const SL2Residue& g, const SL2Residue& m) { return g * m * g.inverse(); }

long sl2_order(long modulus);

inline constexpr long kDefaultEnumerationBound = 64;

// Visits every element of SL2(Z/NZ) exactly once, in lexicographic (a, b, c, d) order.
void sl2_enumerate(long modulus, const std::function<void(const SL2Residue&)>& visit,
                   long bound = kDefaultEnumerationBound);
// Same stream restricted to top-left entries a in [a_begin, a_end); used to split work.
void sl2_enumerate_range(long modulus, long a_begin, long a_end, const std::function<void(const SL2Residue&)>& visit);
std::vector<SL2Residue> sl2_elements(long modulus, long bound = 32);

enum class TokenKind { S, SInv, T };

struct Token {
    TokenKind kind;
    long power = 1;  // only meaningful for T
    bool operator==(const Token&) const = default;
};

struct GeneratorWord {
    std::vector<Token> tokens;

    SL2Residue evaluate(long modulus) const;
    std::string to_string() const;
    int s_count() const;
    bool operator==(const GeneratorWord&) const = default;
};

GeneratorWord word_decompose(const SL2Residue& m);
// A different word for the same element: decompose m * T^shift and append T^{-shift}.
GeneratorWord word_decompose_shifted(const SL2Residue& m, long shift);
// Shortest-S word: two S tokens when c is a unit, four otherwise.
GeneratorWord bruhat_word(const SL2Residue& m);

// Conjugacy invariants of A in SL2(Z/2^n Z): A = x + 2^l U1 with U1 non-scalar mod 2.
struct ConjProfile {
    int l = 0;
    long x = 0;
    long tau = 0;
    int s = 0;
    bool operator==(const ConjProfile&) const = default;
};

ConjProfile conj_profile(const SL2Residue& m, int n);
// "1", "-1", "2^(l-1)+1" or "2^(l-1)-1" (l >= 1); "1" for l = 0.
std::string x_class(const ConjProfile& profile);

struct CensusRow {
    int l = 0;
    std::string x_class;
    std::optional<int> s;  // absent for rows aggregated over s
    long count = 0;
    std::optional<long> expected;
    bool match() const { return expected && *expected == count; }
};

std::optional<long> class_count_formula(int n, int l, const std::string& x_class, std::optional<int> s);
std::vector<CensusRow> census(int n, int workers = 1);
std::string census_csv(int n, const std::vector<CensusRow>& rows);

long class_size_bruteforce(const SL2Residue& m);
long hensel_lift_count(const SL2Residue& m);

struct QuadraticCount {
    long count = 0;
    long expected = 0;
    bool match() const { return count == expected; }
};

// Solutions (x, y) mod 2^n of A x^2 + B x y + C y^2 = D, or of A x^2 + 2B x y + C y^2 = D when
// even_cross is set, together with the closed-form prediction.
QuadraticCount count_quadratic_solutions(long A, long B, long C, long D, int n, bool even_cross);
long quadratic_closed_form(long A, long B, long C, long D, int n, bool even_cross);

struct ClassRep {
    SL2Residue matrix;
    std::string family;  // A0, A, -A, B, -B, scalar
    int l = 0;
    long tau = 0;
    long c1 = 1;
    long m = 0;  // tabulated class size
};

std::vector<ClassRep> class_representatives(int n);

struct ConjugacyClass {
    SL2Residue representative;
    long size = 0;
};

// All conjugacy classes of SL2(Z/NZ) as CRT products of prime-power classes. The representative
// of each class has c a unit whenever the class contains such an element.
std::vector<ConjugacyClass> conjugacy_classes(long modulus);

// 2g x 2g matrix over Z/NZ acting on column vectors in coordinates (m1, n1, ..., mg, ng).
struct SpMatrix {
    int genus = 1;
    long modulus = 1;
    std::vector<long> entries;

    static SpMatrix identity(int genus, long modulus);
    long at(int i, int j) const { return entries[static_cast<std::size_t>(i * 2 * genus + j)]; }
    long& at(int i, int j) { return entries[static_cast<std::size_t>(i * 2 * genus + j)]; }
    std::vector<long> apply(const std::vector<long>& v) const;
    SpMatrix operator*(const SpMatrix& rhs) const;
    bool preserves_form() const;
    bool operator==(const SpMatrix&) const = default;
};

// omega(u, v) = sum_i (n_i m'_i - m_i n'_i) mod N.
long symplectic_form(const std::vector<long>& u, const std::vector<long>& v, long modulus);
std::vector<long> lattice_x(int genus, int i);  // Mod direction of handle i
std::vector<long> lattice_y(int genus, int i);  // Shift direction of handle i

// Transvections v -> v + omega(v, gamma) gamma for gamma in {x_i, y_i, x_i - x_j}.
std::vector<SpMatrix> sp_generators(int genus, long modulus);
long group_closure_order(const std::vector<SpMatrix>& gens, long limit);

std::vector<std::vector<long>> orbit(const std::vector<long>& start, const std::vector<SpMatrix>& gens);

struct OrbitCensus {
    long count = 0;
    long expected = 0;
    std::vector<std::vector<long>> representatives;  // (0, d, ..., 0, d) per orbit
    std::vector<long> deltas;
    std::vector<long> sizes;
    bool representatives_ok = false;
    bool match() const { return count == expected && representatives_ok; }
};

OrbitCensus orbit_census(long modulus, int genus);

}  // namespace weil
