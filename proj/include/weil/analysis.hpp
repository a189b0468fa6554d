#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "weil/modgroup.hpp"
#include "weil/weilrep.hpp"

namespace weil {

enum class CharSumMethod { Auto, FullEnumeration, Census, Classes };

std::string method_name(CharSumMethod method);

struct CharSumReport {
    int level = 0;
    long modulus = 0;
    mpq_class value;
    long expected = 0;  // sigma(p) (odd) or sigma(p/2) (even)
    CharSumMethod method = CharSumMethod::Auto;
    long class_count = 0;  // terms evaluated
    bool match() const { return value == expected; }
};

// (1/|G|) sum |Tr|^2 over G = SL2(Z/pZ) (odd p) or SL2(Z/2pZ) (even p).
// Full enumeration needs modulus <= 32; census mode needs modulus 2^n <= 64.
CharSumReport char_sum(int level, CharSumMethod method = CharSumMethod::Auto, int workers = 1);

struct MultiplicativityReport {
    int a = 0, b = 0;
    mpq_class s_a, s_b, s_ab;
    bool holds() const { return s_ab == s_a * s_b; }
};

MultiplicativityReport char_sum_multiplicativity(int a, int b, int workers = 1);

struct TraceTableRow {
    int n = 0;
    int l = 0;
    std::string x_class;
    int s = 0;
    long tau = 0;
    std::string representative;
    mpq_class measured;
    std::optional<mpq_class> expected;
    bool constant_on_class = false;  // equal value on sampled conjugates
    bool match() const { return expected && *expected == measured; }
};

// Tabulated |Tr|^2 at level 2^{n-1} from the invariants; nullopt outside the table.
std::optional<mpq_class> expected_trace_abs_sq(int n, const ConjProfile& profile);

struct DiagonalCheck {
    long a = 0;
    bool word_matches = false;   // the three-S word evaluates to diag(a, a^{-1})
    bool is_permutation = false;  // lift equals a unit scalar times (delta_{a i, j})
};

struct TraceTable {
    int n = 0;
    std::vector<TraceTableRow> rows;
    std::vector<DiagonalCheck> diagonal;
    bool all_match() const;
    std::string to_csv() const;
};

TraceTable trace_table(int n);

struct FaithfulnessReport {
    int level = 0;
    long elements = 0;
    long projective_classes = 0;
    bool minus_identity_distinct = false;
    bool injective() const { return elements == projective_classes; }
};

FaithfulnessReport kernel_check(int level);

struct SemiclassicalReport {
    int level = 0;
    int genus = 1;
    std::vector<long> exponents;  // (x_1, y_1, ..., x_g, y_g) powers
    mpq_class value;              // (1/p^g) Tr Add
    mpq_class target;             // 1 for the empty monomial, 0 otherwise
    mpq_class gap;
};

std::vector<SemiclassicalReport> semiclassical_traces(int level, int genus, const std::vector<std::vector<long>>& monomials);

}  // namespace weil
