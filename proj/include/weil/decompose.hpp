#pragma once

#include <string>
#include <vector>

#include "weil/ringmat.hpp"
#include "weil/weilrep.hpp"

namespace weil {

// Column bases of the even and odd parts under e_a -> e_{-a}.
struct ParityBases {
    RingMatrix plus;
    RingMatrix minus;
};

// Throws DefectError when a generator fails to preserve either part (verify = true).
ParityBases parity_bases(int level, int genus, bool verify = true);
// Dimensions of the parity parts, by counting orbits of a -> -a.
std::pair<long, long> parity_dimensions(int level, int genus);

struct GeneratorCheck {
    std::string generator;
    bool pass = false;
};

struct CrtData {
    int a = 0, b = 0, genus = 1;
    long u = 0, v = 0;
    std::vector<long> pairing;  // f(x, y) at index x * b + y
    std::vector<long> psi;      // basis permutation U_a^g (x) U_b^g -> U_ab^g
    bool pairing_bijective = false;
    std::vector<GeneratorCheck> checks;
    std::string note;
    long f(long x, long y) const { return pairing[static_cast<std::size_t>(x * b + y)]; }
    bool pass() const;
};

// Requires gcd(a, b) = 1, b odd, a, b >= 2; throws ArgumentError otherwise.
CrtData crt_check(int a, int b, int genus);

struct TowerData {
    int r = 0, n = 0, genus = 1;
    RingMatrix gvecs;   // columns: tensor products of g_i = sum_k e_{r(i + k r^n)}
    RingMatrix wbasis;  // columns spanning the orthogonal complement
    bool independent = false;
    bool orthogonal = false;
    std::vector<GeneratorCheck> restriction_checks;  // restriction equals the smaller level (or trivial)
    std::vector<GeneratorCheck> complement_checks;   // complement is stable
    bool pass() const;
};

TowerData tower_check(int r, int n, int genus);

struct FactorLabel {
    std::string kind;    // U, W, trivial
    long prime_power = 1;
    std::string parity;  // +, -, none
    int genus = 1;
    long dim = 1;
};

struct TensorFactor {
    std::vector<FactorLabel> tensor;
    long dim() const;
    int minus_count() const;
};

struct DecompositionTree {
    int level = 0;
    int genus = 1;
    std::vector<TensorFactor> factors;
    long total_dim() const;
    std::string to_json() const;
};

DecompositionTree decomposition_tree(int level, int genus);
long sigma(long n);  // number of divisors
long expected_factor_count(int level);  // sigma(p) or sigma(p/2)

// Throws ResourceError when p^{2g} > 256.
int commutant_dimension(int level, int genus);

struct OmegaOperator {
    long delta = 0;
    long orbit_size = 0;
    RingMatrix matrix;
    bool commutes = false;
};

struct OmegaFamily {
    int level = 0;
    int genus = 1;
    long lattice_modulus = 0;
    std::vector<OmegaOperator> operators;
    long rank = 0;  // rank of the family as vectors
    long expected = 0;  // sigma(p)
    long commutant_dim = 0;
    bool all_commute() const;
    bool independent() const { return rank == static_cast<long>(operators.size()); }
    bool pass() const { return all_commute() && independent() && static_cast<long>(operators.size()) == expected; }
};

// Sum of symmetrised Heisenberg operators over the orbit of (0, delta, ..., 0, delta).
OmegaOperator omega_projector(long delta, int level, int genus);
OmegaFamily omega_family(int level, int genus);

struct OddPartAudit {
    int level = 0;
    std::vector<TensorFactor> summands;  // odd number of minus factors
    long total_dim = 0;
    long minus_dim = 0;  // dim of the odd part from parity_bases
    bool pass() const { return total_dim == minus_dim; }
};

OddPartAudit su2_so3_labels(int level, bool verify_parity = true);

}  // namespace weil
