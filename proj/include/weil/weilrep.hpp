#pragma once

#include <string>
#include <vector>

#include "weil/cyclo.hpp"
#include "weil/modgroup.hpp"
#include "weil/ringmat.hpp"

namespace weil {

int field_order(int level);    // lcm(2p, 24)
long root_order(int level);    // multiplicative order of A: p (odd) or 2p (even)
long lattice_modulus(int level);  // Heisenberg coordinates live mod p (odd) or 2p (even)

enum class GenKind { X, Y, Z };

struct GenTag {
    GenKind kind = GenKind::X;
    int i = 0;
    int j = 0;  // second handle, Z only
    std::string name() const;
    bool operator==(const GenTag&) const = default;
};

// Generator matrices of the level-p, genus-g representation on (Q(zeta_L))^{p^g}. Basis index of
// e_{a_1} (x) ... (x) e_{a_g} is sum_i a_i p^{g-1-i}. The element used as A may be any primitive
// root of the right order inside a larger field (CRT and tower checks substitute powers).
class WeilRep {
public:
    WeilRep(int level, int genus);
    // A := zeta_L^{zeta_step} in the given field; it must have order root_order(level).
    WeilRep(int level, int genus, FieldPtr field, long zeta_step);

    int level() const noexcept { return level_; }
    int genus() const noexcept { return genus_; }
    long dim() const noexcept { return dim_; }
    long root_order() const noexcept { return root_order_; }
    const FieldPtr& field() const noexcept { return field_; }
    long zeta_step() const noexcept { return step_; }

    // A^e for any integer e.
    const CycloElt& a_pow(long e) const;
    CycloElt beta() const;  // zeta_L^{L/24}
    CycloElt gauss_sum(long a, long b) const;

    const RingMatrix& x(int i) const;
    const RingMatrix& y(int i) const;
    const RingMatrix& z(int i, int j) const;  // i != j, genus >= 2
    const RingMatrix& generator(const GenTag& tag) const;
    std::vector<GenTag> tags() const;
    std::vector<RingMatrix> generator_list() const;

    // Digits (a_1, ..., a_g) of a basis index and back.
    std::vector<long> digits(long index) const;
    long index(const std::vector<long>& digits) const;

    RingMatrix identity() const;

private:
    int level_;
    int genus_;
    long dim_;
    long root_order_;
    FieldPtr field_;
    long step_;
    std::vector<CycloElt> powers_;
    std::vector<RingMatrix> xs_, ys_;
    std::vector<RingMatrix> zs_;  // row-major g x g, diagonal unused

    void build();
};

CycloElt gauss_sum(long a, long b, int level);
RingMatrix generator_matrix(const WeilRep& rep, const GenTag& tag);

// Hopf pairing matrix (A^{-2 sum a_i b_i}) and its inverse (1/p^g) conj.
RingMatrix hopf_matrix(const WeilRep& rep);
RingMatrix hopf_inverse(const WeilRep& rep);

// Lattice vector (m_1, n_1, ..., m_g, n_g) and central coordinate z.
struct HeisenbergElt {
    std::vector<long> x;
    long z = 0;
};

// A^z prod_i Shift_i^{m_i} Mod_i^{n_i}, Mod first.
RingMatrix schrodinger(const WeilRep& rep, const HeisenbergElt& h);
// Symmetrised A^{sum m_i n_i} Add(h): a homomorphism for the pairing omega.
RingMatrix weyl_operator(const WeilRep& rep, const HeisenbergElt& h);

struct EgorovReport {
    GenTag tag;
    SpMatrix map;  // induced action on the lattice, mod p
    std::vector<CycloElt> witnesses;
    bool found = false;
    bool unit_witnesses = false;
    bool additive = false;
    bool preserves_pairing = false;
    bool ok() const { return found && unit_witnesses && additive && preserves_pairing; }
};

// Throws IndexError for a tag outside the genus and DefectError when no image exists.
EgorovReport egorov_map(const WeilRep& rep, const GenTag& tag);

// Commutant of {Add(h, 0) : h a lattice basis vector}.
int schrodinger_commutant_dimension(const WeilRep& rep);

// Linear genus-one lift at level p. Group elements live mod root_order(p).
class GenusOneLift {
public:
    explicit GenusOneLift(int level);

    int level() const noexcept { return rep_.level(); }
    long modulus() const noexcept { return rep_.root_order(); }
    const WeilRep& rep() const noexcept { return rep_; }

    const RingMatrix& s_image() const noexcept { return s_; }
    const RingMatrix& s_inverse_image() const noexcept { return s_inv_; }
    RingMatrix t_image(long power) const;

    RingMatrix evaluate(const GeneratorWord& word) const;
    RingMatrix evaluate(const SL2Residue& m) const;  // via word_decompose

    // Exact trace of the word image without forming the matrix.
    CycloElt trace(const GeneratorWord& word) const;
    mpq_class trace_abs_sq(const SL2Residue& m) const;  // via bruhat_word

private:
    WeilRep rep_;
    CycloElt kappa_;      // S image scalar
    CycloElt kappa_inv_;  // S^{-1} image scalar
    CycloElt t_scalar_;   // T image = t_scalar * diag(A^{-i^2})
    RingMatrix s_, s_inv_;

    CycloElt histogram_value(const std::vector<long>& counts) const;
    void check_modulus(const SL2Residue& m) const;
};

RingMatrix lift_genus1(int level, const SL2Residue& m);
mpq_class trace_abs_sq(int level, const SL2Residue& m);

}  // namespace weil
