#pragma once

#include "wg/diagram.hpp"

#include <set>
#include <string>
#include <vector>

namespace wg {

struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using RootVec = std::vector<int>;

// A basis of Z^d in E-coordinates. f[i] is the i-th basis vector; the
// standard basis is the identity list.
struct Basis {
    std::vector<RootVec> f;

    static Basis standard(int dim);
    int dim() const { return static_cast<int>(f.size()); }
    friend bool operator==(const Basis& a, const Basis& b) { return a.f == b.f; }
    friend bool operator<(const Basis& a, const Basis& b) { return a.f < b.f; }
};

// Reflection letters in 1..d, rightmost letter acts first on E.
using ReflectionWord = std::vector<int>;

struct ReflectionUndefined : std::runtime_error {
    Basis basis;
    int i = 0, j = 0;       // reflection index and the pair lacking a Cartan integer
    int word_position = -1; // set when raised while applying a word
    ReflectionUndefined(Basis b, int i_, int j_, const std::string& msg)
        : std::runtime_error(msg), basis(std::move(b)), i(i_), j(j_) {}
};

// Cartan integer a_ij <= 0 of the reflection s_{f_i, F}; nullopt = undefined.
std::optional<long long> cartan_integer(const BicharacterMatrix& m, const Basis& f, int i, int j);

// s_{f_i, F}: f_i -> -f_i, f_j -> f_j - a_ij f_i. Throws ReflectionUndefined.
Basis reflect(const BicharacterMatrix& m, const Basis& f, int i);

enum class Verdict { full_finite, not_full, cap_exceeded };

std::string to_string(Verdict v);

struct ExploreCaps {
    size_t max_bases = 1000000;
    // coordinates are tracked in 16-bit storage; values beyond 32767 always
    // count as exceeding the cap
    long long max_coeff = 10000;
};

struct GroupoidResult {
    Verdict verdict = Verdict::cap_exceeded;
    int dim = 0;
    size_t basis_count = 0;           // reached bases in BFS order (levels sorted)
    std::vector<int16_t> basis_data;  // basis_count * dim * dim, row-major vectors
    std::set<RootVec> roots;          // union of all reached basis vectors and negatives
    int depth = 0;
    // for not_full: the basis and index pair where the Cartan integer is undefined
    Basis failure_basis;
    int failure_i = 0, failure_j = 0;

    const int16_t* basis_raw(size_t k) const { return basis_data.data() + k * dim * dim; }
    Basis basis(size_t k) const;

    std::string to_json() const;
};

// Breadth-first closure of the standard basis under all defined reflections.
// Deterministic: every BFS level is expanded in lexicographic basis order.
GroupoidResult explore(const BicharacterMatrix& m, const ExploreCaps& caps = {});

// Delta_E^+ = Delta cap N_0 E; requires a full_finite result
std::set<RootVec> positive_roots(const GroupoidResult& r);

struct WordResult {
    Basis final;
    std::vector<Basis> trace; // starts at E, one entry per applied letter
};

WordResult apply_word(const BicharacterMatrix& m, const ReflectionWord& w);

// True iff w sends E to (E \ {e}) union {-alpha} with alpha >= 0 and the
// restriction to E \ {e} explores to full_finite: together these certify
// finiteness of the whole groupoid by induction on the rank.
bool witnesses_finiteness_induction(const BicharacterMatrix& m, const ReflectionWord& w,
                                    const ExploreCaps& caps = {});

// Set of twist-canonical diagrams read at every basis reached from E,
// keyed up to vertex permutation. Requires full_finite exploration.
std::set<std::vector<long long>> orbit_diagram_keys(const BicharacterMatrix& m,
                                                    const ExploreCaps& caps = {});
std::set<std::vector<long long>> orbit_diagram_keys(const BicharacterMatrix& m,
                                                    const GroupoidResult& r);

// Diagram read at basis F: p_ij = chi(f_i, f_j)
BicharacterMatrix matrix_at_basis(const BicharacterMatrix& m, const Basis& f);

// Exhaustive check of the positivity propositions over a finite exploration:
// at every reached basis F every root is one-signed in F-coordinates, and
// each defined reflection swaps exactly the reflected vector's sign in the
// positive system. Returns an empty string, or a description of the first
// violation.
std::string check_root_propositions(const BicharacterMatrix& m, const GroupoidResult& r);

// Weyl equivalence, operationalized as intersection of the two orbit diagram
// sets. Both inputs must explore to full_finite.
bool weyl_equivalent(const BicharacterMatrix& m1, const BicharacterMatrix& m2,
                     const ExploreCaps& caps = {});

// Compressed root notation: m_1 e_1 + ... prints as "1^{m_1}2^{m_2}...",
// exponents omitted when 1, zero terms dropped, negatives prefixed by '-'.
std::string print_root(const RootVec& v);
std::string print_basis_tuple(const Basis& f);

} // namespace wg
