#pragma once

#include "wg/scalar.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace wg {

struct DiagramError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// d x d matrix (q_ij) of an exact bicharacter chi on Z^d,
// chi(x, y) = prod q_ij^(x_i y_j).
class BicharacterMatrix {
  public:
    BicharacterMatrix() = default;
    BicharacterMatrix(int dim, int modulus = 2520)
        : dim_(dim), q_(static_cast<size_t>(dim) * dim, Scalar::one(modulus)) {}

    int dim() const { return dim_; }
    int modulus() const { return q_.empty() ? 2520 : q_[0].modulus(); }
    Scalar& at(int i, int j) { return q_[static_cast<size_t>(i) * dim_ + j]; }
    const Scalar& at(int i, int j) const { return q_[static_cast<size_t>(i) * dim_ + j]; }

    Scalar edge_product(int i, int j) const { return at(i, j) * at(j, i); }

    friend bool operator==(const BicharacterMatrix& a, const BicharacterMatrix& b) {
        return a.dim_ == b.dim_ && a.q_ == b.q_;
    }

  private:
    int dim_ = 0;
    std::vector<Scalar> q_;
};

// chi evaluated on integer vectors, bilinear in the exponents
Scalar chi_of(const BicharacterMatrix& m, std::span<const int> x, std::span<const int> y);

// Twist-canonical form: vertex labels q_ii, edge labels q_ij * q_ji.
// An edge is present iff its label differs from 1.
class DynkinDiagram {
  public:
    DynkinDiagram() = default;
    DynkinDiagram(int dim, int modulus = 2520)
        : dim_(dim), vertex_(dim, Scalar::one(modulus)),
          edge_(static_cast<size_t>(dim) * dim, Scalar::one(modulus)) {}

    int dim() const { return dim_; }
    int modulus() const { return dim_ == 0 ? 2520 : vertex_[0].modulus(); }
    Scalar& vertex(int i) { return vertex_[i]; }
    const Scalar& vertex(int i) const { return vertex_[i]; }
    const Scalar& edge(int i, int j) const { return edge_[static_cast<size_t>(i) * dim_ + j]; }
    void set_edge(int i, int j, const Scalar& s) {
        edge_[static_cast<size_t>(i) * dim_ + j] = s;
        edge_[static_cast<size_t>(j) * dim_ + i] = s;
    }
    bool has_edge(int i, int j) const { return !edge(i, j).is_one(); }

    friend bool operator==(const DynkinDiagram& a, const DynkinDiagram& b) {
        return a.dim_ == b.dim_ && a.vertex_ == b.vertex_ && a.edge_ == b.edge_;
    }

    // lexicographically minimal serialization over all vertex permutations;
    // brute force over d! (d stays small here)
    std::vector<long long> canonical_key() const;

    std::string to_json() const;

  private:
    int dim_ = 0;
    std::vector<Scalar> vertex_;
    std::vector<Scalar> edge_;
};

DynkinDiagram to_dynkin(const BicharacterMatrix& m);

// diagram with edge products placed at q_ij (i < j), q_ji = 1
BicharacterMatrix to_matrix(const DynkinDiagram& d);

bool is_connected(const DynkinDiagram& d);

// Cartan type: q_ij q_ji = q_ii^(a_ij) for a generalized Cartan matrix (a_ij).
// Returns the d x d Cartan matrix, or nullopt when no exponents work.
// Requires q_ii != 1 for all i.
std::optional<std::vector<int>> detect_cartan_type(const BicharacterMatrix& m);

// Simple chain C(d, q; i_1 < ... < i_j): the labeled path graph of length d
// with q_{i-1,i} q_{i,i-1} = q exactly at the listed indices (index 1 refers
// to the virtual left edge 1/(q_11^2 q_12 q_21), index d to the defining
// relation q = q_{d-1,d} q_{d,d-1} q_dd^2).
struct SimpleChainSpec {
    int length = 2;
    Scalar q;
    std::vector<int> indices; // strictly increasing, within 1..length
};

DynkinDiagram build_simple_chain(const SimpleChainSpec& spec);

BicharacterMatrix restrict(const BicharacterMatrix& m, const std::vector<int>& subset);

// Line-oriented diagram file, '#' comments:
//   dim D
//   torsion N            (optional, default 2520)
//   gen q generic        or: gen q order K
//   v I SCALAR
//   e I J SCALAR         (q_ij * q_ji := SCALAR; unspecified edges are 1)
// Labels may reference the declared generator as 'q'; such files double as
// one-parameter templates.
class DiagramTemplate {
  public:
    enum class GenKind { none, generic, order };

    int dim() const { return dim_; }
    int torsion() const { return torsion_; }
    GenKind gen_kind() const { return gen_kind_; }
    int gen_order() const { return gen_order_; }

    // parameter the file itself designates: g for generic, zeta_K for order K
    Scalar default_param() const;

    // substitute the parameter; q-free files ignore it
    DynkinDiagram instantiate(const Scalar& param) const;
    BicharacterMatrix instantiate_matrix(const Scalar& param) const;
    DynkinDiagram instantiate_default() const { return instantiate(default_param()); }

    static DiagramTemplate parse(std::istream& in, const std::string& source_name = "<stream>");
    static DiagramTemplate load(const std::string& path);

    // template built from a concrete diagram (no parameter)
    static DiagramTemplate from_diagram(const DynkinDiagram& d);

    std::string to_file_string() const;

  private:
    struct Expr {
        long long qexp = 0;
        int tor = 0;
    };
    Scalar eval(const Expr& e, const Scalar& param) const;

    int dim_ = 0;
    int torsion_ = 2520;
    GenKind gen_kind_ = GenKind::none;
    int gen_order_ = 0;
    std::vector<Expr> vertex_;
    std::vector<std::pair<std::pair<int, int>, Expr>> edges_;
};

} // namespace wg
