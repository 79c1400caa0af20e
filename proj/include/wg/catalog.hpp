#pragma once

#include "wg/criteria.hpp"

#include <map>
#include <string>
#include <vector>

namespace wg {

enum class Table { rank4, rank_ge5 };
std::string to_string(Table t);

// admissibility of a row parameter, from manifest constraint strings:
// comma-joined atoms "q^k!=1" or a single "Rn"
struct ParamConstraint {
    std::string text = "q!=1";
    std::vector<long long> nonunit_powers;
    int primitive_order = 0;

    bool admits(const Scalar& p) const;
    static ParamConstraint parse(const std::string& s);
    // generic + one admissible root of unity, or the primitive roots for Rn rows
    std::vector<Scalar> sample_params(int modulus = 2520) const;
};

struct CatalogEntry {
    Table table = Table::rank4;
    int row = 0;
    int diagram = 0; // 1-based index within the row
    int dim = 0;
    std::string file;
    ParamConstraint constraint;
    DiagramTemplate tmpl;

    // constraint-checked instantiation; rejects parameters naming the constraint
    DynkinDiagram instantiate(const Scalar& param) const;
    BicharacterMatrix instantiate_matrix(const Scalar& param) const;
};

struct AppendixEntry {
    Table table = Table::rank4;
    int row = 0;      // table row the word starts from
    int label = 0;    // row label as printed with the word list
    int dim = 0;
    std::vector<int> start_indices; // chain indices of the starting diagram (families)
    ReflectionWord word;
    std::vector<std::string> expected_trace; // printed tuples; empty when none are listed
};

class Catalog {
  public:
    // dir layout: manifest.txt, appendix_a1.txt, appendix_a2.txt, *.gdd
    static Catalog load(const std::string& dir = default_dir());
    static std::string default_dir();

    const std::vector<CatalogEntry>& entries() const { return entries_; }
    const std::vector<AppendixEntry>& appendix() const { return appendix_; }

    const CatalogEntry* find(Table t, int row, int diagram, int dim) const;
    std::vector<const CatalogEntry*> row_entries(Table t, int row, int dim) const;
    std::vector<int> rows(Table t, int dim) const;

  private:
    std::vector<CatalogEntry> entries_;
    std::vector<AppendixEntry> appendix_;
};

// All diagrams a rank>=5 table row contributes at the given dimension and
// parameter, across every admissible index-set choice. Concrete rows (11..22)
// fall back to the catalog files; family rows (1..10) are built from their
// simple-chain constructors. Used by the exhaustive sweep.
std::vector<DynkinDiagram> rank_ge5_row_members(const Catalog& cat, int row, int dim,
                                                const Scalar& param);

// Family constructor behind the manifest files for rows 1..10: diagram
// `which` of the row with the given index set.
DynkinDiagram rank_ge5_family_diagram(int row, int which, int dim, const std::vector<int>& indices,
                                      const Scalar& param);

struct VerifyItem {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyItem> items;
    bool all_ok() const;
    void add(const std::string& name, bool ok, const std::string& detail = "");
    void merge(const VerifyReport& other);
    std::string to_json() const;
    std::string to_text() const;
};

// every diagram of the row explores to full_finite at each sample parameter,
// and same-parameter diagrams are pairwise Weyl equivalent
VerifyReport verify_row(const Catalog& cat, Table t, int row, int dim,
                        const ExploreCaps& caps = {});

// all rows at their catalog dimensions, plus sampled cross-row
// non-equivalence checks
VerifyReport verify_tables(const Catalog& cat, const ExploreCaps& caps = {});

VerifyReport verify_appendix_entry(const Catalog& cat, const AppendixEntry& e,
                                   const ExploreCaps& caps = {});
VerifyReport verify_appendix(const Catalog& cat, const ExploreCaps& caps = {});

struct SweepOptions {
    size_t max_bases = 200000;
    long long max_coeff = 10;
};

struct SweepReport {
    int dim = 0;
    int subgroup = 0; // labels drawn from mu_subgroup
    size_t labelings = 0;
    size_t classes = 0; // connected classes with q_ii != 1, up to permutation
    size_t finite = 0;
    size_t table_instantiations = 0;
    std::vector<std::string> unmatched_survivors;
    std::vector<std::string> missing_instantiations;
    std::vector<std::string> criteria_violations;

    bool clean() const {
        return unmatched_survivors.empty() && missing_instantiations.empty() &&
               criteria_violations.empty();
    }
    std::string to_json() const;
    std::string to_text() const;
};

// Enumerate all connected diagrams over mu_subgroup with q_ii != 1 up to
// vertex permutation, explore each, and reconcile the survivors with the
// catalog tables (both directions) and the criteria predicates.
SweepReport exhaustive_sweep(const Catalog& cat, int dim, int subgroup,
                             const SweepOptions& opts = {});

} // namespace wg
