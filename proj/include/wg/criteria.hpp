#pragma once

#include "wg/groupoid.hpp"

#include <string>
#include <vector>

namespace wg {

// Outcome of one necessary-condition check. `satisfied` is meaningful only
// when `applicable` (the clause hypothesis matched).
struct PredicateReport {
    std::string name;
    bool applicable = false;
    bool satisfied = false;
    std::string detail;
};

std::string reports_to_json(const std::vector<PredicateReport>& reports);

// Rank 2, connected: if q11*q12q21*q22 = -1 then q11 = -1, q12q21 q22 = 1
// or q22 = -1, q11 q12q21 = 1.
PredicateReport rank2_neg_one_condition(const BicharacterMatrix& m);

// Rank 3, connected: clauses (i)..(ix), one report each, hypotheses and
// conclusions checked verbatim on the matrix as numbered.
std::vector<PredicateReport> rank3_conditions(const BicharacterMatrix& m);

// Rank >= 4 structural graph filters. Each report covers one filter; a filter
// is applicable iff its shape hypothesis occurs in the diagram (pattern
// matching is over induced embeddings, except where the statement is about
// the whole graph).
std::vector<PredicateReport> structural_filters(const BicharacterMatrix& m);

// The sufficient non-representability condition on candidate subsystem roots:
// alpha_j - sum m_i alpha_i stays outside Delta \ {alpha_j} for all m >= 0.
// Returns the first violating j (1-based) or 0.
int subsystem_obstruction(const GroupoidResult& r, const std::vector<RootVec>& roots);

// Conservative variant: the difference must avoid (N_0 E \ {alpha_j}) u -N_0 E.
int subsystem_obstruction_conservative(int dim, const std::vector<RootVec>& roots);

// Bicharacter induced on the sublattice spanned by the given positive roots:
// p_kl = chi(alpha_k, alpha_l). Preconditions: the roots are linearly
// independent members of Delta_E^+ passing subsystem_obstruction.
BicharacterMatrix root_subsystem(const BicharacterMatrix& m, const GroupoidResult& r,
                                 const std::vector<RootVec>& roots);

} // namespace wg
