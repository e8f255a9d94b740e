#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chcalc/evaluate.hpp"
#include "chcalc/graphsum.hpp"
#include "chcalc/rewrite.hpp"
#include "chcalc/series.hpp"

namespace chcalc {

// Dual graph of a boundary stratum: vertices are components with genus
// labels, edges are nodes, marks are the three marked points (as an
// unordered pattern; the relation enumerates their labelings once).
struct DualGraph {
    struct Mark {
        int vertex = 0;
        bool psi = false;
    };
    struct Node {
        int a = 0, b = 0;
        int psi_at = -1;  // vertex carrying the psi-class at its branch, or -1
    };
    std::string name;
    std::vector<int> genus;  // per vertex
    std::vector<Node> edges;
    std::vector<Mark> marks;

    int total_genus() const;
    int codim() const;
    bool valid(std::string* why = nullptr) const;
    std::string canonical_key() const;  // iso-invariant encoding
    std::string str() const;
};

struct Relation {
    std::vector<Rat> coeffs;
    std::vector<DualGraph> strata;
};

// The 20 Belorousski-Pandharipande strata with their coefficients, loaded
// from a strata file (format documented in the README). Delta_1..Delta_3 are
// also available as built-in fixtures and are cross-checked against the file.
Relation bp_relation(std::istream& strata_file);
Relation bp_relation_from_path(const std::string& path);
const std::vector<Rat>& bp_coefficients();
DualGraph fixture_delta1();
DualGraph fixture_delta2();
DualGraph fixture_delta3();

// Parse/write the strata file format.
struct StrataParse {
    std::vector<DualGraph> strata;
    std::string error;
    int line = 0;
};
StrataParse parse_strata(std::istream& in);
std::string write_strata(const std::vector<DualGraph>& ds);

// All valid codim-2 candidates (psi only at genus-2 vertices), up to iso.
std::vector<DualGraph> enumerate_candidate_strata();

// Structured differential translation of a stratum (used by the numeric
// driver and for inspection).
struct DiffExpression {
    DualGraph stratum;
    // each distinct assignment of labels {a,b,c}=(0,1,2) to the three marks
    std::vector<std::vector<int>> labelings;
    std::string str() const;
};
DiffExpression to_differential(const DualGraph& d);

// Formal zero-point graph sum of the stratum: external legs for marks, Pi0
// bridges for nodes, blocks drawn from the potentials. Output is in the
// display convention: each graph carries 1/|Aut| with the three external
// legs mutually interchangeable.
GraphSum at_zero(const DualGraph& d);

struct CoefficientTable {
    std::vector<std::string> rows;           // stratum names
    std::vector<std::string> cols;           // canonical final-graph encodings
    std::vector<std::vector<Rat>> entries;   // rows x cols
    // mapping: canonical encoding -> human name (optional)
    std::string tsv(const std::map<std::string, std::string>& names = {},
                    bool print_zero = true) const;
};

struct BpSymbolicResult {
    GraphSum residual;
    CoefficientTable table;
    std::vector<GraphSum> normalized;  // per stratum
    bool ok() const { return residual.empty(); }
    std::string failure_report() const;
};
BpSymbolicResult verify_bp_symbolic(const Relation& rel,
                                    RewriteTrace* trace = nullptr);

// Truncated-series check on a concrete instance (requires all-even H0).
struct BpNumericResult {
    bool zero = true;
    TruncatedSeries first_nonzero;  // meaningful when !zero
    std::string report;
};
BpNumericResult verify_bp_numeric(const Relation& rel, const AlgebraInstance& a,
                                  int degree);

// Series of a potential: sum over graphs of coeff * dressed evaluation.
TruncatedSeries series_potential(int genus, const EvalContext& ctx);
TruncatedSeries series_descendant(const EvalContext& ctx);

// Numeric value of the stratum's differential expression with external marks
// bound to the H0 directions (a,b,c); used by the zero-point cross-check.
TruncatedSeries stratum_series(const DualGraph& d, const EvalContext& ctx,
                               int a, int b, int c);

// Value of a display-convention zero-point sum at concrete external indices
// (sums the graph over all 3! leg assignments).
Rat evaluate_zero_point(const GraphSum& s, const EvalContext& ctx, int a,
                        int b, int c);

}  // namespace chcalc
