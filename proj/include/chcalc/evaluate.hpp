#pragma once

#include <map>

#include "chcalc/algebra.hpp"
#include "chcalc/graph.hpp"
#include "chcalc/series.hpp"

namespace chcalc {

// Evaluation context: an algebra instance with its derived operators, plus
// cached bivector matrices per chain.
struct EvalContext {
    AlgebraInstance alg;
    DerivedOperators ops;
    int cap = 6;

    explicit EvalContext(const AlgebraInstance& a, int trunc_cap = 6);

    Mat op_matrix(Op p) const;
    Mat chain_matrix(const Chain& c) const;   // composite operator
    const Mat& bivector(const Chain& c) const;  // chain_matrix * pairingInv

    int h0_count() const { return (int)ops.h0parity.size(); }
    Vec h0_vector(int i) const;  // i-th H0 basis vector in the full basis

private:
    mutable std::map<std::string, Mat> bivec_cache_;
};

// Marks the complement of a greedily chosen spanning tree with j-flags
// (every loop is always in the complement). The seeded variant shuffles the
// tree preference; used by the tree-choice invariance tests.
Graph insert_J(const Graph& g);
Graph insert_J(const Graph& g, uint64_t tree_seed);

// Contracts the labeled graph over the instance. External leaves must be
// bound to H0 directions via `external` (half-edge id -> H0 index). E0/E1
// leaves produce T-variable factors. The j-flags on edges are honored
// (chain dressed with J); use evaluate_dressed for the honest value of a
// stored flag-free graph.
TruncatedSeries evaluate(const Graph& g, const EvalContext& ctx,
                         const std::map<int, int>& external = {});

TruncatedSeries evaluate_dressed(const Graph& g, const EvalContext& ctx,
                                 const std::map<int, int>& external = {});

}  // namespace chcalc
