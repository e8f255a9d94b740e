#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chcalc/graphsum.hpp"

namespace chcalc {

struct RewriteTrace {
    struct Step {
        std::string rule;
        std::string site;
        std::string before;
        int after_terms = 0;
    };
    std::vector<Step> steps;
    void log(const std::string& rule, const std::string& site,
             const std::string& before, int after_terms) {
        steps.push_back({rule, site, before, after_terms});
    }
    std::string str() const;
};

// Every [Pi0] occurrence replaced by Id - QG+ - G+Q; j-flags preserved.
GraphSum expand_pi0(const GraphSum& s, RewriteTrace* trace = nullptr);

// Contract all non-loop Id edges; Id loops are kept.
GraphSum contract_id(const GraphSum& s, RewriteTrace* trace = nullptr);

// Eliminate every Q by vertex integration by parts; terminates via a linear
// solve over the finite reachable graph set. Throws on stall.
GraphSum push_q(const GraphSum& s, RewriteTrace* trace = nullptr);

// Directed kills and the 1/12 supertrace rewrite:
//  - operator chains on H0-valued leaves kill the term,
//  - chains composing to zero kill the term,
//  - a [G-] loop rewrites to 1/12 times the Id-loop supertrace gadget.
GraphSum apply_vanishing(const GraphSum& s, RewriteTrace* trace = nullptr);

// Scatter lone [G-] edges by the second-order (7-term) expansion until each
// is fused or both sides have < 3 slots; gadget-adjacent [G-] edges split
// first-order under the supertrace.
GraphSum apply_seven_term(const GraphSum& s, RewriteTrace* trace = nullptr);

// Full pipeline to the final-graph basis. Throws when a Pi0 or Q survives.
GraphSum normalize(const GraphSum& s, RewriteTrace* trace = nullptr);

// --- shared machinery ---

// One-step expansion: nullopt when the graph is terminal for this stage.
using StepFn =
    std::function<std::optional<std::vector<std::pair<Rat, Graph>>>(const Graph&)>;

// Rewrites every term to the stage's terminal graphs, solving the linear
// system over the reachable set (handles expansion cycles exactly).
GraphSum solve_linear_rewrite(const GraphSum& in, const StepFn& step,
                              const std::string& rule_name,
                              RewriteTrace* trace, int max_states = 20000);

// Cleanup normal form shared by the stages: kills chained H0 leaves,
// contracts non-loop Id edges, fuses degree-2 vertices. Returns sign 0 when
// the term dies.
struct CleanResult {
    int sign = 1;
    Rat factor = 1;
    Graph graph;
};
CleanResult cleanup_term(const Graph& g);

}  // namespace chcalc
