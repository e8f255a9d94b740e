#pragma once

#include <vector>

#include "chcalc/graph.hpp"
#include "chcalc/graphsum.hpp"

namespace chcalc {

// Isomorphism-class representatives of connected trivalent graphs of the
// given genus with `leaves` E0 leaves; edges carry [G-G+].
std::vector<Graph> enumerate_trivalent(int genus, int leaves);

// Sum over enumerate_trivalent(genus, n <= max_leaves) weighted by 1/|Aut|.
GraphSum potential(int genus, int max_leaves);

// Genus-2 graphs with exactly one 4-valent vertex carrying one E1 leaf, all
// other vertices trivalent and all other leaves E0; weight 1/|Aut fixing the
// E1 leaf|. Total E0 count <= max_leaves.
GraphSum potential_descendant(int max_leaves);

// The alternative construction: insert an E1 leaf at every vertex of every
// potential(2, .) graph, keeping the 1/|Aut| weight of the source graph.
GraphSum potential_descendant_by_insertion(int max_leaves);

// Independent oracle: trivalent trees with n unlabeled leaves generated by
// repeated leaf insertion (not by pairings).
long tree_class_count(int leaves);

}  // namespace chcalc
