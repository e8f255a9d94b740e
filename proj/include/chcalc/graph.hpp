#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chcalc/chain.hpp"

namespace chcalc {

enum class LeafKind : uint8_t { E0, E1, Basis, External };

struct Leaf {
    LeafKind kind = LeafKind::E0;
    int index = -1;   // basis index for Basis leaves
    Chain chain;      // operator applied to the leaf vector (rewrite-internal)

    bool operator==(const Leaf& o) const {
        return kind == o.kind && index == o.index && chain == o.chain;
    }
};

struct Edge {
    int ha = -1;  // operator end: tensor is sum_k chain(f_k)@ha (x) f^k@hb
    int hb = -1;
    Chain chain;        // empty = Id
    bool jflag = false; // J-dressing marker (evaluation-time copies only)
};

// Labeled multigraph with ordered half-edge slots. Half-edge ids are dense
// 0..H-1; every id appears in exactly one vertex slot, and is either one end
// of exactly one edge or carries a leaf.
struct Graph {
    std::vector<std::vector<int>> verts;
    std::vector<Edge> edges;
    std::map<int, Leaf> leaves;

    int num_half_edges() const;
    int vertex_of(int h) const;
    int slot_of(int h) const;             // position within its vertex
    const Edge* edge_at(int h) const;     // nullptr if leaf
    Edge* edge_at(int h);
    int partner(int h) const;             // -1 for leaves
    int degree(int v) const { return (int)verts[v].size(); }

    bool structurally_valid(std::string* why = nullptr) const;
    bool connected() const;
    int genus() const;  // E - V + 1, internal edges only

    // Canonical renumbering of half-edge ids to (vertex, slot) order.
    void compact_ids();
};

struct CanonicalGraph {
    std::string encoding;
    int sign = 1;       // 0 when the graph is odd under one of its own symmetries
    Graph graph;        // canonical representative (ids in canonical order)
};

// Deterministic isomorphism-invariant encoding; sign is the product of edge
// orientation-flip signs incurred while relabeling into canonical form.
// External leaves are mutually interchangeable, as are E0 leaves.
CanonicalGraph canonicalize(const Graph& g);

// Order of the label-preserving automorphism group fixing each listed leaf
// half-edge individually. Orientation-reversals of antisymmetric edges count
// with their sign: maps with total sign -1 are not counted here but force
// canonicalize().sign == 0.
long automorphism_count(const Graph& g, const std::set<int>& fixed = {});

// Brute-force isomorphism over all vertex/half-edge bijections; independent
// oracle for the canonical encoding.
bool isomorphic_bruteforce(const Graph& a, const Graph& b);

// --- surgery helpers used by the rewrite engine ---

// Contract a non-loop edge, merging its endpoints. The edge chain must be Id.
Graph contract_edge(const Graph& g, int edge_index);

// Remove a degree-2 vertex whose two slots are ends of two distinct edges,
// fusing them into one edge; returns the sign collected from flips/reductions
// (0 if the fused chain vanishes).
struct SurgeryResult {
    int sign = 1;
    Graph graph;
};
SurgeryResult fuse_through_vertex(const Graph& g, int v);

// Compose a primitive at the given half-edge of an edge (at whichever end h
// is), keeping the stored orientation; returns the flip/reduction sign.
SurgeryResult compose_at(const Graph& g, int h, Op p);

// Random structure-preserving reshuffle (vertex order, slot order, edge
// orientations) used by the invariance tests; sign is the flip sign product.
SurgeryResult reorder_randomly(const Graph& g, uint64_t seed);

// --- small fixture builders ---
Graph make_tripod();                    // one vertex, three E0 leaves
Graph make_theta();                     // two vertices, three GmGp edges
Graph make_dumbbell();                  // two GmGp loops joined by a GmGp edge
Graph make_tadpole();                   // one vertex, GmGp loop + one E0 leaf

std::string graph_debug(const Graph& g);

}  // namespace chcalc
