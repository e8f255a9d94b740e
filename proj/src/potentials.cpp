#include "chcalc/potentials.hpp"

#include <functional>
#include <map>
#include <set>

namespace chcalc {

namespace {

// Distributions of `total` leaves over vertex capacities.
void leaf_distributions(const std::vector<int>& cap, int total,
                        std::vector<std::vector<int>>& out) {
    std::vector<int> cur(cap.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int rem) {
        if (i == cap.size()) {
            if (rem == 0) out.push_back(cur);
            return;
        }
        for (int d = 0; d <= std::min(cap[i], rem); ++d) {
            cur[i] = d;
            rec(i + 1, rem - d);
        }
        cur[i] = 0;
    };
    rec(0, total);
}

// All perfect matchings of the slot list.
void matchings(std::vector<int> slots,
               std::vector<std::vector<std::pair<int, int>>>& out,
               std::vector<std::pair<int, int>>& cur) {
    if (slots.empty()) {
        out.push_back(cur);
        return;
    }
    int a = slots[0];
    for (size_t i = 1; i < slots.size(); ++i) {
        int b = slots[i];
        std::vector<int> rest;
        for (size_t j = 1; j < slots.size(); ++j)
            if (j != i) rest.push_back(slots[j]);
        cur.push_back({a, b});
        matchings(rest, out, cur);
        cur.pop_back();
    }
}

// Generate iso classes over given vertex degrees; degree-4 vertex 0 carries
// an E1 leaf when with_e1 is set.
std::vector<Graph> generate(int nv, int e0_leaves, bool with_e1) {
    std::vector<Graph> reps;
    std::set<std::string> seen;
    std::vector<int> degs(nv, 3);
    if (with_e1) degs[0] = 4;
    std::vector<int> cap(nv);
    for (int v = 0; v < nv; ++v) cap[v] = degs[v] - (with_e1 && v == 0 ? 1 : 0);
    std::vector<std::vector<int>> dists;
    leaf_distributions(cap, e0_leaves, dists);
    for (const auto& dist : dists) {
        Graph base;
        std::vector<int> internal;
        int h = 0;
        for (int v = 0; v < nv; ++v) {
            base.verts.emplace_back();
            int n_leaf = dist[v];
            int n_int = degs[v] - n_leaf - (with_e1 && v == 0 ? 1 : 0);
            for (int k = 0; k < n_int; ++k) {
                base.verts[v].push_back(h);
                internal.push_back(h);
                ++h;
            }
            for (int k = 0; k < n_leaf; ++k) {
                base.verts[v].push_back(h);
                base.leaves[h] = Leaf{LeafKind::E0, -1, {}};
                ++h;
            }
            if (with_e1 && v == 0) {
                base.verts[v].push_back(h);
                base.leaves[h] = Leaf{LeafKind::E1, -1, {}};
                ++h;
            }
        }
        if (internal.size() % 2) continue;
        std::vector<std::vector<std::pair<int, int>>> ms;
        std::vector<std::pair<int, int>> cur;
        matchings(internal, ms, cur);
        for (const auto& m : ms) {
            Graph g = base;
            bool loopless_ok = true;
            for (const auto& [a, b] : m) {
                if (a == b) { loopless_ok = false; break; }
                g.edges.push_back(Edge{a, b, chain_gmgp(), false});
            }
            if (!loopless_ok) continue;
            if (!g.connected()) continue;
            CanonicalGraph cg = canonicalize(g);
            if (seen.insert(cg.encoding).second) reps.push_back(cg.graph);
        }
    }
    return reps;
}

}  // namespace

std::vector<Graph> enumerate_trivalent(int genus, int leaves) {
    // 3V = 2E + L with E = V + genus - 1  =>  V = L + 2 genus - 2
    int nv = leaves + 2 * genus - 2;
    if (nv < 1) return {};
    return generate(nv, leaves, false);
}

GraphSum potential(int genus, int max_leaves) {
    GraphSum s;
    for (int n = 0; n <= max_leaves; ++n)
        for (const Graph& g : enumerate_trivalent(genus, n))
            s.add(g, Rat(1) / Rat(automorphism_count(g)));
    return s;
}

GraphSum potential_descendant(int max_leaves) {
    GraphSum s;
    for (int n = 0; n <= max_leaves; ++n) {
        int nv = n + 2;  // one 4-valent + trivalent rest, genus 2
        for (const Graph& g : generate(nv, n, true))
            s.add(g, Rat(1) / Rat(automorphism_count(g)));
    }
    return s;
}

GraphSum potential_descendant_by_insertion(int max_leaves) {
    GraphSum s;
    for (int n = 0; n <= max_leaves; ++n)
        for (const Graph& g : enumerate_trivalent(2, n)) {
            Rat w = Rat(1) / Rat(automorphism_count(g));
            for (int v = 0; v < (int)g.verts.size(); ++v) {
                Graph e = g;
                int h = 0;
                for (const auto& vv : e.verts)
                    for (int x : vv) h = std::max(h, x + 1);
                e.verts[v].push_back(h);
                e.leaves[h] = Leaf{LeafKind::E1, -1, {}};
                s.add(e, w);
            }
        }
    return s;
}

long tree_class_count(int leaves) {
    if (leaves < 3) return 0;
    std::map<std::string, Graph> cur;
    {
        Graph t = make_tripod();
        cur[canonicalize(t).encoding] = t;
    }
    for (int n = 4; n <= leaves; ++n) {
        std::map<std::string, Graph> next;
        for (const auto& [enc, g] : cur) {
            // split each leaf into a new trivalent vertex with two leaves,
            // and each edge into a vertex with one new leaf
            for (const auto& [h, l] : g.leaves) {
                Graph t = g;
                int base = t.num_half_edges();
                // replace leaf h by an edge to a new vertex with two leaves
                t.leaves.erase(h);
                t.verts.push_back({base, base + 1, base + 2});
                t.edges.push_back(Edge{h, base, chain_gmgp(), false});
                t.leaves[base + 1] = Leaf{LeafKind::E0, -1, {}};
                t.leaves[base + 2] = Leaf{LeafKind::E0, -1, {}};
                next[canonicalize(t).encoding] = t;
            }
            for (size_t ei = 0; ei < g.edges.size(); ++ei) {
                Graph t = g;
                int base = t.num_half_edges();
                Edge e = t.edges[ei];
                t.edges.erase(t.edges.begin() + ei);
                t.verts.push_back({base, base + 1, base + 2});
                t.edges.push_back(Edge{e.ha, base, e.chain, false});
                t.edges.push_back(Edge{base + 1, e.hb, e.chain, false});
                t.leaves[base + 2] = Leaf{LeafKind::E0, -1, {}};
                next[canonicalize(t).encoding] = t;
            }
        }
        cur = std::move(next);
    }
    return (long)cur.size();
}

}  // namespace chcalc
