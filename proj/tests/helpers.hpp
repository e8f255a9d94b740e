#pragma once

#include <random>

#include "chcalc/evaluate.hpp"
#include "chcalc/graph.hpp"

namespace chcalc::testing {

inline bool series_equal(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.coeffs.size() != b.coeffs.size()) return false;
    for (const auto& [m, c] : a.coeffs) {
        auto it = b.coeffs.find(m);
        if (it == b.coeffs.end() || it->second != c) return false;
    }
    return true;
}

// Random small connected labeled graph over the given chain alphabet.
// Vertices are degree 3 or 4; non-edge slots become E0 or Basis leaves.
inline Graph random_graph(uint64_t seed, const std::vector<Chain>& chains,
                          int max_h0_index, bool allow_loops = true) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        int V = 1 + (int)(rng() % 3);
        Graph g;
        int h = 0;
        std::vector<int> all;
        for (int v = 0; v < V; ++v) {
            int deg = 3 + (int)(rng() % 2);
            g.verts.emplace_back();
            for (int k = 0; k < deg; ++k) {
                g.verts[v].push_back(h);
                all.push_back(h);
                ++h;
            }
        }
        std::shuffle(all.begin(), all.end(), rng);
        // pair a prefix of slots, leave the rest as leaves
        size_t npair = (all.size() / 2) - (rng() % 2 && all.size() >= 4 ? 1 : 0);
        size_t used = 0;
        for (size_t e = 0; e < npair; ++e) {
            int ha = all[used++], hb = all[used++];
            if (!allow_loops) {
                // naive: skip pairing if a loop arises
            }
            const Chain& c = chains[rng() % chains.size()];
            g.edges.push_back(Edge{ha, hb, c, false});
        }
        for (size_t i = used; i < all.size(); ++i) {
            if (rng() % 2)
                g.leaves[all[i]] = Leaf{LeafKind::E0, -1, {}};
            else
                g.leaves[all[i]] =
                    Leaf{LeafKind::Basis, (int)(rng() % max_h0_index), {}};
        }
        std::string why;
        if (!g.structurally_valid(&why)) continue;
        if (!g.connected()) continue;
        bool bad_loop = false;
        if (!allow_loops)
            for (const auto& e : g.edges)
                if (g.vertex_of(e.ha) == g.vertex_of(e.hb)) bad_loop = true;
        if (bad_loop) continue;
        return g;
    }
    // fall back to something fixed
    return make_tadpole();
}

}  // namespace chcalc::testing
