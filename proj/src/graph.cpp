#include "chcalc/graph.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace chcalc {

int Graph::num_half_edges() const {
    int n = 0;
    for (const auto& v : verts) n += (int)v.size();
    return n;
}

int Graph::vertex_of(int h) const {
    for (int v = 0; v < (int)verts.size(); ++v)
        for (int s : verts[v])
            if (s == h) return v;
    return -1;
}

int Graph::slot_of(int h) const {
    for (const auto& v : verts)
        for (int i = 0; i < (int)v.size(); ++i)
            if (v[i] == h) return i;
    return -1;
}

const Edge* Graph::edge_at(int h) const {
    for (const auto& e : edges)
        if (e.ha == h || e.hb == h) return &e;
    return nullptr;
}

Edge* Graph::edge_at(int h) {
    for (auto& e : edges)
        if (e.ha == h || e.hb == h) return &e;
    return nullptr;
}

int Graph::partner(int h) const {
    const Edge* e = edge_at(h);
    if (!e) return -1;
    return e->ha == h ? e->hb : e->ha;
}

bool Graph::structurally_valid(std::string* why) const {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    std::map<int, int> owner;
    for (int v = 0; v < (int)verts.size(); ++v)
        for (int h : verts[v]) {
            if (owner.count(h)) return fail("half-edge in two slots");
            owner[h] = v;
        }
    std::map<int, int> touch;
    for (const auto& e : edges) {
        if (!owner.count(e.ha) || !owner.count(e.hb))
            return fail("edge end not in any vertex");
        if (e.ha == e.hb) return fail("edge pairing not fixed-point-free");
        touch[e.ha]++;
        touch[e.hb]++;
    }
    for (const auto& [h, l] : leaves) {
        if (!owner.count(h)) return fail("leaf half-edge not in any vertex");
        touch[h]++;
    }
    for (const auto& [h, v] : owner)
        if (touch[h] != 1) return fail("half-edge not exactly one of edge-end/leaf");
    return true;
}

bool Graph::connected() const {
    if (verts.empty()) return true;
    std::vector<char> seen(verts.size(), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int h : verts[v]) {
            int p = partner(h);
            if (p < 0) continue;
            int w = vertex_of(p);
            if (!seen[w]) {
                seen[w] = 1;
                ++cnt;
                stack.push_back(w);
            }
        }
    }
    return cnt == (int)verts.size();
}

int Graph::genus() const {
    if (!connected()) throw std::invalid_argument("genus: disconnected graph");
    return (int)edges.size() - (int)verts.size() + 1;
}

void Graph::compact_ids() {
    std::map<int, int> remap;
    int next = 0;
    for (auto& v : verts)
        for (int& h : v) {
            remap[h] = next++;
            h = remap[h];
        }
    for (auto& e : edges) {
        e.ha = remap.at(e.ha);
        e.hb = remap.at(e.hb);
    }
    std::map<int, Leaf> nl;
    for (auto& [h, l] : leaves) nl[remap.at(h)] = l;
    leaves = std::move(nl);
}

namespace {

std::string leaf_token(const Leaf& l) {
    std::string t = "L";
    switch (l.kind) {
        case LeafKind::E0: t += "0"; break;
        case LeafKind::E1: t += "1"; break;
        case LeafKind::Basis: t += "B" + std::to_string(l.index); break;
        case LeafKind::External: t += "X"; break;
    }
    if (!l.chain.is_id()) t += ":" + l.chain.str();
    return t;
}

// Presentation of an edge for encoding: canonical word, symmetry mode, and
// whether the op end is ha under the canonical presentation.
struct EdgePres {
    std::string word;
    char mode;       // 's' flip-symmetric, 'a' flip-antisymmetric, 'o' oriented
    bool op_is_ha;   // for mode 'o': canonical orientation
    int flip_sign;   // sign of flip(chain)
};

EdgePres edge_presentation(const Edge& e) {
    EdgePres p;
    SignedChain f = flip(e.chain);
    std::string w1 = e.chain.str();
    std::string w2 = f.chain.str();
    p.flip_sign = f.sign;
    if (w1 == w2) {
        p.mode = f.sign == 1 ? 's' : 'a';
        p.word = w1;
        p.op_is_ha = true;
    } else {
        p.mode = 'o';
        if (w1 <= w2) {
            p.word = w1;
            p.op_is_ha = true;
        } else {
            p.word = w2;
            p.op_is_ha = false;
        }
    }
    return p;
}

struct CanonSearch {
    const Graph& g;
    int V, H;
    std::vector<int> h_vertex;                 // half-edge -> vertex
    std::vector<const Edge*> h_edge;           // half-edge -> edge or null
    std::vector<const Leaf*> h_leaf;

    std::vector<int> vorder;                   // placed vertices
    std::vector<char> vplaced;
    std::vector<int> hnum;                     // half-edge -> new number or -1
    std::vector<std::string> tokens;

    std::vector<std::string> best;
    bool have_best = false;
    std::set<int> best_signs;
    std::vector<int> best_vorder;
    std::vector<std::vector<int>> best_slots;  // per placed vertex: slot order (half-edge ids)
    std::vector<std::vector<int>> cur_slots;

    explicit CanonSearch(const Graph& gr) : g(gr) {
        V = (int)g.verts.size();
        H = 0;
        for (const auto& v : g.verts)
            for (int h : v) H = std::max(H, h + 1);
        h_vertex.assign(H, -1);
        h_edge.assign(H, nullptr);
        h_leaf.assign(H, nullptr);
        for (int v = 0; v < V; ++v)
            for (int h : g.verts[v]) h_vertex[h] = v;
        for (const auto& e : g.edges) {
            h_edge[e.ha] = &e;
            h_edge[e.hb] = &e;
        }
        for (const auto& [h, l] : g.leaves) h_leaf[h] = &l;
        vplaced.assign(V, 0);
        hnum.assign(H, -1);
    }

    // -1: current < best prefix so far (strictly better), 0: equal so far,
    // +1: worse (prune).
    int cmp_state = 0;

    std::string slot_token(int h) const {
        if (h_leaf[h]) return leaf_token(*h_leaf[h]);
        const Edge* e = h_edge[h];
        int o = e->ha == h ? e->hb : e->ha;
        if (hnum[o] < 0) return "E?";
        EdgePres p = edge_presentation(*e);
        std::string t = "E" + std::to_string(hnum[o]) + ":" + p.word + ":" + p.mode;
        if (p.mode == 'o') {
            bool op_here = p.op_is_ha ? (e->ha == h) : (e->hb == h);
            t += op_here ? ":1" : ":0";
        }
        if (e->jflag) t += ":J";
        return t;
    }

    int assignment_sign() const {
        int sign = 1;
        for (const auto& e : g.edges) {
            EdgePres p = edge_presentation(e);
            if (p.mode == 'o') {
                // Canonical representative keeps the canonical orientation.
                if (!p.op_is_ha) sign *= p.flip_sign;
            } else {
                // Representative puts the op end on the earlier-numbered
                // half-edge; 'a' edges flip with sign -1.
                if (hnum[e.ha] > hnum[e.hb]) sign *= p.flip_sign;
            }
        }
        return sign;
    }

    void complete() {
        if (cmp_state > 0) return;
        int sign = assignment_sign();
        if (!have_best || cmp_state < 0) {
            best = tokens;
            have_best = true;
            best_signs = {sign};
            best_vorder = vorder;
            best_slots = cur_slots;
        } else {
            best_signs.insert(sign);
        }
    }

    void place_vertex(int v, std::vector<int>& slots, size_t si,
                      int saved_cmp, int next_num);

    void recurse() {
        if ((int)vorder.size() == V) {
            complete();
            return;
        }
        // Candidates: unplaced vertices adjacent to placed ones, else all.
        std::set<int> cand;
        for (int v : vorder)
            for (int h : g.verts[v]) {
                int o = partner_of(h);
                if (o >= 0 && !vplaced[h_vertex[o]]) cand.insert(h_vertex[o]);
            }
        if (cand.empty())
            for (int v = 0; v < V; ++v)
                if (!vplaced[v]) cand.insert(v);
        int next_num = 0;
        for (int h = 0; h < H; ++h)
            if (hnum[h] >= 0) ++next_num;
        for (int v : cand) {
            std::vector<int> slots = g.verts[v];
            int saved_cmp = cmp_state;
            size_t tok0 = tokens.size();
            vorder.push_back(v);
            vplaced[v] = 1;
            cur_slots.emplace_back();
            emit("v" + std::to_string(slots.size()));
            if (cmp_state <= 0) {
                std::sort(slots.begin(), slots.end());
                place_vertex(v, slots, 0, cmp_state, next_num);
            }
            tokens.resize(tok0);
            cur_slots.pop_back();
            vplaced[v] = 0;
            vorder.pop_back();
            cmp_state = saved_cmp;
        }
    }

    int partner_of(int h) const {
        const Edge* e = h_edge[h];
        if (!e) return -1;
        return e->ha == h ? e->hb : e->ha;
    }

    void emit(const std::string& t) {
        if (cmp_state == 0 && have_best) {
            size_t i = tokens.size();
            if (i >= best.size())
                cmp_state = 1;  // longer than best at equal prefix: worse
            else if (t < best[i])
                cmp_state = -1;
            else if (t > best[i])
                cmp_state = 1;
        }
        tokens.push_back(t);
    }
};

void CanonSearch::place_vertex(int v, std::vector<int>& slots, size_t si,
                               int saved_cmp_unused, int next_num) {
    (void)saved_cmp_unused;
    if (si == slots.size()) {
        recurse();
        return;
    }
    // Try each remaining slot in position si; dedup identical tokens at the
    // same recursion point (they lead to identical-prefix subtrees only when
    // tokens are "E?"-unresolved for distinct edges, which still need both
    // orders; so dedup only exact same half-edge).
    std::set<std::string> tried;
    for (size_t k = si; k < slots.size(); ++k) {
        std::swap(slots[si], slots[k]);
        int h = slots[si];
        std::string t = slot_token(h);
        bool skip = false;
        if (t != "E?" && h_leaf[h]) {
            // identical leaf tokens give identical subtrees
            if (tried.count(t)) skip = true;
        }
        if (!skip) {
            tried.insert(t);
            int saved = cmp_state;
            size_t tok0 = tokens.size();
            emit(t);
            hnum[h] = next_num;
            cur_slots.back().push_back(h);
            if (cmp_state <= 0) place_vertex(v, slots, si + 1, saved, next_num + 1);
            cur_slots.back().pop_back();
            hnum[h] = -1;
            tokens.resize(tok0);
            cmp_state = saved;
        }
        std::swap(slots[si], slots[k]);
    }
}

}  // namespace

CanonicalGraph canonicalize(const Graph& g) {
    std::string why;
    if (!g.structurally_valid(&why))
        throw std::invalid_argument("canonicalize: " + why);
    CanonSearch s(g);
    s.recurse();
    CanonicalGraph out;
    std::ostringstream enc;
    for (size_t i = 0; i < s.best.size(); ++i) {
        if (i) enc << "|";
        enc << s.best[i];
    }
    out.encoding = enc.str();
    if (s.best_signs.size() > 1)
        out.sign = 0;
    else
        out.sign = s.best_signs.empty() ? 1 : *s.best_signs.begin();

    // Rebuild the canonical representative from the winning assignment.
    Graph c;
    std::map<int, int> renum;
    int next = 0;
    for (const auto& sl : s.best_slots) {
        c.verts.emplace_back();
        for (int h : sl) {
            renum[h] = next;
            c.verts.back().push_back(next);
            ++next;
        }
    }
    for (const auto& e : g.edges) {
        EdgePres p = edge_presentation(e);
        Edge ne;
        ne.jflag = e.jflag;
        int na = renum.at(e.ha), nb = renum.at(e.hb);
        bool keep;
        if (p.mode == 'o')
            keep = p.op_is_ha;
        else
            keep = na < nb;
        if (keep) {
            ne.ha = na;
            ne.hb = nb;
            ne.chain = e.chain;
        } else {
            ne.ha = nb;
            ne.hb = na;
            ne.chain = flip(e.chain).chain;
        }
        c.edges.push_back(ne);
    }
    for (const auto& [h, l] : g.leaves) c.leaves[renum.at(h)] = l;
    out.graph = std::move(c);
    return out;
}

namespace {

struct AutSearch {
    const Graph& a;
    const Graph& b;
    const std::set<int>& fixed;
    int H = 0;
    std::vector<int> map;  // a half-edge -> b half-edge or -1
    std::vector<char> used;
    std::vector<int> h_vertex_a, h_vertex_b;
    std::vector<const Edge*> h_edge_a, h_edge_b;
    std::vector<const Leaf*> h_leaf_a, h_leaf_b;
    std::vector<int> vmap;  // a vertex -> b vertex
    long count = 0;      // maps with total flip sign +1
    long count_any = 0;  // maps regardless of sign

    AutSearch(const Graph& ga, const Graph& gb, const std::set<int>& fx)
        : a(ga), b(gb), fixed(fx) {
        for (const auto& v : a.verts)
            for (int h : v) H = std::max(H, h + 1);
        for (const auto& v : b.verts)
            for (int h : v) H = std::max(H, h + 1);
        auto index = [&](const Graph& g, std::vector<int>& hv,
                         std::vector<const Edge*>& he,
                         std::vector<const Leaf*>& hl) {
            hv.assign(H, -1);
            he.assign(H, nullptr);
            hl.assign(H, nullptr);
            for (int v = 0; v < (int)g.verts.size(); ++v)
                for (int h : g.verts[v]) hv[h] = v;
            for (const auto& e : g.edges) {
                he[e.ha] = &e;
                he[e.hb] = &e;
            }
            for (const auto& [h, l] : g.leaves) hl[h] = &l;
        };
        index(a, h_vertex_a, h_edge_a, h_leaf_a);
        index(b, h_vertex_b, h_edge_b, h_leaf_b);
        map.assign(H, -1);
        used.assign(H, 0);
        vmap.assign(a.verts.size(), -1);
    }

    static bool leaves_match(const Leaf& x, const Leaf& y) {
        if (x.kind != y.kind) return false;
        if (x.kind == LeafKind::Basis && x.index != y.index) return false;
        return x.chain == y.chain;
    }

    // Check edge consistency for a newly closed pair; accumulates sign.
    bool edge_ok(const Edge* ea, int sign_in, int& sign_out) const {
        int pa = map[ea->ha], pb = map[ea->hb];
        const Edge* eb = h_edge_b[pa];
        if (!eb || h_edge_b[pb] != eb) return false;
        if (ea->jflag != eb->jflag) return false;
        sign_out = sign_in;
        if (eb->ha == pa && eb->hb == pb) {
            if (!(eb->chain == ea->chain)) return false;
        } else if (eb->ha == pb && eb->hb == pa) {
            SignedChain f = flip(ea->chain);
            if (!(f.chain == eb->chain)) return false;
            sign_out = sign_in * f.sign;
        } else {
            return false;
        }
        return true;
    }

    void extend(size_t hi, int sign) {
        // next unmapped half-edge of a (vertex-major order)
        int h = -1;
        int idx = 0;
        for (const auto& v : a.verts) {
            for (int x : v) {
                if (map[x] < 0) {
                    h = x;
                    break;
                }
                ++idx;
            }
            if (h >= 0) break;
        }
        (void)hi;
        if (h < 0) {
            if (sign > 0) ++count;
            ++count_any;
            return;
        }
        int va = h_vertex_a[h];
        for (int w : candidate_targets(h)) {
            int vb = h_vertex_b[w];
            int saved_vmap = vmap[va];
            if (vmap[va] >= 0 && vmap[va] != vb) continue;
            // vertex map must be injective
            bool taken = false;
            if (vmap[va] < 0) {
                for (int x = 0; x < (int)vmap.size(); ++x)
                    if (vmap[x] == vb) taken = true;
                if (taken) continue;
                if (a.verts[va].size() != b.verts[vb].size()) continue;
                vmap[va] = vb;
            }
            map[h] = w;
            used[w] = 1;
            bool ok = true;
            int s2 = sign;
            if (h_leaf_a[h]) {
                ok = h_leaf_b[w] && leaves_match(*h_leaf_a[h], *h_leaf_b[w]);
                if (ok && fixed.count(h) && w != h) ok = false;
            } else {
                const Edge* ea = h_edge_a[h];
                if (!h_edge_b[w])
                    ok = false;
                else {
                    int o = ea->ha == h ? ea->hb : ea->ha;
                    if (map[o] >= 0) ok = edge_ok(ea, sign, s2);
                }
            }
            if (ok) extend(hi + 1, s2);
            used[w] = 0;
            map[h] = -1;
            vmap[va] = saved_vmap;
        }
    }

    std::vector<int> candidate_targets(int h) const {
        std::vector<int> out;
        int va = h_vertex_a[h];
        if (vmap[va] >= 0) {
            for (int w : b.verts[vmap[va]])
                if (!used[w]) out.push_back(w);
        } else {
            for (const auto& v : b.verts)
                for (int w : v)
                    if (!used[w]) out.push_back(w);
        }
        return out;
    }
};

}  // namespace

long automorphism_count(const Graph& g, const std::set<int>& fixed) {
    AutSearch s(g, g, fixed);
    s.extend(0, 1);
    return s.count;
}

bool isomorphic_bruteforce(const Graph& a, const Graph& b) {
    if (a.verts.size() != b.verts.size() || a.edges.size() != b.edges.size() ||
        a.leaves.size() != b.leaves.size())
        return false;
    static const std::set<int> none;
    AutSearch s(a, b, none);
    s.extend(0, 1);
    return s.count_any > 0;
}

Graph contract_edge(const Graph& g, int edge_index) {
    const Edge& e = g.edges[edge_index];
    if (!e.chain.is_id())
        throw std::invalid_argument("contract_edge: non-Id chain");
    int va = g.vertex_of(e.ha), vb = g.vertex_of(e.hb);
    if (va == vb) throw std::invalid_argument("contract_edge: loop");
    Graph out;
    out.leaves = g.leaves;
    for (int v = 0; v < (int)g.verts.size(); ++v) {
        if (v == vb) continue;
        std::vector<int> slots;
        for (int h : g.verts[v])
            if (h != e.ha && h != e.hb) slots.push_back(h);
        if (v == va)
            for (int h : g.verts[vb])
                if (h != e.ha && h != e.hb) slots.push_back(h);
        out.verts.push_back(std::move(slots));
    }
    for (int i = 0; i < (int)g.edges.size(); ++i)
        if (i != edge_index) out.edges.push_back(g.edges[i]);
    out.compact_ids();
    return out;
}

SurgeryResult fuse_through_vertex(const Graph& g, int v) {
    if (g.verts[v].size() != 2)
        throw std::invalid_argument("fuse_through_vertex: degree != 2");
    int p = g.verts[v][0], q = g.verts[v][1];
    const Edge* e1 = g.edge_at(p);
    const Edge* e2 = g.edge_at(q);
    if (!e1 || !e2 || e1 == e2)
        throw std::invalid_argument("fuse_through_vertex: needs two distinct edges");
    int sign = 1;
    // e1 delivers the raw end at p, op end at x.
    Chain c1 = e1->chain;
    int x;
    if (e1->hb == p) {
        x = e1->ha;
    } else {
        SignedChain f = flip(c1);
        sign *= f.sign;
        c1 = f.chain;
        x = e1->hb;
    }
    // e2 delivers the op end at q, raw end at y.
    Chain c2 = e2->chain;
    int y;
    if (e2->ha == q) {
        y = e2->hb;
    } else {
        SignedChain f = flip(c2);
        sign *= f.sign;
        c2 = f.chain;
        y = e2->ha;
    }
    SignedChain comp = compose(c1, c2);
    SurgeryResult res;
    res.sign = sign * comp.sign;
    if (res.sign == 0) return res;

    Graph out;
    out.leaves = g.leaves;
    for (int w = 0; w < (int)g.verts.size(); ++w) {
        if (w == v) continue;
        out.verts.push_back(g.verts[w]);
    }
    for (const auto& e : g.edges) {
        if (&e == e1 || &e == e2) continue;
        out.edges.push_back(e);
    }
    Edge ne;
    ne.ha = x;
    ne.hb = y;
    ne.chain = comp.chain;
    out.edges.push_back(ne);
    out.compact_ids();
    res.graph = std::move(out);
    return res;
}

SurgeryResult compose_at(const Graph& g, int h, Op p) {
    SurgeryResult res;
    res.graph = g;
    Edge* e = res.graph.edge_at(h);
    if (e) {
        if (e->hb == h) {
            SignedChain f = flip(e->chain);
            res.sign *= f.sign;
            e->chain = f.chain;
            std::swap(e->ha, e->hb);
        }
        SignedChain c = compose(Chain{{p}}, e->chain);
        res.sign *= c.sign;
        e->chain = c.chain;
    } else {
        auto it = res.graph.leaves.find(h);
        if (it == res.graph.leaves.end())
            throw std::invalid_argument("compose_at: no edge or leaf at half-edge");
        SignedChain c = compose(Chain{{p}}, it->second.chain);
        res.sign *= c.sign;
        it->second.chain = c.chain;
    }
    return res;
}

SurgeryResult reorder_randomly(const Graph& g, uint64_t seed) {
    std::mt19937_64 rng(seed);
    SurgeryResult res;
    res.graph = g;
    Graph& o = res.graph;
    std::shuffle(o.verts.begin(), o.verts.end(), rng);
    for (auto& v : o.verts) std::shuffle(v.begin(), v.end(), rng);
    for (auto& e : o.edges) {
        if (rng() & 1) {
            SignedChain f = flip(e.chain);
            res.sign *= f.sign;
            e.chain = f.chain;
            std::swap(e.ha, e.hb);
        }
    }
    std::shuffle(o.edges.begin(), o.edges.end(), rng);
    return res;
}

Graph make_tripod() {
    Graph g;
    g.verts = {{0, 1, 2}};
    g.leaves[0] = Leaf{LeafKind::E0, -1, {}};
    g.leaves[1] = Leaf{LeafKind::E0, -1, {}};
    g.leaves[2] = Leaf{LeafKind::E0, -1, {}};
    return g;
}

Graph make_theta() {
    Graph g;
    g.verts = {{0, 1, 2}, {3, 4, 5}};
    for (int i = 0; i < 3; ++i)
        g.edges.push_back(Edge{i, 3 + i, chain_gmgp(), false});
    return g;
}

Graph make_dumbbell() {
    Graph g;
    g.verts = {{0, 1, 2}, {3, 4, 5}};
    g.edges.push_back(Edge{0, 1, chain_gmgp(), false});  // loop at v0
    g.edges.push_back(Edge{3, 4, chain_gmgp(), false});  // loop at v1
    g.edges.push_back(Edge{2, 5, chain_gmgp(), false});  // bridge
    return g;
}

Graph make_tadpole() {
    Graph g;
    g.verts = {{0, 1, 2}};
    g.edges.push_back(Edge{0, 1, chain_gmgp(), false});
    g.leaves[2] = Leaf{LeafKind::E0, -1, {}};
    return g;
}

std::string graph_debug(const Graph& g) {
    std::ostringstream os;
    os << "V=" << g.verts.size() << " E=" << g.edges.size() << "\n";
    for (int v = 0; v < (int)g.verts.size(); ++v) {
        os << "  v" << v << ":";
        for (int h : g.verts[v]) {
            os << " " << h;
            if (auto it = g.leaves.find(h); it != g.leaves.end())
                os << "(" << leaf_token(it->second) << ")";
        }
        os << "\n";
    }
    for (const auto& e : g.edges)
        os << "  e " << e.ha << "-" << e.hb << " " << e.chain.str()
           << (e.jflag ? " J" : "") << "\n";
    return os.str();
}

}  // namespace chcalc
