#include "chcalc/evaluate.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace chcalc {

EvalContext::EvalContext(const AlgebraInstance& a, int trunc_cap)
    : alg(a), ops(derive_operators(a)), cap(trunc_cap) {}

Mat EvalContext::op_matrix(Op p) const {
    switch (p) {
        case Op::Q: return alg.Q;
        case Op::Gm: return alg.Gm;
        case Op::Gp: return ops.Gp;
        case Op::Pi0: return ops.Pi0;
        case Op::J: return ops.J;
    }
    return {};
}

Mat EvalContext::chain_matrix(const Chain& c) const {
    Mat m = mat_identity(alg.dim);
    for (Op p : c.word) m = mat_mul(m, op_matrix(p));
    return m;
}

const Mat& EvalContext::bivector(const Chain& c) const {
    std::string key = c.str();
    auto it = bivec_cache_.find(key);
    if (it != bivec_cache_.end()) return it->second;
    Mat m = mat_mul(chain_matrix(c), ops.pairingInv);
    return bivec_cache_.emplace(key, std::move(m)).first->second;
}

Vec EvalContext::h0_vector(int i) const {
    Vec v(alg.dim, 0);
    for (int r = 0; r < alg.dim; ++r) v[r] = ops.h0vectors[r][i];
    return v;
}

Graph insert_J(const Graph& g, uint64_t tree_seed) {
    if (!g.connected()) throw std::invalid_argument("insert_J: disconnected");
    Graph out = g;
    int V = (int)g.verts.size();
    std::vector<int> order(g.edges.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    if (tree_seed) {
        std::mt19937_64 rng(tree_seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::vector<char> seen(V, 0);
    std::vector<char> in_tree(g.edges.size(), 0);
    seen[0] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int i : order) {
            if (in_tree[i]) continue;
            int va = g.vertex_of(g.edges[i].ha);
            int vb = g.vertex_of(g.edges[i].hb);
            if (va == vb) continue;
            if (seen[va] != seen[vb]) {
                in_tree[i] = 1;
                seen[va] = seen[vb] = 1;
                grew = true;
            }
        }
    }
    for (size_t i = 0; i < out.edges.size(); ++i)
        out.edges[i].jflag = !in_tree[i];
    return out;
}

Graph insert_J(const Graph& g) { return insert_J(g, 0); }

namespace {

struct LeafOption {
    int comp;   // basis component index
    Rat weight;
    int tvar;   // -1 or variable id
};

struct Enumerator {
    const Graph& g;
    const EvalContext& ctx;
    int dim;
    std::vector<int> order;          // half-edges in evalpos order
    std::map<int, int> pos;          // half-edge -> evalpos
    std::map<int, int> vert_of;      // half-edge -> vertex
    std::map<int, const Edge*> edge_of;
    std::vector<const Edge*> edge_list;
    std::map<const Edge*, Mat> bivec;      // dressed bivector per edge
    std::map<int, std::vector<LeafOption>> leaf_opts;
    std::vector<int> vertex_last_pos;      // last evalpos per vertex
    std::map<int, int> assigned;           // half-edge -> basis index
    TruncatedSeries result;

    Enumerator(const Graph& gr, const EvalContext& c,
               const std::map<int, int>& external)
        : g(gr), ctx(c), dim(c.alg.dim) {
        int s = c.h0_count();
        result = TruncatedSeries::zero(s, c.ops.h0parity, c.cap);
        int p = 0;
        for (int v = 0; v < (int)g.verts.size(); ++v) {
            for (int h : g.verts[v]) {
                order.push_back(h);
                pos[h] = p++;
                vert_of[h] = v;
            }
            vertex_last_pos.push_back(p - 1);
        }
        for (const auto& e : g.edges) {
            edge_of[e.ha] = &e;
            edge_of[e.hb] = &e;
            edge_list.push_back(&e);
            Chain ch = e.chain;
            if (e.jflag) {
                SignedChain d = compose(Chain{{Op::J}}, ch);
                // J-dressing of a nonzero chain cannot vanish
                ch = d.chain;
                if (d.sign == -1) jsign_per_edge[&e] = -1;
            }
            bivec[&e] = ctx.bivector(ch);
        }
        for (const auto& [h, l] : g.leaves) {
            std::vector<LeafOption> opts;
            Mat cm = ctx.chain_matrix(l.chain);
            auto push_vec = [&](const Vec& v, int tvar) {
                Vec w = mat_vec(cm, v);
                for (int cidx = 0; cidx < dim; ++cidx)
                    if (w[cidx] != 0) opts.push_back({cidx, w[cidx], tvar});
            };
            switch (l.kind) {
                case LeafKind::Basis:
                    // e_i denotes the i-th H0 direction
                    push_vec(ctx.h0_vector(l.index), -1);
                    break;
                case LeafKind::E0:
                case LeafKind::E1: {
                    int lvl = l.kind == LeafKind::E1 ? 1 : 0;
                    for (int i = 0; i < s; ++i)
                        push_vec(ctx.h0_vector(i), lvl * s + i);
                    break;
                }
                case LeafKind::External: {
                    auto it = external.find(h);
                    if (it == external.end())
                        throw std::invalid_argument(
                            "evaluate: unbound external leaf");
                    push_vec(ctx.h0_vector(it->second), -1);
                    break;
                }
            }
            leaf_opts[h] = std::move(opts);
        }
    }

    std::map<const Edge*, int> jsign_per_edge;

    void run() {
        Vec prod = ctx.alg.basis_vec(ctx.alg.unit);
        recurse(0, prod, Rat(1), {});
    }

    // pending: T-variable picks in leaf order (varid, weight already folded)
    void recurse(int p, Vec vprod, Rat scalar, std::vector<int> tvars) {
        if (p == (int)order.size()) {
            finish(scalar, tvars);
            return;
        }
        int h = order[p];
        int v = vert_of[h];
        bool vertex_done = vertex_last_pos[v] == p;
        auto step = [&](int comp, const Rat& w, int tvar) {
            Vec np = ctx.alg.multiply(vprod, ctx.alg.basis_vec(comp));
            bool zero = true;
            for (const auto& x : np)
                if (x != 0) { zero = false; break; }
            Rat ns = scalar * w;
            if (zero && !vertex_done) return;
            if (vertex_done) {
                Rat f = ctx.alg.integrate(np);
                if (f == 0) return;
                ns *= f;
                np = ctx.alg.basis_vec(ctx.alg.unit);
            }
            assigned[h] = comp;
            auto nt = tvars;
            if (tvar >= 0) nt.push_back(tvar);
            // fresh product for next vertex
            if (vertex_done)
                recurse(p + 1, np, ns, nt);
            else
                recurse(p + 1, np, ns, nt);
            assigned.erase(h);
        };
        if (auto itl = g.leaves.find(h); itl != g.leaves.end()) {
            for (const auto& o : leaf_opts[h]) step(o.comp, o.weight, o.tvar);
            return;
        }
        const Edge* e = edge_of[h];
        int other = e->ha == h ? e->hb : e->ha;
        const Mat& M = bivec[e];
        if (assigned.count(other)) {
            int oidx = assigned[other];
            if (other == e->ha) {
                // row fixed, we are hb
                for (int b = 0; b < dim; ++b)
                    if (M[oidx][b] != 0) step(b, M[oidx][b], -1);
            } else {
                for (int a = 0; a < dim; ++a)
                    if (M[a][oidx] != 0) step(a, M[a][oidx], -1);
            }
        } else {
            // first end: enumerate candidates with weight 1 (the factor is
            // charged at the second end)
            std::vector<char> cand(dim, 0);
            if (h == e->ha) {
                for (int a = 0; a < dim; ++a)
                    for (int b = 0; b < dim; ++b)
                        if (M[a][b] != 0) { cand[a] = 1; break; }
            } else {
                for (int b = 0; b < dim; ++b)
                    for (int a = 0; a < dim; ++a)
                        if (M[a][b] != 0) { cand[b] = 1; break; }
            }
            for (int cdx = 0; cdx < dim; ++cdx)
                if (cand[cdx]) step(cdx, Rat(1), -1);
        }
    }

    void finish(const Rat& scalar, const std::vector<int>& tvars) {
        if (scalar == 0) return;
        Rat value = scalar;
        for (const auto& [e, s] : jsign_per_edge) value *= s;
        // Koszul sign: layout (edges by min pos, legs (ha,hb); then leaves by
        // pos) against evalpos order, counting odd-odd inversions.
        std::vector<int> layout;
        {
            std::vector<const Edge*> es = edge_list;
            std::sort(es.begin(), es.end(), [&](const Edge* a, const Edge* b) {
                return std::min(pos[a->ha], pos[a->hb]) <
                       std::min(pos[b->ha], pos[b->hb]);
            });
            for (const Edge* e : es) {
                layout.push_back(e->ha);
                layout.push_back(e->hb);
            }
            std::vector<int> ls;
            for (const auto& [h, l] : g.leaves) ls.push_back(h);
            std::sort(ls.begin(), ls.end(),
                      [&](int a, int b) { return pos[a] < pos[b]; });
            for (int h : ls) layout.push_back(h);
        }
        int inv = 0;
        for (size_t i = 0; i < layout.size(); ++i)
            for (size_t j = i + 1; j < layout.size(); ++j)
                if (pos[layout[i]] > pos[layout[j]] &&
                    ctx.alg.parity[assigned_at(layout[i])] &&
                    ctx.alg.parity[assigned_at(layout[j])])
                    inv ^= 1;
        if (inv) value = -value;
        // T-extraction sign: for leaves l < l' (evalpos order), an E0/E1 leaf
        // l contributes (-1)^{p_l p_{l'}}.
        {
            std::vector<int> ls;
            for (const auto& [h, l] : g.leaves) ls.push_back(h);
            std::sort(ls.begin(), ls.end(),
                      [&](int a, int b) { return pos[a] < pos[b]; });
            int sgn = 0;
            for (size_t i = 0; i < ls.size(); ++i) {
                const Leaf& li = g.leaves.at(ls[i]);
                if (li.kind != LeafKind::E0 && li.kind != LeafKind::E1) continue;
                if (!ctx.alg.parity[assigned_at(ls[i])]) continue;
                for (size_t j = i + 1; j < ls.size(); ++j)
                    if (ctx.alg.parity[assigned_at(ls[j])]) sgn ^= 1;
            }
            if (sgn) value = -value;
        }
        // Build the monomial from tvars in leaf order.
        std::vector<int> mono(result.nvars(), 0);
        int msign = 1;
        for (int var : tvars) {
            if (result.vparity[var]) {
                if (mono[var]) return;  // odd square
                for (int w = var + 1; w < result.nvars(); ++w)
                    if (result.vparity[w] && mono[w]) msign = -msign;
            }
            mono[var] += 1;
        }
        value *= msign;
        result.add_term(mono, value);
    }

    int assigned_at(int h) const {
        auto it = assigned.find(h);
        return it->second;
    }
};

}  // namespace

TruncatedSeries evaluate(const Graph& g, const EvalContext& ctx,
                         const std::map<int, int>& external) {
    std::string why;
    if (!g.structurally_valid(&why))
        throw std::invalid_argument("evaluate: " + why);
    Enumerator en(g, ctx, external);
    en.run();
    return en.result;
}

TruncatedSeries evaluate_dressed(const Graph& g, const EvalContext& ctx,
                                 const std::map<int, int>& external) {
    return evaluate(insert_J(g), ctx, external);
}

}  // namespace chcalc
