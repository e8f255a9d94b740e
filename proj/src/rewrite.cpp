#include "chcalc/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "chcalc/algebra.hpp"

namespace chcalc {

std::string RewriteTrace::str() const {
    std::ostringstream os;
    for (const auto& s : steps)
        os << s.rule << " @ " << s.site << " -> " << s.after_terms
           << " terms   [" << s.before.substr(0, 60) << "]\n";
    return os.str();
}

namespace {

bool word_contains(const Chain& c, Op p) {
    return std::find(c.word.begin(), c.word.end(), p) != c.word.end();
}

bool is_loop(const Graph& g, const Edge& e) {
    return g.vertex_of(e.ha) == g.vertex_of(e.hb);
}

int fresh_id(const Graph& g) {
    int h = 0;
    for (const auto& v : g.verts)
        for (int x : v) h = std::max(h, x + 1);
    return h;
}

}  // namespace

CleanResult cleanup_term(const Graph& g0) {
    CleanResult res;
    res.graph = g0;
    bool changed = true;
    while (changed) {
        changed = false;
        Graph& g = res.graph;
        // chained H0 leaves vanish
        for (const auto& [h, l] : g.leaves) {
            if (!l.chain.is_id()) {
                res.sign = 0;
                return res;
            }
        }
        // contract non-loop Id edges
        for (int i = 0; i < (int)g.edges.size(); ++i) {
            const Edge& e = g.edges[i];
            if (e.chain.is_id() && !e.jflag && !is_loop(g, e)) {
                res.graph = contract_edge(g, i);
                changed = true;
                break;
            }
        }
        if (changed) continue;
        // fuse degree-2 vertices with two distinct incident edges
        for (int v = 0; v < (int)g.verts.size(); ++v) {
            if (g.degree(v) != 2) continue;
            int p = g.verts[v][0], q = g.verts[v][1];
            const Edge* e1 = g.edge_at(p);
            const Edge* e2 = g.edge_at(q);
            if (!e1 || !e2 || e1 == e2) continue;
            SurgeryResult r = fuse_through_vertex(g, v);
            res.sign *= r.sign;
            if (res.sign == 0) return res;
            res.graph = std::move(r.graph);
            changed = true;
            break;
        }
    }
    return res;
}

GraphSum expand_pi0(const GraphSum& s, RewriteTrace* trace) {
    GraphSum out;
    std::deque<std::pair<Rat, Graph>> work;
    for (const auto& [enc, t] : s.terms) work.push_back({t.coeff, t.rep});
    while (!work.empty()) {
        auto [c, g] = work.front();
        work.pop_front();
        int site = -1;
        size_t at = 0;
        for (int i = 0; i < (int)g.edges.size() && site < 0; ++i)
            for (size_t k = 0; k < g.edges[i].chain.word.size(); ++k)
                if (g.edges[i].chain.word[k] == Op::Pi0) {
                    site = i;
                    at = k;
                    break;
                }
        if (site < 0) {
            out.add(g, c);
            continue;
        }
        const Word& w = g.edges[site].chain.word;
        Word pre(w.begin(), w.begin() + at);
        Word post(w.begin() + at + 1, w.end());
        auto emit = [&](std::initializer_list<Op> mid, const Rat& f) {
            Word nw = pre;
            nw.insert(nw.end(), mid.begin(), mid.end());
            nw.insert(nw.end(), post.begin(), post.end());
            SignedChain r = reduce(nw);
            if (r.sign == 0) return;
            Graph ng = g;
            ng.edges[site].chain = r.chain;
            work.push_back({c * f * r.sign, ng});
        };
        emit({}, 1);
        emit({Op::Q, Op::Gp}, -1);
        emit({Op::Gp, Op::Q}, -1);
        if (trace)
            trace->log("expand-pi0", "edge " + std::to_string(site), "", 3);
    }
    return out;
}

GraphSum contract_id(const GraphSum& s, RewriteTrace* trace) {
    GraphSum out;
    for (const auto& [enc, t] : s.terms) {
        Graph g = t.rep;
        bool again = true;
        while (again) {
            again = false;
            for (int i = 0; i < (int)g.edges.size(); ++i) {
                const Edge& e = g.edges[i];
                if (e.chain.is_id() && !e.jflag && !is_loop(g, e)) {
                    g = contract_edge(g, i);
                    again = true;
                    if (trace) trace->log("contract-id", "edge", enc, 1);
                    break;
                }
            }
        }
        out.add(g, t.coeff);
    }
    return out;
}

GraphSum solve_linear_rewrite(const GraphSum& in, const StepFn& step,
                              const std::string& rule_name, RewriteTrace* trace,
                              int max_states) {
    std::map<std::string, int> id_of;
    std::vector<Graph> rep;
    std::vector<int> terminal;  // -1 unknown, 0 no, 1 yes
    std::vector<std::map<int, Rat>> rows;

    auto intern = [&](const Graph& g) -> std::pair<int, int> {
        CanonicalGraph cg = canonicalize(g);
        if (cg.sign == 0) return {-1, 0};
        auto it = id_of.find(cg.encoding);
        if (it != id_of.end()) return {it->second, cg.sign};
        int id = (int)rep.size();
        id_of[cg.encoding] = id;
        rep.push_back(cg.graph);
        terminal.push_back(-1);
        rows.emplace_back();
        if ((int)rep.size() > max_states)
            throw std::runtime_error(rule_name + ": state budget exceeded");
        return {id, cg.sign};
    };

    std::map<int, Rat> seed;  // state -> coefficient
    for (const auto& [enc, t] : in.terms) {
        CleanResult cr = cleanup_term(t.rep);
        if (cr.sign == 0) continue;
        auto [id, sg] = intern(cr.graph);
        if (id < 0) continue;
        seed[id] += t.coeff * cr.sign * sg * cr.factor;
    }

    std::deque<int> work;
    for (const auto& [id, c] : seed) work.push_back(id);
    std::set<int> queued(seed.size() ? std::set<int>() : std::set<int>());
    for (const auto& [id, c] : seed) queued.insert(id);
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        if (terminal[id] != -1) continue;
        auto pieces = step(rep[id]);
        if (!pieces) {
            terminal[id] = 1;
            continue;
        }
        terminal[id] = 0;
        GraphSum collapsed;
        for (const auto& [c, g] : *pieces) {
            CleanResult cr = cleanup_term(g);
            if (cr.sign == 0) continue;
            collapsed.add(cr.graph, c * cr.sign * cr.factor);
        }
        if (trace)
            trace->log(rule_name, "state " + std::to_string(id), "",
                       (int)collapsed.size());
        for (const auto& [enc, t] : collapsed.terms) {
            auto [tid, sg] = intern(t.rep);
            if (tid < 0) continue;
            rows[id][tid] += t.coeff * sg;
            if (!queued.count(tid) && terminal[tid] == -1) {
                queued.insert(tid);
                work.push_back(tid);
            }
        }
    }

    // Express nonterminal states over terminal ones: (I - A) X = B.
    std::vector<int> nonterm;
    std::map<int, int> nt_index;
    for (int i = 0; i < (int)rep.size(); ++i)
        if (terminal[i] == 0) {
            nt_index[i] = (int)nonterm.size();
            nonterm.push_back(i);
        }
    int N = (int)nonterm.size();
    std::vector<Vec> M(N, Vec(N, 0));
    std::vector<std::map<int, Rat>> B(N);
    for (int r = 0; r < N; ++r) {
        M[r][r] = 1;
        for (const auto& [tid, c] : rows[nonterm[r]]) {
            if (terminal[tid] == 0)
                M[r][nt_index[tid]] -= c;
            else
                B[r][tid] += c;
        }
    }
    // Gaussian elimination with sparse RHS.
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[i] = i;
    for (int c = 0; c < N; ++c) {
        int p = -1;
        for (int r = c; r < N; ++r)
            if (M[r][c] != 0) {
                p = r;
                break;
            }
        if (p < 0)
            throw std::runtime_error(rule_name + ": rewrite stalled (singular system)");
        std::swap(M[p], M[c]);
        std::swap(B[p], B[c]);
        Rat d = M[c][c];
        for (int j = 0; j < N; ++j) M[c][j] /= d;
        for (auto& [k, v] : B[c]) v /= d;
        for (int r = 0; r < N; ++r) {
            if (r == c || M[r][c] == 0) continue;
            Rat f = M[r][c];
            for (int j = 0; j < N; ++j) M[r][j] -= f * M[c][j];
            for (const auto& [k, v] : B[c]) {
                B[r][k] -= f * v;
                if (B[r][k] == 0) B[r].erase(k);
            }
        }
    }

    GraphSum out;
    for (const auto& [id, coef] : seed) {
        if (terminal[id] == 1) {
            out.add_canonical(canonicalize(rep[id]).encoding, rep[id], coef);
        } else {
            int r = nt_index[id];
            for (const auto& [tid, c] : B[r])
                out.add_canonical(canonicalize(rep[tid]).encoding, rep[tid],
                                  coef * c);
        }
    }
    return out;
}

namespace {

// --- push_q step ---

struct QPresentation {
    int sign = 1;
    Word rest;  // word after removing the leading Q
    bool flipped = false;
};

std::optional<QPresentation> q_outer(const Chain& c) {
    // bubble the first Q to the front through Gm letters
    const Word& w = c.word;
    int qpos = -1;
    for (size_t i = 0; i < w.size(); ++i)
        if (w[i] == Op::Q) {
            qpos = (int)i;
            break;
        }
    if (qpos < 0) return std::nullopt;
    QPresentation p;
    for (int i = 0; i < qpos; ++i) {
        if (w[i] == Op::Gm)
            p.sign = -p.sign;  // Gm Q = -Q Gm
        else
            return std::nullopt;  // blocked by Gp / Pi0 / J
    }
    for (int i = 0; i < (int)w.size(); ++i)
        if (i != qpos) p.rest.push_back(w[i]);
    return p;
}

std::optional<std::vector<std::pair<Rat, Graph>>> step_q(const Graph& g) {
    int site = -1;
    for (int i = 0; i < (int)g.edges.size(); ++i)
        if (word_contains(g.edges[i].chain, Op::Q)) {
            site = i;
            break;
        }
    if (site < 0) return std::nullopt;

    Graph base = g;
    Edge& e = base.edges[site];
    int sign = 1;
    auto pres = q_outer(e.chain);
    if (!pres) {
        SignedChain f = flip(e.chain);
        sign *= f.sign;
        e.chain = f.chain;
        std::swap(e.ha, e.hb);
        pres = q_outer(e.chain);
        if (!pres)
            throw std::runtime_error("push_q: cannot extract Q from chain " +
                                     g.edges[site].chain.str());
    }
    sign *= pres->sign;
    SignedChain rest = reduce(pres->rest);
    sign *= rest.sign;
    if (sign == 0 || rest.sign == 0)
        return std::vector<std::pair<Rat, Graph>>{};
    e.chain = rest.chain;
    int h = e.ha;  // Q was outer at the op end
    int v = base.vertex_of(h);

    std::vector<std::pair<Rat, Graph>> pieces;
    for (int s : base.verts[v]) {
        if (s == h) continue;
        if (base.leaves.count(s)) continue;  // Q(H0 leaf) = 0
        SurgeryResult r = compose_at(base, s, Op::Q);
        if (r.sign == 0) continue;
        pieces.push_back({Rat(-1) * sign * r.sign, std::move(r.graph)});
    }
    return pieces;
}

// --- vanishing step: 1/12 rewrite of Gm loops ---

std::optional<std::vector<std::pair<Rat, Graph>>> step_twelve(const Graph& g) {
    for (int i = 0; i < (int)g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (!is_loop(g, e)) continue;
        if (!(e.chain.word == Word{Op::Gm})) continue;
        int v = g.vertex_of(e.ha);
        if (g.degree(v) < 3) continue;  // bare supertrace bubble: leave
        Graph ng;
        ng.leaves = g.leaves;
        int g1 = fresh_id(g), g2 = g1 + 1, l1 = g1 + 2, l2 = g1 + 3;
        for (int w = 0; w < (int)g.verts.size(); ++w) {
            std::vector<int> slots;
            for (int h : g.verts[w])
                if (h != e.ha && h != e.hb) slots.push_back(h);
            if (w == v) slots.push_back(g1);
            ng.verts.push_back(std::move(slots));
        }
        ng.verts.push_back({g2, l1, l2});
        for (int k = 0; k < (int)g.edges.size(); ++k)
            if (k != i) ng.edges.push_back(g.edges[k]);
        ng.edges.push_back(Edge{g2, g1, chain_gm(), false});  // op end at gadget
        ng.edges.push_back(Edge{l1, l2, chain_id(), false});  // Id loop
        ng.compact_ids();
        return std::vector<std::pair<Rat, Graph>>{{Rat(1, 12), ng}};
    }
    return std::nullopt;
}

// --- seven-term step ---

bool is_gadget_vertex(const Graph& g, int v, int eh) {
    // slots = {eh, l1, l2} with (l1,l2) an unflagged Id loop
    if (g.degree(v) != 3) return false;
    std::vector<int> others;
    for (int h : g.verts[v])
        if (h != eh) others.push_back(h);
    if (others.size() != 2) return false;
    const Edge* l = g.edge_at(others[0]);
    if (!l || g.edge_at(others[1]) != l) return false;
    return l->chain.is_id() && !l->jflag;
}

std::optional<std::vector<std::pair<Rat, Graph>>> step_seven(const Graph& g) {
    for (int i = 0; i < (int)g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (is_loop(g, e)) continue;
        if (!(e.chain.word == Word{Op::Gm})) continue;
        int va = g.vertex_of(e.ha), vb = g.vertex_of(e.hb);
        bool ga = is_gadget_vertex(g, va, e.ha);
        bool gb = is_gadget_vertex(g, vb, e.hb);
        if (ga || gb) {
            // first-order split under the supertrace
            int vo = ga ? vb : va;
            int eo = ga ? e.hb : e.ha;
            std::vector<std::pair<Rat, Graph>> pieces;
            for (int s : g.verts[vo]) {
                if (s == eo) continue;
                Graph base = g;
                base.edges[i].chain = chain_id();
                if (base.leaves.count(s)) continue;  // Gm(H0 leaf) = 0
                SurgeryResult r = compose_at(base, s, Op::Gm);
                if (r.sign == 0) continue;
                pieces.push_back({Rat(r.sign), std::move(r.graph)});
            }
            return pieces;
        }
        // plain expansion when one side has >= 3 slots
        std::vector<int> su, sv;
        for (int h : g.verts[va])
            if (h != e.ha) su.push_back(h);
        for (int h : g.verts[vb])
            if (h != e.hb) sv.push_back(h);
        if (su.size() < 3 && sv.size() < 3) continue;
        bool expand_a;  // expand the side at va?
        if (su.size() != sv.size())
            expand_a = su.size() > sv.size();
        else
            expand_a = va < vb;
        // orient op end toward the far side (delivery = Gm(T-product))
        Graph base = g;
        Edge& be = base.edges[i];
        int sign = 1;
        int far_h = expand_a ? e.hb : e.ha;
        if (be.ha != far_h) {
            SignedChain f = flip(be.chain);
            sign *= f.sign;  // Gm flips cleanly (+1), kept for generality
            be.chain = f.chain;
            std::swap(be.ha, be.hb);
        }
        int vT = expand_a ? va : vb;
        int vF = base.vertex_of(be.ha);
        std::vector<int>& T = expand_a ? su : sv;
        int m = (int)T.size();

        std::vector<std::pair<Rat, Graph>> pieces;
        // pair channels
        for (int x = 0; x < m; ++x)
            for (int y = x + 1; y < m; ++y) {
                Graph ng;
                ng.leaves = base.leaves;
                int w2 = fresh_id(base);
                for (int w = 0; w < (int)base.verts.size(); ++w) {
                    if (w == vT) continue;
                    std::vector<int> slots = base.verts[w];
                    if (w == vF)
                        for (int h : T)
                            if (h != T[x] && h != T[y]) slots.push_back(h);
                    ng.verts.push_back(std::move(slots));
                }
                ng.verts.push_back({T[x], T[y], w2});
                for (int k = 0; k < (int)base.edges.size(); ++k) {
                    if (k == i) continue;
                    ng.edges.push_back(base.edges[k]);
                }
                // Gm edge: op end stays at F (delivery Gm(x_i x_j) into F)
                ng.edges.push_back(Edge{be.ha, w2, chain_gm(), false});
                ng.compact_ids();
                pieces.push_back({Rat(sign), std::move(ng)});
            }
        // single channels
        for (int x = 0; x < m; ++x) {
            Graph ng;
            ng.leaves = base.leaves;
            for (int w = 0; w < (int)base.verts.size(); ++w) {
                if (w == vT) continue;
                std::vector<int> slots;
                for (int h : base.verts[w]) {
                    if (h == be.ha) continue;
                    slots.push_back(h);
                }
                if (w == vF)
                    for (int h : T) slots.push_back(h);
                ng.verts.push_back(std::move(slots));
            }
            for (int k = 0; k < (int)base.edges.size(); ++k) {
                if (k == i) continue;
                ng.edges.push_back(base.edges[k]);
            }
            // T[x] id is preserved here (no compaction yet)
            if (ng.leaves.count(T[x])) continue;  // Gm(H0 leaf) = 0
            SurgeryResult r = compose_at(ng, T[x], Op::Gm);
            if (r.sign == 0) continue;
            r.graph.compact_ids();
            pieces.push_back(
                {Rat(-(m - 2)) * sign * r.sign, std::move(r.graph)});
        }
        return pieces;
    }
    return std::nullopt;
}

bool sums_equal(const GraphSum& a, const GraphSum& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (const auto& [enc, t] : a.terms) {
        auto it = b.terms.find(enc);
        if (it == b.terms.end() || it->second.coeff != t.coeff) return false;
    }
    return true;
}

}  // namespace

GraphSum push_q(const GraphSum& s, RewriteTrace* trace) {
    return solve_linear_rewrite(s, step_q, "push-q", trace);
}

GraphSum apply_vanishing(const GraphSum& s, RewriteTrace* trace) {
    return solve_linear_rewrite(s, step_twelve, "one-twelfth", trace);
}

GraphSum apply_seven_term(const GraphSum& s, RewriteTrace* trace) {
    return solve_linear_rewrite(s, step_seven, "seven-term", trace);
}

GraphSum normalize(const GraphSum& s, RewriteTrace* trace) {
    GraphSum cur = expand_pi0(s, trace);
    cur = contract_id(cur, trace);
    cur = push_q(cur, trace);
    for (int round = 0; round < 32; ++round) {
        GraphSum v = apply_vanishing(cur, trace);
        GraphSum t = apply_seven_term(v, trace);
        bool stable = sums_equal(t, cur);
        cur = std::move(t);
        if (stable) break;
        if (round == 31) throw std::runtime_error("normalize: no fixpoint");
    }
    for (const auto& [enc, t] : cur.terms) {
        for (const auto& e : t.rep.edges) {
            if (word_contains(e.chain, Op::Pi0) || word_contains(e.chain, Op::Q))
                throw std::runtime_error("normalize: stalled with Pi0/Q at " + enc);
            if (e.chain.is_id() && !is_loop(t.rep, e))
                throw std::runtime_error("normalize: non-loop Id survived at " + enc);
        }
    }
    return cur;
}

}  // namespace chcalc
