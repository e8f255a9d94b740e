#include "chcalc/strata.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "chcalc/potentials.hpp"

namespace chcalc {

int DualGraph::total_genus() const {
    int g = 0;
    for (int x : genus) g += x;
    return g + (int)edges.size() - (int)genus.size() + 1;
}

int DualGraph::codim() const {
    int psi = 0;
    for (const auto& e : edges)
        if (e.psi_at >= 0) ++psi;
    for (const auto& m : marks)
        if (m.psi) ++psi;
    return (int)edges.size() + psi;
}

bool DualGraph::valid(std::string* why) const {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    int V = (int)genus.size();
    if (V == 0) return fail("no vertices");
    for (int g : genus)
        if (g < 0 || g > 2) return fail("vertex genus out of range");
    for (const auto& e : edges) {
        if (e.a < 0 || e.a >= V || e.b < 0 || e.b >= V)
            return fail("edge endpoint out of range");
        if (e.psi_at >= 0) {
            if (e.psi_at != e.a && e.psi_at != e.b)
                return fail("edge psi not at an endpoint");
            if (genus[e.psi_at] != 2) return fail("psi-flag at non-genus-2 vertex");
        }
    }
    if (marks.size() != 3) return fail("marking count != 3");
    for (const auto& m : marks) {
        if (m.vertex < 0 || m.vertex >= V) return fail("mark vertex out of range");
        if (m.psi && genus[m.vertex] != 2)
            return fail("psi-flag at non-genus-2 vertex");
    }
    // connectivity
    std::vector<char> seen(V, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& e : edges) {
            int o = -1;
            if (e.a == v) o = e.b;
            else if (e.b == v) o = e.a;
            if (o >= 0 && !seen[o]) {
                seen[o] = 1;
                ++cnt;
                stack.push_back(o);
            }
        }
    }
    if (cnt != V) return fail("disconnected");
    if (total_genus() != 2) return fail("genus sum != 2");
    // stability
    std::vector<int> deg(V, 0);
    for (const auto& e : edges) {
        deg[e.a]++;
        deg[e.b]++;
    }
    for (const auto& m : marks) deg[m.vertex]++;
    for (int v = 0; v < V; ++v) {
        if (genus[v] == 0 && deg[v] < 3) return fail("unstable genus-0 vertex");
        if (genus[v] == 1 && deg[v] < 1) return fail("unstable genus-1 vertex");
    }
    return true;
}

namespace {

std::string key_with_labels(const DualGraph& d, const std::vector<int>& labels) {
    int V = (int)d.genus.size();
    std::vector<int> perm(V);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::ostringstream os;
        std::vector<int> inv(V);
        for (int i = 0; i < V; ++i) inv[perm[i]] = i;
        // vertices in new order
        std::vector<std::vector<std::string>> markat(V);
        for (size_t mi = 0; mi < d.marks.size(); ++mi) {
            std::string t = labels.empty() ? "m" : "m" + std::to_string(labels[mi]);
            if (d.marks[mi].psi) t += "p";
            markat[inv[d.marks[mi].vertex]].push_back(t);
        }
        for (int v = 0; v < V; ++v) {
            os << "g" << d.genus[perm[v]] << "[";
            std::sort(markat[v].begin(), markat[v].end());
            for (const auto& t : markat[v]) os << t << ",";
            os << "];";
        }
        std::vector<std::string> es;
        for (const auto& e : d.edges) {
            int x = inv[e.a], y = inv[e.b];
            int psi = -1;
            if (e.psi_at >= 0) psi = inv[e.psi_at];
            std::string t;
            if (x <= y)
                t = "e" + std::to_string(x) + "-" + std::to_string(y);
            else
                t = "e" + std::to_string(y) + "-" + std::to_string(x);
            if (psi >= 0) t += "p" + std::to_string(psi);
            es.push_back(t);
        }
        std::sort(es.begin(), es.end());
        for (const auto& t : es) os << t << ";";
        std::string k = os.str();
        if (best.empty() || k < best) best = k;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

std::string DualGraph::canonical_key() const { return key_with_labels(*this, {}); }

std::string DualGraph::str() const {
    std::ostringstream os;
    os << "stratum " << name << "\n";
    for (size_t v = 0; v < genus.size(); ++v)
        os << "v " << v << " genus " << genus[v] << "\n";
    for (const auto& e : edges) {
        os << "e " << e.a << " " << e.b;
        if (e.psi_at >= 0) os << " psi-at " << e.psi_at;
        os << "\n";
    }
    int lbl = 1;
    for (const auto& m : marks) {
        os << "m " << lbl++ << " at " << m.vertex;
        if (m.psi) os << " psi";
        os << "\n";
    }
    return os.str();
}

StrataParse parse_strata(std::istream& in) {
    StrataParse res;
    DualGraph cur;
    bool open = false;
    std::string line;
    int lineno = 0;
    auto flush = [&]() {
        if (open) res.strata.push_back(cur);
        cur = DualGraph{};
        open = false;
    };
    auto fail = [&](const std::string& m) {
        res.error = m;
        res.line = lineno;
        res.strata.clear();
        return res;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "stratum") {
            flush();
            if (!(ls >> cur.name)) return fail("stratum needs a name");
            open = true;
        } else if (kw == "v") {
            int id, g;
            std::string tag;
            if (!open || !(ls >> id >> tag >> g) || tag != "genus")
                return fail("bad vertex line");
            if (id != (int)cur.genus.size()) return fail("vertex ids must be sequential");
            cur.genus.push_back(g);
        } else if (kw == "e") {
            DualGraph::Node e;
            if (!open || !(ls >> e.a >> e.b)) return fail("bad edge line");
            std::string extra;
            if (ls >> extra) {
                if (extra != "psi-at" || !(ls >> e.psi_at))
                    return fail("bad edge psi annotation");
            }
            cur.edges.push_back(e);
        } else if (kw == "m") {
            DualGraph::Mark m;
            std::string lbl, at;
            if (!open || !(ls >> lbl >> at >> m.vertex) || at != "at")
                return fail("bad mark line");
            std::string extra;
            if (ls >> extra) {
                if (extra != "psi") return fail("bad mark annotation");
                m.psi = true;
            }
            cur.marks.push_back(m);
        } else {
            return fail("unknown record '" + kw + "'");
        }
    }
    flush();
    return res;
}

std::string write_strata(const std::vector<DualGraph>& ds) {
    std::string out;
    for (const auto& d : ds) out += d.str() + "\n";
    return out;
}

const std::vector<Rat>& bp_coefficients() {
    static const std::vector<Rat> c = {
        Rat(-4),      Rat(12),     Rat(6),       Rat(-6),     Rat(12, 5),
        Rat(-12, 5),  Rat(24, 5),  Rat(-36, 5),  Rat(-36, 5), Rat(18, 5),
        Rat(-12, 5),  Rat(1, 10),  Rat(-3, 10),  Rat(3, 10),  Rat(-1, 10),
        Rat(6, 5),    Rat(-6, 5),  Rat(2, 5),    Rat(-3, 5),  Rat(-1, 5)};
    return c;
}

DualGraph fixture_delta1() {
    DualGraph d;
    d.name = "Delta1";
    d.genus = {2, 0, 0};
    d.edges = {{0, 1, -1}, {1, 2, -1}};
    d.marks = {{1, false}, {2, false}, {2, false}};
    return d;
}

DualGraph fixture_delta2() {
    DualGraph d;
    d.name = "Delta2";
    d.genus = {2, 0};
    d.edges = {{0, 1, 0}};
    d.marks = {{1, false}, {1, false}, {1, false}};
    return d;
}

DualGraph fixture_delta3() {
    DualGraph d;
    d.name = "Delta3";
    d.genus = {2, 0};
    d.edges = {{0, 1, -1}};
    d.marks = {{0, true}, {1, false}, {1, false}};
    return d;
}

Relation bp_relation(std::istream& strata_file) {
    StrataParse p = parse_strata(strata_file);
    if (!p.error.empty())
        throw std::runtime_error("strata file: line " + std::to_string(p.line) +
                                 ": " + p.error);
    if (p.strata.size() != 20)
        throw std::runtime_error("strata file must define 20 strata, got " +
                                 std::to_string(p.strata.size()));
    for (const auto& d : p.strata) {
        std::string why;
        if (!d.valid(&why))
            throw std::runtime_error("stratum " + d.name + ": " + why);
        if (d.codim() != 2)
            throw std::runtime_error("stratum " + d.name + ": codimension != 2");
    }
    // first three must be the prose-specified fixtures
    const DualGraph fx[3] = {fixture_delta1(), fixture_delta2(), fixture_delta3()};
    for (int i = 0; i < 3; ++i)
        if (p.strata[i].canonical_key() != fx[i].canonical_key())
            throw std::runtime_error("stratum " + p.strata[i].name +
                                     " does not match the built-in fixture");
    Relation rel;
    rel.coeffs = bp_coefficients();
    rel.strata = p.strata;
    return rel;
}

Relation bp_relation_from_path(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open strata file " + path);
    return bp_relation(f);
}

std::vector<DualGraph> enumerate_candidate_strata() {
    std::vector<DualGraph> out;
    std::set<std::string> seen;
    auto consider = [&](DualGraph d) {
        std::string why;
        if (!d.valid(&why)) return;
        if (d.codim() != 2) return;
        std::string k = d.canonical_key();
        if (seen.insert(k).second) {
            d.name = "C" + std::to_string(out.size() + 1);
            out.push_back(d);
        }
    };
    for (int V = 1; V <= 3; ++V) {
        // genus assignments
        std::vector<std::vector<int>> gens;
        std::vector<int> g(V, 0);
        std::function<void(int)> recg = [&](int i) {
            if (i == V) {
                gens.push_back(g);
                return;
            }
            for (int x = 0; x <= 2; ++x) {
                g[i] = x;
                recg(i + 1);
            }
        };
        recg(0);
        // unordered pairs (loops allowed)
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < V; ++a)
            for (int b = a; b < V; ++b) pairs.push_back({a, b});
        // mark distributions
        std::vector<std::vector<int>> mdists;
        std::vector<int> md(V, 0);
        std::function<void(int, int)> recm = [&](int i, int rem) {
            if (i == V) {
                if (rem == 0) mdists.push_back(md);
                return;
            }
            for (int x = 0; x <= rem; ++x) {
                md[i] = x;
                recm(i + 1, rem - x);
            }
            md[i] = 0;
        };
        recm(0, 3);
        auto marks_of = [&](const std::vector<int>& dist) {
            std::vector<DualGraph::Mark> ms;
            for (int v = 0; v < V; ++v)
                for (int k = 0; k < dist[v]; ++k) ms.push_back({v, false});
            return ms;
        };
        for (const auto& gg : gens) {
            // E = 2, no psi
            for (size_t p1 = 0; p1 < pairs.size(); ++p1)
                for (size_t p2 = p1; p2 < pairs.size(); ++p2)
                    for (const auto& dist : mdists) {
                        DualGraph d;
                        d.genus = gg;
                        d.edges = {{pairs[p1].first, pairs[p1].second, -1},
                                   {pairs[p2].first, pairs[p2].second, -1}};
                        d.marks = marks_of(dist);
                        consider(d);
                    }
            // E = 1, one psi (on an edge end or on a mark)
            for (const auto& pr : pairs)
                for (const auto& dist : mdists) {
                    for (int side = 0; side < 2; ++side) {
                        DualGraph d;
                        d.genus = gg;
                        int at = side == 0 ? pr.first : pr.second;
                        d.edges = {{pr.first, pr.second, at}};
                        d.marks = marks_of(dist);
                        consider(d);
                    }
                    // psi on one mark
                    for (int v = 0; v < V; ++v) {
                        if (dist[v] == 0) continue;
                        DualGraph d;
                        d.genus = gg;
                        d.edges = {{pr.first, pr.second, -1}};
                        d.marks = marks_of(dist);
                        for (auto& m : d.marks)
                            if (m.vertex == v) {
                                m.psi = true;
                                break;
                            }
                        consider(d);
                    }
                }
        }
    }
    return out;
}

DiffExpression to_differential(const DualGraph& d) {
    std::string why;
    if (!d.valid(&why)) throw std::invalid_argument("to_differential: " + why);
    for (const auto& m : d.marks)
        if (m.psi && d.genus[m.vertex] != 2)
            throw std::invalid_argument("unsupported stratum: psi at genus-" +
                                        std::to_string(d.genus[m.vertex]));
    DiffExpression ex;
    ex.stratum = d;
    std::vector<int> lab = {0, 1, 2};
    std::set<std::string> seen;
    std::sort(lab.begin(), lab.end());
    do {
        std::string k = key_with_labels(d, lab);
        if (seen.insert(k).second) ex.labelings.push_back(lab);
    } while (std::next_permutation(lab.begin(), lab.end()));
    return ex;
}

std::string DiffExpression::str() const {
    std::ostringstream os;
    os << stratum.name << ": " << labelings.size()
       << " distinct labelings of {a,b,c}; blocks:";
    for (size_t v = 0; v < stratum.genus.size(); ++v) {
        int flags = 0;
        bool psi = false;
        for (const auto& e : stratum.edges) {
            if (e.a == (int)v) ++flags;
            if (e.b == (int)v) ++flags;
            if (e.psi_at == (int)v) psi = true;
        }
        for (const auto& m : stratum.marks)
            if (m.vertex == (int)v) {
                ++flags;
                if (m.psi) psi = true;
            }
        os << " [genus " << stratum.genus[v] << ", " << flags << " derivatives"
           << (psi ? ", psi bracket" : "") << "]";
    }
    return os.str();
}

namespace {

struct Socket {
    enum Kind { EdgeEnd, MarkLeg } kind;
    int edge = -1;  // for EdgeEnd: index into d.edges
    int end = 0;    // 0 = a-side, 1 = b-side
    int mark = -1;  // for MarkLeg: index into d.marks
    bool is_psi = false;
};

// cached exact-leaf-count slices of the potentials
const std::vector<std::pair<Rat, Graph>>& potential_slice(int genus, int leaves) {
    static std::map<std::pair<int, int>, std::vector<std::pair<Rat, Graph>>> cache;
    auto key = std::make_pair(genus, leaves);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<Rat, Graph>> out;
    for (const Graph& g : enumerate_trivalent(genus, leaves))
        out.push_back({Rat(1) / Rat(automorphism_count(g)), g});
    return cache.emplace(key, std::move(out)).first->second;
}

const std::vector<std::pair<Rat, Graph>>& descendant_slice(int e0_leaves) {
    static std::map<int, std::vector<std::pair<Rat, Graph>>> cache;
    auto it = cache.find(e0_leaves);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<Rat, Graph>> out;
    GraphSum s = potential_descendant(e0_leaves);
    for (const auto& [enc, t] : s.terms) {
        int e0 = 0;
        for (const auto& [h, l] : t.rep.leaves)
            if (l.kind == LeafKind::E0) ++e0;
        if (e0 == e0_leaves) out.push_back({t.coeff, t.rep});
    }
    return cache.emplace(e0_leaves, std::move(out)).first->second;
}

}  // namespace

GraphSum at_zero(const DualGraph& d) {
    DiffExpression ex = to_differential(d);
    int V = (int)d.genus.size();

    // sockets per vertex
    std::vector<std::vector<Socket>> sockets(V);
    for (int ei = 0; ei < (int)d.edges.size(); ++ei) {
        const auto& e = d.edges[ei];
        Socket sa{Socket::EdgeEnd, ei, 0, -1, e.psi_at == e.a};
        Socket sb{Socket::EdgeEnd, ei, 1, -1, e.psi_at == e.b && e.a != e.b};
        sockets[e.a].push_back(sa);
        sockets[e.b].push_back(sb);
    }
    for (int mi = 0; mi < (int)d.marks.size(); ++mi)
        sockets[d.marks[mi].vertex].push_back(
            {Socket::MarkLeg, -1, 0, mi, d.marks[mi].psi});

    GraphSum total;
    for (const auto& lab : ex.labelings) {
        // per-vertex block terms: (coeff, graph, socket->half-edge map)
        struct BlockTerm {
            Rat coeff;
            Graph g;
            std::vector<int> socket_leaf;  // per socket of this vertex
        };
        std::vector<std::vector<BlockTerm>> blocks(V);
        bool empty_block = false;
        for (int v = 0; v < V && !empty_block; ++v) {
            int nf = (int)sockets[v].size();
            bool has_psi = false;
            int psi_socket = -1;
            for (int si = 0; si < nf; ++si)
                if (sockets[v][si].is_psi) {
                    has_psi = true;
                    psi_socket = si;
                }
            const std::vector<std::pair<Rat, Graph>>* src;
            if (has_psi)
                src = &descendant_slice(nf - 1);
            else
                src = &potential_slice(d.genus[v], nf);
            for (const auto& [c, g] : *src) {
                // leaf lists
                std::vector<int> e0leaves, e1leaves;
                for (const auto& [h, l] : g.leaves)
                    (l.kind == LeafKind::E1 ? e1leaves : e0leaves).push_back(h);
                std::vector<int> targets;  // socket index list to fill with E0
                for (int si = 0; si < nf; ++si)
                    if (si != psi_socket) targets.push_back(si);
                if ((int)e0leaves.size() != (int)targets.size()) continue;
                std::sort(e0leaves.begin(), e0leaves.end());
                // all bijections leaves -> targets
                std::vector<int> perm(e0leaves.size());
                std::iota(perm.begin(), perm.end(), 0);
                do {
                    BlockTerm bt;
                    bt.coeff = c;
                    bt.g = g;
                    bt.socket_leaf.assign(nf, -1);
                    for (size_t k = 0; k < targets.size(); ++k)
                        bt.socket_leaf[targets[k]] = e0leaves[perm[k]];
                    if (has_psi) bt.socket_leaf[psi_socket] = e1leaves.at(0);
                    blocks[v].push_back(std::move(bt));
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
            if (blocks[v].empty()) empty_block = true;
        }
        if (empty_block) continue;

        // assemble the product over vertices
        std::vector<int> choice(V, 0);
        std::function<void(int)> assemble = [&](int v) {
            if (v < V) {
                for (int k = 0; k < (int)blocks[v].size(); ++k) {
                    choice[v] = k;
                    assemble(v + 1);
                }
                return;
            }
            Graph g;
            Rat coeff = 1;
            std::vector<int> offset(V, 0);
            for (int w = 0; w < V; ++w) {
                const BlockTerm& bt = blocks[w][choice[w]];
                coeff *= bt.coeff;
                offset[w] = g.num_half_edges();
                int off = offset[w];
                for (const auto& vv : bt.g.verts) {
                    g.verts.emplace_back();
                    for (int h : vv) g.verts.back().push_back(h + off);
                }
                for (const auto& e : bt.g.edges)
                    g.edges.push_back(
                        Edge{e.ha + off, e.hb + off, e.chain, e.jflag});
                for (const auto& [h, l] : bt.g.leaves) g.leaves[h + off] = l;
            }
            // bridges
            for (int ei = 0; ei < (int)d.edges.size(); ++ei) {
                int ha = -1, hb = -1;
                for (int w = 0; w < V; ++w) {
                    const BlockTerm& bt = blocks[w][choice[w]];
                    for (int si = 0; si < (int)sockets[w].size(); ++si) {
                        const Socket& s = sockets[w][si];
                        if (s.kind != Socket::EdgeEnd || s.edge != ei) continue;
                        int leaf = bt.socket_leaf[si] + offset[w];
                        (s.end == 0 ? ha : hb) = leaf;
                    }
                }
                g.leaves.erase(ha);
                g.leaves.erase(hb);
                g.edges.push_back(Edge{ha, hb, chain_pi0(), false});
            }
            // marks -> external legs (all one kind)
            for (int w = 0; w < V; ++w) {
                const BlockTerm& bt = blocks[w][choice[w]];
                for (int si = 0; si < (int)sockets[w].size(); ++si) {
                    const Socket& s = sockets[w][si];
                    if (s.kind != Socket::MarkLeg) continue;
                    int leaf = bt.socket_leaf[si] + offset[w];
                    g.leaves[leaf] = Leaf{LeafKind::External, -1, {}};
                }
            }
            (void)lab;  // labels only affect the dedup of labelings
            total.add(g, coeff);
        };
        assemble(0);
    }
    total *= Rat(1, 6);
    return total;
}

BpSymbolicResult verify_bp_symbolic(const Relation& rel, RewriteTrace* trace) {
    BpSymbolicResult res;
    res.normalized.resize(rel.strata.size());
    for (size_t i = 0; i < rel.strata.size(); ++i) {
        GraphSum z = at_zero(rel.strata[i]);
        res.normalized[i] = normalize(z, trace);
    }
    std::set<std::string> cols;
    for (const auto& s : res.normalized)
        for (const auto& [enc, t] : s.terms) cols.insert(enc);
    res.table.cols.assign(cols.begin(), cols.end());
    std::map<std::string, int> colidx;
    for (int i = 0; i < (int)res.table.cols.size(); ++i)
        colidx[res.table.cols[i]] = i;
    res.table.entries.assign(rel.strata.size(), std::vector<Rat>(cols.size(), 0));
    for (size_t i = 0; i < rel.strata.size(); ++i) {
        res.table.rows.push_back(rel.strata[i].name);
        for (const auto& [enc, t] : res.normalized[i].terms)
            res.table.entries[i][colidx[enc]] = t.coeff;
    }
    for (size_t i = 0; i < rel.strata.size(); ++i) {
        GraphSum scaled = res.normalized[i];
        scaled *= rel.coeffs[i];
        res.residual += scaled;
    }
    return res;
}

std::string BpSymbolicResult::failure_report() const {
    if (residual.empty()) return "residual empty";
    std::ostringstream os;
    os << "nonzero residual on " << residual.size() << " final graphs:\n";
    for (const auto& [enc, t] : residual.terms) {
        os << "  " << t.coeff.get_str() << "  " << enc << "\n";
        os << "    contributions:";
        for (size_t i = 0; i < normalized.size(); ++i) {
            auto it = normalized[i].terms.find(enc);
            if (it != normalized[i].terms.end())
                os << " " << (i < table.rows.size() ? table.rows[i] : std::to_string(i))
                   << "=" << it->second.coeff.get_str();
        }
        os << "\n";
    }
    return os.str();
}

std::string CoefficientTable::tsv(const std::map<std::string, std::string>& names,
                                  bool print_zero) const {
    std::ostringstream os;
    os << "stratum";
    for (const auto& c : cols) {
        auto it = names.find(c);
        os << "\t" << (it != names.end() ? it->second : c);
    }
    os << "\n";
    for (size_t r = 0; r < rows.size(); ++r) {
        os << rows[r];
        for (size_t c = 0; c < cols.size(); ++c) {
            const Rat& v = entries[r][c];
            os << "\t";
            if (v == 0 && !print_zero)
                os << "";
            else
                os << v.get_str();
        }
        os << "\n";
    }
    return os.str();
}

TruncatedSeries series_potential(int genus, const EvalContext& ctx) {
    TruncatedSeries out =
        TruncatedSeries::zero(ctx.h0_count(), ctx.ops.h0parity, ctx.cap);
    for (int n = 0; n <= ctx.cap; ++n)
        for (const auto& [c, g] : potential_slice(genus, n)) {
            TruncatedSeries v = evaluate_dressed(g, ctx);
            v *= c;
            out += v;
        }
    return out;
}

TruncatedSeries series_descendant(const EvalContext& ctx) {
    TruncatedSeries out =
        TruncatedSeries::zero(ctx.h0_count(), ctx.ops.h0parity, ctx.cap);
    for (int n = 0; n + 1 <= ctx.cap; ++n)
        for (const auto& [c, g] : descendant_slice(n)) {
            TruncatedSeries v = evaluate_dressed(g, ctx);
            v *= c;
            out += v;
        }
    return out;
}

namespace {

// derivatives of a series by a list of variables (all even H0 assumed)
TruncatedSeries derive_all(const TruncatedSeries& s, const std::vector<int>& vars) {
    TruncatedSeries cur = s;
    for (int v : vars) cur = cur.derivative(v);
    return cur;
}

}  // namespace

TruncatedSeries stratum_series(const DualGraph& d, const EvalContext& ctx,
                               int a, int b, int c) {
    for (int p : ctx.ops.h0parity)
        if (p) throw std::runtime_error("stratum_series: odd H0 not supported");
    int s = ctx.h0_count();
    DiffExpression ex = to_differential(d);
    int V = (int)d.genus.size();
    TruncatedSeries phi0 = series_potential(0, ctx);
    TruncatedSeries phi1 = series_potential(1, ctx);
    TruncatedSeries phi2 = series_potential(2, ctx);
    TruncatedSeries phi21 = series_descendant(ctx);
    auto phi = [&](int g) -> const TruncatedSeries& {
        return g == 0 ? phi0 : (g == 1 ? phi1 : phi2);
    };

    TruncatedSeries total = TruncatedSeries::zero(s, ctx.ops.h0parity, ctx.cap);
    int E = (int)d.edges.size();
    std::vector<int> ext = {a, b, c};

    for (const auto& lab : ex.labelings) {
        // enumerate H0 indices on each edge (two per edge: k at a-side, l at b-side)
        std::vector<int> kk(E, 0), ll(E, 0);
        std::function<void(int, Rat)> loop_edges = [&](int ei, Rat w) {
            if (ei == E) {
                // per vertex: build derivative list
                TruncatedSeries prod =
                    TruncatedSeries::constant(s, ctx.ops.h0parity, ctx.cap, w);
                for (int v = 0; v < V; ++v) {
                    std::vector<int> t0;
                    int psi_t1 = -1;
                    for (int ei2 = 0; ei2 < E; ++ei2) {
                        const auto& e = d.edges[ei2];
                        if (e.a == v) {
                            if (e.psi_at == e.a)
                                psi_t1 = kk[ei2];
                            else
                                t0.push_back(kk[ei2]);
                        }
                        if (e.b == v) {
                            bool psi_here = (e.psi_at == e.b && e.a != e.b);
                            if (psi_here)
                                psi_t1 = ll[ei2];
                            else
                                t0.push_back(ll[ei2]);
                        }
                    }
                    for (size_t mi = 0; mi < d.marks.size(); ++mi) {
                        if (d.marks[mi].vertex != v) continue;
                        if (d.marks[mi].psi)
                            psi_t1 = ext[lab[mi]];
                        else
                            t0.push_back(ext[lab[mi]]);
                    }
                    TruncatedSeries block =
                        TruncatedSeries::zero(s, ctx.ops.h0parity, ctx.cap);
                    if (psi_t1 < 0) {
                        block = derive_all(phi(d.genus[v]), t0);
                    } else {
                        // psi bracket: Phi2^(1) part minus Phi0-eta-Phi2 part
                        std::vector<int> vars = {s + psi_t1};  // T1 variable
                        for (int x : t0) vars.push_back(x);
                        block = derive_all(phi21, vars);
                        for (int k2 = 0; k2 < s; ++k2)
                            for (int l2 = 0; l2 < s; ++l2) {
                                if (ctx.ops.etaInv[k2][l2] == 0) continue;
                                TruncatedSeries f0 =
                                    derive_all(phi0, {psi_t1, k2});
                                std::vector<int> v2 = {l2};
                                for (int x : t0) v2.push_back(x);
                                TruncatedSeries f2 = derive_all(phi2, v2);
                                TruncatedSeries piece = f0.mul(f2);
                                piece *= ctx.ops.etaInv[k2][l2] * Rat(-1);
                                block += piece;
                            }
                    }
                    prod = prod.mul(block);
                }
                total += prod;
                return;
            }
            for (int k2 = 0; k2 < s; ++k2)
                for (int l2 = 0; l2 < s; ++l2) {
                    if (ctx.ops.etaInv[k2][l2] == 0) continue;
                    kk[ei] = k2;
                    ll[ei] = l2;
                    loop_edges(ei + 1, w * ctx.ops.etaInv[k2][l2]);
                }
        };
        loop_edges(0, Rat(1));
    }
    return total;
}

Rat evaluate_zero_point(const GraphSum& sum, const EvalContext& ctx, int a,
                        int b, int c) {
    Rat total = 0;
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    int abc[3] = {a, b, c};
    for (const auto& [enc, t] : sum.terms) {
        std::vector<int> ext;
        for (const auto& [h, l] : t.rep.leaves)
            if (l.kind == LeafKind::External) ext.push_back(h);
        if (ext.size() != 3)
            throw std::runtime_error("evaluate_zero_point: needs 3 external legs");
        for (auto& p : perm) {
            std::map<int, int> bind = {{ext[0], abc[p[0]]},
                                       {ext[1], abc[p[1]]},
                                       {ext[2], abc[p[2]]}};
            TruncatedSeries v = evaluate_dressed(t.rep, ctx, bind);
            total += t.coeff * v.constant_term();
        }
    }
    return total;
}

BpNumericResult verify_bp_numeric(const Relation& rel, const AlgebraInstance& a,
                                  int degree) {
    AxiomReport rep = check_axioms(a);
    if (!rep.all_pass())
        throw std::runtime_error("verify_bp_numeric: instance fails axioms:\n" +
                                 rep.str());
    EvalContext ctx(a, degree);
    for (int p : ctx.ops.h0parity)
        if (p)
            throw std::runtime_error(
                "verify_bp_numeric: H0 must be entirely even");
    int s = ctx.h0_count();
    BpNumericResult out;
    std::ostringstream report;
    int reliable = degree - 4;
    for (int x = 0; x < s && out.zero; ++x)
        for (int y = 0; y < s && out.zero; ++y)
            for (int z = 0; z < s && out.zero; ++z) {
                TruncatedSeries resid =
                    TruncatedSeries::zero(s, ctx.ops.h0parity, degree);
                for (size_t i = 0; i < rel.strata.size(); ++i) {
                    TruncatedSeries t =
                        stratum_series(rel.strata[i], ctx, x, y, z);
                    t *= rel.coeffs[i];
                    resid += t;
                }
                // keep only the reliably computed part
                TruncatedSeries cut =
                    TruncatedSeries::zero(s, ctx.ops.h0parity, reliable);
                for (const auto& [m, cc] : resid.coeffs) cut.add_term(m, cc);
                if (!cut.is_zero()) {
                    out.zero = false;
                    out.first_nonzero = cut;
                    report << "nonzero residual at external indices (" << x
                           << "," << y << "," << z << ")\n";
                }
            }
    report << (out.zero ? "residual 0 through degree " + std::to_string(reliable)
                        : "FAILED");
    out.report = report.str();
    return out;
}

}  // namespace chcalc
