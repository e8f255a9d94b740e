#include <doctest.h>

#include "chcalc/evaluate.hpp"
#include "helpers.hpp"

using namespace chcalc;
using namespace chcalc::testing;

TEST_CASE("tripod with basis leaves computes the triple integral") {
    // trivial instance: int(e_i e_j e_k) with (i,j,k) = (1, 1, x): value 1
    AlgebraInstance a = trivial_instance();
    EvalContext ctx(a);
    Graph g;
    g.verts = {{0, 1, 2}};
    g.leaves[0] = Leaf{LeafKind::Basis, 0, {}};
    g.leaves[1] = Leaf{LeafKind::Basis, 0, {}};
    g.leaves[2] = Leaf{LeafKind::Basis, 1, {}};
    TruncatedSeries v = evaluate_dressed(g, ctx);
    CHECK(v.constant_term() == 1);
    // (1,1,1): int(1) = 0;  and (1,x,x): int(x^2) = 0
    g.leaves[2] = Leaf{LeafKind::Basis, 0, {}};
    CHECK(evaluate_dressed(g, ctx).constant_term() == 0);
}

TEST_CASE("supertrace example: Id loop with E0 leaf gives 2 T_{0,1}") {
    AlgebraInstance a = trivial_instance();
    EvalContext ctx(a);
    Graph g;
    g.verts = {{0, 1, 2}};
    g.edges.push_back(Edge{0, 1, chain_id(), false});
    g.leaves[2] = Leaf{LeafKind::E0, -1, {}};
    TruncatedSeries v = evaluate_dressed(g, ctx);
    TruncatedSeries want = TruncatedSeries::zero(2, {0, 0}, ctx.cap);
    want.add_term({1, 0, 0, 0}, 2);
    CHECK(series_equal(v, want));
}

TEST_CASE("GmGp edge vanishes on the trivial instance") {
    AlgebraInstance a = trivial_instance();
    EvalContext ctx(a);
    CHECK(evaluate_dressed(make_tadpole(), ctx).is_zero());
    CHECK(evaluate_dressed(make_theta(), ctx).is_zero());
}

static std::vector<AlgebraInstance> oracle_instances() {
    std::vector<AlgebraInstance> out;
    out.push_back(trivial_instance());
    out.push_back(relaxed_leibniz(7));
    out.push_back(relaxed_seventerm(7));
    if (auto t = relaxed_twelve(7)) out.push_back(*t);
    return out;
}

TEST_CASE("half-edge order invariance of dressed evaluation") {
    auto instances = oracle_instances();
    std::vector<Chain> alphabet = {chain_gmgp(), chain_gm(), chain_gp(),
                                   chain_id(),   chain_qgp(), chain_pi0()};
    int cases = 0;
    for (size_t ai = 0; ai < instances.size(); ++ai) {
        EvalContext ctx(instances[ai], 4);
        int s = ctx.h0_count();
        for (uint64_t seed = 1; seed <= 30; ++seed) {
            Graph g = random_graph(seed * 31 + ai, alphabet, s);
            TruncatedSeries v0 = evaluate_dressed(g, ctx);
            SurgeryResult r = reorder_randomly(g, seed * 77 + 5);
            TruncatedSeries v1 = evaluate_dressed(r.graph, ctx);
            v1 *= r.sign;
            INFO("seed ", seed, " instance ", ai, "\n", graph_debug(g));
            CHECK(series_equal(v0, v1));
            ++cases;
        }
    }
    CHECK(cases >= 100);
}

TEST_CASE("spanning tree choice does not change the dressed value") {
    auto instances = oracle_instances();
    std::vector<Chain> alphabet = {chain_gmgp(), chain_gm(), chain_gp(),
                                   chain_id()};
    int cases = 0;
    for (size_t ai = 0; ai < instances.size(); ++ai) {
        EvalContext ctx(instances[ai], 4);
        int s = ctx.h0_count();
        for (uint64_t seed = 1; seed <= 30; ++seed) {
            Graph g = random_graph(seed * 13 + 3 * ai, alphabet, s);
            TruncatedSeries v0 = evaluate(insert_J(g), ctx);
            for (uint64_t t = 1; t <= 3; ++t) {
                TruncatedSeries v1 = evaluate(insert_J(g, t), ctx);
                INFO("seed ", seed, "\n", graph_debug(g));
                CHECK(series_equal(v0, v1));
                ++cases;
            }
        }
    }
    CHECK(cases >= 100);
}

TEST_CASE("non-loop Id edge contraction preserves the value") {
    auto instances = oracle_instances();
    std::vector<Chain> alphabet = {chain_gmgp(), chain_gm(), chain_id()};
    int cases = 0;
    for (size_t ai = 0; ai < instances.size(); ++ai) {
        EvalContext ctx(instances[ai], 4);
        int s = ctx.h0_count();
        for (uint64_t seed = 1; seed <= 40; ++seed) {
            Graph g = random_graph(seed * 97 + ai, alphabet, s);
            int site = -1;
            for (int i = 0; i < (int)g.edges.size(); ++i) {
                const Edge& e = g.edges[i];
                if (e.chain.is_id() && g.vertex_of(e.ha) != g.vertex_of(e.hb)) {
                    site = i;
                    break;
                }
            }
            if (site < 0) continue;
            Graph c = contract_edge(g, site);
            INFO("seed ", seed, "\n", graph_debug(g));
            CHECK(series_equal(evaluate_dressed(g, ctx),
                               evaluate_dressed(c, ctx)));
            ++cases;
        }
    }
    CHECK(cases >= 20);
}

TEST_CASE("degree-2 vertex fusion preserves the value") {
    auto instances = oracle_instances();
    for (size_t ai = 0; ai < instances.size(); ++ai) {
        EvalContext ctx(instances[ai], 4);
        int s = ctx.h0_count();
        std::vector<Chain> mid = {chain_gm(), chain_gp(), chain_gmgp(),
                                  chain_qgp()};
        for (uint64_t seed = 1; seed <= 16; ++seed) {
            std::mt19937_64 rng(seed);
            Graph g;
            g.verts = {{0, 1, 2}, {3, 4}, {5, 6, 7}};
            g.leaves[0] = Leaf{LeafKind::Basis, (int)(rng() % s), {}};
            g.leaves[1] = Leaf{LeafKind::E0, -1, {}};
            g.leaves[6] = Leaf{LeafKind::E0, -1, {}};
            g.leaves[7] = Leaf{LeafKind::Basis, (int)(rng() % s), {}};
            Edge e1{2, 3, mid[rng() % mid.size()], false};
            Edge e2{4, 5, mid[rng() % mid.size()], false};
            if (rng() % 2) std::swap(e1.ha, e1.hb);
            if (rng() % 2) std::swap(e2.ha, e2.hb);
            g.edges = {e1, e2};
            SurgeryResult r = fuse_through_vertex(g, 1);
            TruncatedSeries v0 = evaluate_dressed(g, ctx);
            if (r.sign == 0) {
                INFO(graph_debug(g));
                CHECK(v0.is_zero());
                continue;
            }
            TruncatedSeries v1 = evaluate_dressed(r.graph, ctx);
            v1 *= r.sign;
            INFO("seed ", seed, "\n", graph_debug(g));
            CHECK(series_equal(v0, v1));
        }
    }
}

TEST_CASE("vertex integration by parts: sum of Q placements vanishes") {
    AlgebraInstance a = relaxed_leibniz(11);
    EvalContext ctx(a, 4);
    int s = ctx.h0_count();
    std::vector<Chain> alphabet = {chain_gmgp(), chain_gp(), chain_id(),
                                   chain_gm()};
    int cases = 0;
    for (uint64_t seed = 1; seed <= 60; ++seed) {
        Graph g = random_graph(seed * 71 + 2, alphabet, s);
        int v = (int)(seed % g.verts.size());
        TruncatedSeries total = TruncatedSeries::zero(s, ctx.ops.h0parity, 4);
        for (int h : g.verts[v]) {
            if (g.leaves.count(h)) continue;  // Q(H0 leaf) = 0
            SurgeryResult r = compose_at(g, h, Op::Q);
            if (r.sign == 0) continue;
            TruncatedSeries t = evaluate_dressed(r.graph, ctx);
            t *= r.sign;
            total += t;
        }
        INFO("seed ", seed, " vertex ", v, "\n", graph_debug(g));
        CHECK(total.is_zero());
        ++cases;
    }
    CHECK(cases >= 50);
}
