#include <doctest.h>

#include "chcalc/graph.hpp"

using namespace chcalc;

TEST_CASE("theta graph canonical form is ordering-invariant") {
    Graph t = make_theta();
    CanonicalGraph c1 = canonicalize(t);
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        SurgeryResult r = reorder_randomly(t, seed);
        CanonicalGraph c2 = canonicalize(r.graph);
        CHECK(c2.encoding == c1.encoding);
        CHECK(c2.sign * r.sign == c1.sign);
    }
}

TEST_CASE("tripod relabeling gives equal encodings") {
    Graph a = make_tripod();
    Graph b;
    b.verts = {{2, 0, 1}};
    b.leaves[0] = Leaf{LeafKind::E0, -1, {}};
    b.leaves[1] = Leaf{LeafKind::E0, -1, {}};
    b.leaves[2] = Leaf{LeafKind::E0, -1, {}};
    CHECK(canonicalize(a).encoding == canonicalize(b).encoding);
}

TEST_CASE("theta and dumbbell are distinct (bruteforce oracle agrees)") {
    Graph t = make_theta();
    Graph d = make_dumbbell();
    CHECK(canonicalize(t).encoding != canonicalize(d).encoding);
    CHECK(!isomorphic_bruteforce(t, d));
    CHECK(isomorphic_bruteforce(t, t));
}

TEST_CASE("canonicalize is idempotent with sign +1") {
    for (const Graph& g : {make_theta(), make_dumbbell(), make_tadpole()}) {
        CanonicalGraph c = canonicalize(g);
        CanonicalGraph c2 = canonicalize(c.graph);
        CHECK(c2.encoding == c.encoding);
        CHECK(c2.sign == 1);
    }
}

TEST_CASE("automorphism counts of the classic graphs") {
    CHECK(automorphism_count(make_tripod()) == 6);
    CHECK(automorphism_count(make_theta()) == 12);
    CHECK(automorphism_count(make_dumbbell()) == 8);
    // tadpole: loop half-edges swap
    CHECK(automorphism_count(make_tadpole()) == 2);
}

TEST_CASE("genus computation") {
    CHECK(make_tripod().genus() == 0);
    CHECK(make_tadpole().genus() == 1);
    CHECK(make_theta().genus() == 2);
    CHECK(make_dumbbell().genus() == 2);
}

TEST_CASE("structural validation rejects malformed pairings") {
    Graph g = make_theta();
    g.edges[0].hb = g.edges[0].ha;  // pairing must be fixed-point-free
    std::string why;
    CHECK(!g.structurally_valid(&why));
    CHECK_THROWS(canonicalize(g));
}

TEST_CASE("aut respects fixed leaves") {
    Graph g = make_tripod();
    CHECK(automorphism_count(g, {0}) == 2);
    CHECK(automorphism_count(g, {0, 1}) == 1);
}

TEST_CASE("genus invariant under Id contraction") {
    // two trivalent vertices joined by Id edge, other slots leaves
    Graph g;
    g.verts = {{0, 1, 2}, {3, 4, 5}};
    g.edges.push_back(Edge{2, 5, chain_id(), false});
    for (int h : {0, 1, 3, 4}) g.leaves[h] = Leaf{LeafKind::E0, -1, {}};
    Graph c = contract_edge(g, 0);
    CHECK(c.verts.size() == 1);
    CHECK(c.degree(0) == 4);
    CHECK(c.genus() == g.genus());
}
