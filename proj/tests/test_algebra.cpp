#include <doctest.h>

#include <sstream>

#include "chcalc/algebra.hpp"

using namespace chcalc;

TEST_CASE("trivial instance passes all axioms") {
    AlgebraInstance a = trivial_instance();
    AxiomReport rep = check_axioms(a);
    INFO(rep.str());
    CHECK(rep.all_pass());
}

TEST_CASE("parity-violating Q is a structural rejection") {
    AlgebraInstance a = trivial_instance();
    a.Q[1][0] = 1;  // Q(1) = x with both elements even
    AxiomReport rep = check_axioms(a);
    CHECK(!rep.structural_ok);
}

TEST_CASE("one-dimensional zero integral fails nondegeneracy") {
    AlgebraInstance a;
    a.dim = 1;
    a.parity = {0};
    a.unit = 0;
    a.mul.assign(1, std::vector<Vec>(1, Vec(1, 0)));
    a.mul[0][0][0] = 1;
    a.Q = Mat(1, Vec(1, 0));
    a.Gm = Mat(1, Vec(1, 0));
    a.integral = {0};
    AxiomReport rep = check_axioms(a);
    CHECK(rep.structural_ok);
    bool nondeg_failed = false;
    for (const auto& c : rep.checks)
        if (c.name == "scalar product nondegenerate" && !c.pass)
            nondeg_failed = true;
    CHECK(nondeg_failed);
}

TEST_CASE("derived operators of the trivial instance") {
    AlgebraInstance a = trivial_instance();
    DerivedOperators ops = derive_operators(a);
    CHECK(mat_is_zero(ops.Gp));
    CHECK(mat_is_zero(ops.Pi4));
    CHECK(ops.Pi0 == mat_identity(2));
    // eta = [[0,1],[1,0]] in basis {1, x}
    CHECK(ops.eta == Mat{{0, 1}, {1, 0}});
    CHECK(mat_mul(ops.etaInv, ops.eta) == mat_identity(2));
}

TEST_CASE("Pi0 and Pi4 are complementary projections") {
    AlgebraInstance a = trivial_instance();
    DerivedOperators ops = derive_operators(a);
    CHECK(mat_mul(ops.Pi0, ops.Pi4) == Mat(2, Vec(2, 0)));
    CHECK(mat_add(ops.Pi0, ops.Pi4) == mat_identity(2));
}

TEST_CASE("relaxed leibniz instance satisfies its contract") {
    for (uint64_t seed : {1, 2, 3}) {
        AlgebraInstance a = relaxed_leibniz(seed);
        AxiomReport rep = check_axioms(a);
        for (const auto& c : rep.checks) {
            if (c.name == "supercommutativity" || c.name == "associativity" ||
                c.name == "unit law" || c.name == "axiom1: Q^2 = 0" ||
                c.name == "axiom3: Leibniz" ||
                c.name == "integral: Q-adjointness" ||
                c.name == "scalar product nondegenerate") {
                INFO(c.name);
                CHECK(c.pass);
            }
        }
    }
}

TEST_CASE("relaxed seventerm instance satisfies its contract") {
    for (uint64_t seed : {1, 2, 3}) {
        AlgebraInstance a = relaxed_seventerm(seed);
        AxiomReport rep = check_axioms(a);
        for (const auto& c : rep.checks) {
            if (c.name == "supercommutativity" || c.name == "associativity" ||
                c.name == "unit law" || c.name == "axiom1: Gm^2 = 0" ||
                c.name == "axiom4: 7-term" ||
                c.name == "integral: Gm-adjointness" ||
                c.name == "scalar product nondegenerate") {
                INFO(c.name << " seed " << seed);
                CHECK(c.pass);
            }
        }
    }
}

TEST_CASE("instance file round trip and error reporting") {
    AlgebraInstance a = trivial_instance();
    std::string text = write_instance(a);
    std::istringstream in(text);
    ParseResult pr = parse_instance(in);
    REQUIRE(pr.instance.has_value());
    CHECK(pr.instance->dim == 2);
    CHECK(check_axioms(*pr.instance).all_pass());

    std::istringstream bad("dim 2\nparity ee\nwobble 1 2 3\n");
    ParseResult pb = parse_instance(bad);
    CHECK(!pb.instance.has_value());
    CHECK(pb.line == 3);

    std::istringstream empty("");
    CHECK(!parse_instance(empty).instance.has_value());
}

TEST_CASE("find_instance honest search") {
    SearchParams p;
    p.require_h4 = false;
    auto inst = find_instance(p);
    REQUIRE(inst.has_value());
    CHECK(check_axioms(*inst).all_pass());
}
