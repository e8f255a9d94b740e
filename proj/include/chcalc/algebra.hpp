#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chcalc/chain.hpp"
#include "chcalc/rational.hpp"

namespace chcalc {

using Vec = std::vector<Rat>;
using Mat = std::vector<std::vector<Rat>>;

Mat mat_identity(int n);
Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_add(const Mat& a, const Mat& b, const Rat& sa = 1, const Rat& sb = 1);
Vec mat_vec(const Mat& a, const Vec& x);
std::optional<Mat> mat_inverse(const Mat& a);
Mat mat_transpose(const Mat& a);
bool mat_is_zero(const Mat& a);

// Finite-dimensional supercommutative algebra carrying Q, G- and an integral.
struct AlgebraInstance {
    int dim = 0;
    std::vector<int> parity;  // 0 even, 1 odd
    // mul[i][j][k]: coefficient of f_k in f_i * f_j
    std::vector<std::vector<Vec>> mul;
    int unit = 0;
    Mat Q;   // Q(f_j) = sum_i Q[i][j] f_i
    Mat Gm;
    Vec integral;

    Vec multiply(const Vec& a, const Vec& b) const;
    Rat integrate(const Vec& a) const;
    Mat mult_operator(const Vec& a) const;  // x -> a*x
    Rat supertrace(const Mat& m) const;
    Vec basis_vec(int i) const;
};

struct DerivedOperators {
    Mat Gp, Pi0, Pi4, J;
    std::vector<int> h0basis;  // indices of an H0 basis inside the full basis*
    Mat h0vectors;             // columns: the H0 basis vectors (dim x s)
    std::vector<int> h0parity; // parity of each H0 basis vector
    Mat eta, etaInv;           // Gram matrix on the H0 basis and its inverse
    Mat pairing, pairingInv;   // g_ij = int f_i f_j and its inverse
    // *when H0 is spanned by standard basis vectors; otherwise h0basis is
    // empty and h0vectors carries the constructed basis.
};

struct AxiomCheck {
    std::string name;
    bool pass = false;
    std::string witness;  // empty when passing
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool structural_ok = true;
    std::string structural_error;
    bool all_pass() const;
    std::string str() const;
};

AxiomReport check_axioms(const AlgebraInstance& a);

// Throws std::runtime_error (carrying the offending subspace dimension) when
// no quadruple decomposition exists.
DerivedOperators derive_operators(const AlgebraInstance& a);

// Like derive_operators, but instances without a quadruple decomposition get
// Gp = 0, Pi0 = Id and H0 = ker Q intersect ker Gm; used to evaluate graphs
// over relaxed validation instances.
DerivedOperators derive_operators_relaxed(const AlgebraInstance& a);

// --- instances ---

// H = Q[x]/x^2 with Q = G- = 0 and int(alpha + beta x) = beta.
AlgebraInstance trivial_instance();

// Frobenius algebra Q + V + Q.omega with V = two cross-paired quadruples and
// v*w = beta(v,w) omega; satisfies every cH axiom with H4 != 0.
AlgebraInstance quadruple_pair_instance();

// Parameters for the small-instance search.
struct SearchParams {
    int max_dim = 8;
    int coeff_height = 2;
    long budget = 20000;   // candidate evaluations
    uint64_t seed = 1;
    bool require_h4 = false;
};
std::optional<AlgebraInstance> find_instance(const SearchParams& p);

// Relaxed catalog instances for per-rule validation. Every instance is exact
// and randomly conjugated by a seeded parity-preserving basis change; the
// guaranteed properties are listed per generator.
//
//  leibniz  : Lambda[t1,t2], Q = t1 d/dt2; axiom 1 for Q, Leibniz,
//             Q-adjoint integral, nondegenerate pairing.
//  seventerm: Q[x]/x^3 (x) Lambda[t], G- = d/dt d/dx; G-^2 = 0, 7-term,
//             G--adjoint integral, nondegenerate pairing.
//  full_kernel: both operators on Q[x]/x^2 set to zero (trivial instance
//             conjugated); satisfies every axiom with H4 = 0.
AlgebraInstance relaxed_leibniz(uint64_t seed);
AlgebraInstance relaxed_seventerm(uint64_t seed);
AlgebraInstance relaxed_full_kernel(uint64_t seed);

// Searches (linearly, exactly) for G- on a fixed algebra satisfying the
// chosen linear axioms: second-order 7-term, the 1/12 supertrace axiom and
// integral adjointness. Returns an instance with a nonzero such G- when one
// exists. Used to validate the supertrace rewrite rules.
std::optional<AlgebraInstance> relaxed_twelve(uint64_t seed);

// Basis-conjugation by a random parity-preserving invertible T; preserves
// every identity of the instance.
AlgebraInstance conjugate(const AlgebraInstance& a, uint64_t seed);

// --- plain-text file format (see README) ---
std::string write_instance(const AlgebraInstance& a);
// Returns error message with line number on failure.
struct ParseResult {
    std::optional<AlgebraInstance> instance;
    std::string error;
    int line = 0;
};
ParseResult parse_instance(std::istream& in);

}  // namespace chcalc
