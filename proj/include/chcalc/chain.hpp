#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chcalc {

// Primitive operators appearing on edges. A chain is a composition word;
// chain {P0, P1, ..., Pk} acts as P0(P1(...Pk(x))), i.e. index 0 is applied
// last (matrix product left to right). The empty chain is Id.
enum class Op : uint8_t { Q, Gm, Gp, Pi0, J };

int op_parity(Op p);

// +1 for pairing-self-adjoint primitives, -1 for Q (from the integral rule
// with the extra sign).
int op_flip_eps(Op p);

using Word = std::vector<Op>;

struct Chain {
    Word word;  // reduced form; empty = Id

    bool is_id() const { return word.empty(); }
    int parity() const;
    bool operator==(const Chain& o) const { return word == o.word; }
    bool operator<(const Chain& o) const { return word < o.word; }
    std::string str() const;
};

// Reduced composition a o b (a applied after b). Returns (sign, chain);
// sign 0 means the composition vanishes identically.
struct SignedChain {
    int sign = 1;  // 0 => zero
    Chain chain;
};

SignedChain reduce(const Word& w);
SignedChain compose(const Chain& a, const Chain& b);

// Orientation reversal of the edge tensor built from this chain, in the
// super convention (Koszul-aware transpose). Returns the reduced reversed
// word with its global sign.
SignedChain flip(const Chain& c);

// Named chains from the bivector alphabet.
Chain chain_id();
Chain chain_gmgp();   // [G-G+]
Chain chain_pi0();    // [Pi0]
Chain chain_qgp();    // [QG+]
Chain chain_gpq();    // [G+Q]
Chain chain_gp();     // [G+]
Chain chain_gm();     // [G-]

std::optional<Chain> chain_from_tag(const std::string& tag);
std::string chain_tag(const Chain& c);  // canonical textual tag

}  // namespace chcalc
