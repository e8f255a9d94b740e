#include "chcalc/chain.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace chcalc {

int op_parity(Op p) {
    switch (p) {
        case Op::Q:
        case Op::Gm:
        case Op::Gp: return 1;
        case Op::Pi0:
        case Op::J: return 0;
    }
    return 0;
}

int op_flip_eps(Op p) { return p == Op::Q ? -1 : 1; }

int Chain::parity() const {
    int s = 0;
    for (Op p : word) s ^= op_parity(p);
    return s;
}

static const char* op_name(Op p) {
    switch (p) {
        case Op::Q: return "Q";
        case Op::Gm: return "Gm";
        case Op::Gp: return "Gp";
        case Op::Pi0: return "Pi0";
        case Op::J: return "J";
    }
    return "?";
}

std::string Chain::str() const {
    if (word.empty()) return "Id";
    std::string s;
    for (Op p : word) s += op_name(p);
    return s;
}

// One local rewrite pass; returns true if anything changed. `sign` may flip,
// or be set to 0 when the word vanishes.
static bool reduce_pass(Word& w, int& sign) {
    for (size_t i = 0; i + 1 < w.size(); ++i) {
        Op a = w[i], b = w[i + 1];
        // J commutation: push J right.
        if (a == Op::J && b == Op::J) {
            w.erase(w.begin() + i, w.begin() + i + 2);
            return true;
        }
        if (a == Op::J && b != Op::J) {
            if (op_parity(b)) sign = -sign;
            std::swap(w[i], w[i + 1]);
            return true;
        }
        // Nilpotents.
        if ((a == Op::Q && b == Op::Q) || (a == Op::Gm && b == Op::Gm) ||
            (a == Op::Gp && b == Op::Gp)) {
            sign = 0;
            return true;
        }
        // Pi0 absorbs/kills.
        if (a == Op::Pi0 && b == Op::Pi0) {
            w.erase(w.begin() + i);
            return true;
        }
        if ((a == Op::Pi0 && b != Op::Pi0 && b != Op::J) ||
            (b == Op::Pi0 && a != Op::Pi0 && a != Op::J)) {
            // Q Pi0 = Pi0 Q = Gm Pi0 = Pi0 Gm = Gp Pi0 = Pi0 Gp = 0.
            sign = 0;
            return true;
        }
        // Normal order: Gm to the left (Q Gm = -Gm Q, Gp Gm = -Gm Gp).
        if ((a == Op::Q || a == Op::Gp) && b == Op::Gm) {
            sign = -sign;
            std::swap(w[i], w[i + 1]);
            return true;
        }
    }
    // Three-letter identities on the Q/Gp core: QGpQ = Q, GpQGp = Gp.
    for (size_t i = 0; i + 2 < w.size(); ++i) {
        if (w[i] == Op::Q && w[i + 1] == Op::Gp && w[i + 2] == Op::Q) {
            w.erase(w.begin() + i + 1, w.begin() + i + 3);
            return true;
        }
        if (w[i] == Op::Gp && w[i + 1] == Op::Q && w[i + 2] == Op::Gp) {
            w.erase(w.begin() + i + 1, w.begin() + i + 3);
            return true;
        }
    }
    return false;
}

SignedChain reduce(const Word& w0) {
    Word w = w0;
    int sign = 1;
    while (reduce_pass(w, sign)) {
        if (sign == 0) return {0, Chain{}};
    }
    return {sign, Chain{std::move(w)}};
}

SignedChain compose(const Chain& a, const Chain& b) {
    Word w = a.word;
    w.insert(w.end(), b.word.begin(), b.word.end());
    return reduce(w);
}

SignedChain flip(const Chain& c) {
    int odd = 0;
    int sign = 1;
    for (Op p : c.word) {
        odd += op_parity(p);
        sign *= op_flip_eps(p);
    }
    if ((odd * (odd - 1) / 2) % 2) sign = -sign;
    Word rev(c.word.rbegin(), c.word.rend());
    SignedChain r = reduce(rev);
    r.sign *= sign;
    return r;
}

Chain chain_id() { return Chain{}; }
Chain chain_gmgp() { return Chain{{Op::Gm, Op::Gp}}; }
Chain chain_pi0() { return Chain{{Op::Pi0}}; }
Chain chain_qgp() { return Chain{{Op::Q, Op::Gp}}; }
Chain chain_gpq() { return Chain{{Op::Gp, Op::Q}}; }
Chain chain_gp() { return Chain{{Op::Gp}}; }
Chain chain_gm() { return Chain{{Op::Gm}}; }

std::optional<Chain> chain_from_tag(const std::string& tag) {
    static const std::map<std::string, Chain> table = {
        {"Id", chain_id()},     {"GmGp", chain_gmgp()}, {"Pi0", chain_pi0()},
        {"QGp", chain_qgp()},   {"GpQ", chain_gpq()},   {"Gp", chain_gp()},
        {"Gm", chain_gm()},
    };
    auto it = table.find(tag);
    if (it != table.end()) return it->second;
    // General words like "GmQGpJ" parse letter-greedily.
    Word w;
    size_t i = 0;
    while (i < tag.size()) {
        if (tag.compare(i, 3, "Pi0") == 0) { w.push_back(Op::Pi0); i += 3; }
        else if (tag.compare(i, 2, "Gm") == 0) { w.push_back(Op::Gm); i += 2; }
        else if (tag.compare(i, 2, "Gp") == 0) { w.push_back(Op::Gp); i += 2; }
        else if (tag[i] == 'Q') { w.push_back(Op::Q); i += 1; }
        else if (tag[i] == 'J') { w.push_back(Op::J); i += 1; }
        else return std::nullopt;
    }
    SignedChain r = reduce(w);
    if (r.sign != 1) return std::nullopt;
    return r.chain;
}

std::string chain_tag(const Chain& c) { return c.str(); }

}  // namespace chcalc
