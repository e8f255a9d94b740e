#include "chcalc/graphsum.hpp"

#include <sstream>

namespace chcalc {

void GraphSum::add(const Graph& g, const Rat& c) {
    if (c == 0) return;
    CanonicalGraph cg = canonicalize(g);
    if (cg.sign == 0) return;  // odd under its own symmetry
    add_canonical(cg.encoding, cg.graph, c * cg.sign);
}

void GraphSum::add_canonical(const std::string& enc, const Graph& rep,
                             const Rat& c) {
    if (c == 0) return;
    auto it = terms.find(enc);
    if (it == terms.end()) {
        terms.emplace(enc, Term{c, rep});
    } else {
        it->second.coeff += c;
        if (it->second.coeff == 0) terms.erase(it);
    }
}

GraphSum& GraphSum::operator+=(const GraphSum& o) {
    for (const auto& [enc, t] : o.terms) add_canonical(enc, t.rep, t.coeff);
    return *this;
}

GraphSum& GraphSum::operator*=(const Rat& c) {
    if (c == 0) {
        terms.clear();
        return *this;
    }
    for (auto& [enc, t] : terms) t.coeff *= c;
    return *this;
}

GraphSum operator*(const Rat& c, const GraphSum& s) {
    GraphSum out = s;
    out *= c;
    return out;
}

std::string GraphSum::str() const {
    std::ostringstream os;
    for (const auto& [enc, t] : terms)
        os << t.coeff.get_str() << "  " << enc << "\n";
    return os.str();
}

}  // namespace chcalc
