#pragma once

#include <map>
#include <string>

#include "chcalc/graph.hpp"
#include "chcalc/rational.hpp"

namespace chcalc {

// Formal rational linear combination of canonical graphs. Terms are merged
// by canonical encoding with the canonicalization sign applied; zero
// coefficients and sign-degenerate graphs are dropped.
struct GraphSum {
    struct Term {
        Rat coeff;
        Graph rep;  // canonical representative
    };
    std::map<std::string, Term> terms;

    void add(const Graph& g, const Rat& c);
    void add_canonical(const std::string& enc, const Graph& rep, const Rat& c);
    GraphSum& operator+=(const GraphSum& o);
    GraphSum& operator*=(const Rat& c);
    bool empty() const { return terms.empty(); }
    size_t size() const { return terms.size(); }
    std::string str() const;
};

GraphSum operator*(const Rat& c, const GraphSum& s);

}  // namespace chcalc
