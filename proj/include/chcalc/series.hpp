#pragma once

#include <map>
#include <string>
#include <vector>

#include "chcalc/rational.hpp"

namespace chcalc {

// Multivariate polynomial in the T_{0,i} / T_{1,i} variables, truncated at a
// total degree. Variable id = level*s + i for the i-th H0 basis direction;
// odd variables square to zero and anticommute. Monomials are stored with
// exponents in this fixed variable order; signs are normalized to it.
struct TruncatedSeries {
    int s = 0;                   // number of H0 directions
    std::vector<int> vparity;    // size 2*s
    int cap = 6;
    std::map<std::vector<int>, Rat> coeffs;

    static TruncatedSeries zero(int s, const std::vector<int>& h0parity, int cap);
    static TruncatedSeries constant(int s, const std::vector<int>& h0parity,
                                    int cap, const Rat& c);

    int nvars() const { return 2 * s; }
    bool is_zero() const { return coeffs.empty(); }
    Rat constant_term() const;

    void add_term(const std::vector<int>& mono, const Rat& c);
    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator*=(const Rat& c);
    TruncatedSeries mul(const TruncatedSeries& o) const;
    // Left derivative; throws on unknown variable.
    TruncatedSeries derivative(int var) const;
    std::string str() const;  // sorted canonical text form
};

// Monomial product helper with Koszul sign; returns sign 0 when an odd
// variable squares.
struct MonoProduct {
    int sign = 1;
    std::vector<int> mono;
};
MonoProduct mono_mul(const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& vparity);

}  // namespace chcalc
