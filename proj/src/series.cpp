#include "chcalc/series.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace chcalc {

TruncatedSeries TruncatedSeries::zero(int s, const std::vector<int>& h0parity,
                                      int cap) {
    TruncatedSeries t;
    t.s = s;
    t.cap = cap;
    t.vparity.resize(2 * s);
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < s; ++i) t.vparity[l * s + i] = h0parity[i];
    return t;
}

TruncatedSeries TruncatedSeries::constant(int s, const std::vector<int>& h0parity,
                                          int cap, const Rat& c) {
    TruncatedSeries t = zero(s, h0parity, cap);
    if (c != 0) t.coeffs[std::vector<int>(2 * s, 0)] = c;
    return t;
}

Rat TruncatedSeries::constant_term() const {
    auto it = coeffs.find(std::vector<int>(nvars(), 0));
    return it == coeffs.end() ? Rat(0) : it->second;
}

void TruncatedSeries::add_term(const std::vector<int>& mono, const Rat& c) {
    if (c == 0) return;
    int deg = std::accumulate(mono.begin(), mono.end(), 0);
    if (deg > cap) return;
    auto it = coeffs.find(mono);
    if (it == coeffs.end())
        coeffs[mono] = c;
    else {
        it->second += c;
        if (it->second == 0) coeffs.erase(it);
    }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    for (const auto& [m, c] : o.coeffs) add_term(m, c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Rat& c) {
    if (c == 0) {
        coeffs.clear();
        return *this;
    }
    for (auto& [m, v] : coeffs) v *= c;
    return *this;
}

MonoProduct mono_mul(const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& vparity) {
    MonoProduct r;
    r.mono = a;
    int n = (int)a.size();
    // Count anticommutations: each odd var v in b moves left past odd vars
    // w > v present in a.
    int swaps = 0;
    for (int v = 0; v < n; ++v) {
        if (!b[v]) continue;
        if (vparity[v]) {
            if (a[v]) {
                r.sign = 0;
                return r;
            }
            for (int w = v + 1; w < n; ++w)
                if (vparity[w] && a[w]) swaps ^= 1;
        }
        r.mono[v] += b[v];
    }
    if (swaps) r.sign = -1;
    return r;
}

TruncatedSeries TruncatedSeries::mul(const TruncatedSeries& o) const {
    TruncatedSeries out = zero(s, std::vector<int>(vparity.begin(),
                                                   vparity.begin() + s),
                               std::min(cap, o.cap));
    for (const auto& [ma, ca] : coeffs)
        for (const auto& [mb, cb] : o.coeffs) {
            MonoProduct p = mono_mul(ma, mb, vparity);
            if (p.sign == 0) continue;
            out.add_term(p.mono, ca * cb * p.sign);
        }
    return out;
}

TruncatedSeries TruncatedSeries::derivative(int var) const {
    if (var < 0 || var >= nvars())
        throw std::invalid_argument("derivative: unknown variable");
    TruncatedSeries out = zero(s, std::vector<int>(vparity.begin(),
                                                   vparity.begin() + s),
                               cap);
    for (const auto& [m, c] : coeffs) {
        if (!m[var]) continue;
        std::vector<int> d = m;
        Rat f = c * m[var];
        d[var] -= 1;
        if (vparity[var]) {
            int swaps = 0;
            for (int w = 0; w < var; ++w)
                if (vparity[w] && m[w]) swaps ^= 1;
            if (swaps) f = -f;
        }
        out.add_term(d, f);
    }
    return out;
}

std::string TruncatedSeries::str() const {
    std::ostringstream os;
    for (const auto& [m, c] : coeffs) {
        os << c.get_str();
        for (int v = 0; v < (int)m.size(); ++v) {
            if (!m[v]) continue;
            os << " T" << (v < s ? 0 : 1) << "_" << (v % s);
            if (m[v] > 1) os << "^" << m[v];
        }
        os << "\n";
    }
    if (coeffs.empty()) os << "0\n";
    return os.str();
}

}  // namespace chcalc
