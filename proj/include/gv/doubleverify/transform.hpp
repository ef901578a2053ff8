#pragma once

#include "gv/algebroid/examples.hpp"
#include "gv/bundles/matrix.hpp"
#include "gv/doubleverify/structure.hpp"

#include <vector>

namespace gv {

/// Linear change of double-vector-bundle coordinates on Pi^2 D for even data:
/// x' = L x + c, xi' = P xi, eta' = R eta, z' = S z + T xi eta.
struct FrameChange {
    std::vector<std::vector<Scalar>> base_linear;
    std::vector<Scalar> base_shift;
    std::vector<std::vector<Scalar>> a, b, k;
    std::vector<std::vector<std::vector<Scalar>>> mixed; // T[i][alpha][mu]
};

inline FrameChange random_frame_change(Rng& rng, const DoubleShape& s, bool shift = true) {
    FrameChange g;
    g.base_linear = random_invertible(rng, s.base.size());
    for (std::size_t a = 0; a < s.base.size(); ++a) g.base_shift.push_back(shift ? random_scalar(rng, 2, false) : Scalar(0));
    g.a = random_invertible(rng, s.a.size());
    g.b = random_invertible(rng, s.b.size());
    g.k = random_invertible(rng, s.k.size());
    g.mixed.assign(s.a.size(), std::vector<std::vector<Scalar>>(s.b.size(), std::vector<Scalar>(s.k.size())));
    for (auto& plane : g.mixed)
        for (auto& row : plane)
            for (auto& e : row) e = random_scalar(rng, 2, false);
    return g;
}

/// Structure functions of the same double structure in the primed coordinates.
inline DoubleStructureFunctions transform(const DoubleStructureFunctions& sf, const FrameChange& g) {
    const auto& s = sf.shape();
    if (!s.is_even()) throw Error("frame changes are implemented for purely even data");
    const ChartPtr& ch = sf.charts().pi2;
    const auto la = kind_layout(s);
    using K = IndexKind;
    auto inv = [](const std::vector<std::vector<Scalar>>& m) {
        auto r = invert(m);
        if (!r) throw Error("frame change is not invertible");
        return *r;
    };
    const auto li = inv(g.base_linear), pi = inv(g.a), ri = inv(g.b), si = inv(g.k);
    auto var = [&](K kind, std::size_t r) { return Poly::variable(ch, la.index(kind, r)); };
    auto linear = [&](const std::vector<std::vector<Scalar>>& m, K kind, std::size_t row) {
        Poly p(ch);
        for (std::size_t c = 0; c < m[row].size(); ++c) p += m[row][c] * var(kind, c);
        return p;
    };
    const std::size_t n = s.base.size(), ra = s.a.size(), rb = s.b.size(), rk = s.k.size();
    ChartMap forward(ch, ch), back(ch, ch);
    std::vector<Poly> xi_old, eta_old;
    for (std::size_t a = 0; a < n; ++a) {
        forward.set(la.index(K::base, a), linear(g.base_linear, K::base, a) + Poly::constant(ch, g.base_shift[a]));
        Poly x = linear(li, K::base, a);
        for (std::size_t b = 0; b < n; ++b) x -= Poly::constant(ch, li[a][b] * g.base_shift[b]);
        back.set(la.index(K::base, a), x);
    }
    for (std::size_t i = 0; i < ra; ++i) {
        forward.set(la.index(K::a, i), linear(g.a, K::a, i));
        xi_old.push_back(linear(pi, K::a, i));
        back.set(la.index(K::a, i), xi_old.back());
    }
    for (std::size_t al = 0; al < rb; ++al) {
        forward.set(la.index(K::b, al), linear(g.b, K::b, al));
        eta_old.push_back(linear(ri, K::b, al));
        back.set(la.index(K::b, al), eta_old.back());
    }
    for (std::size_t mu = 0; mu < rk; ++mu) {
        Poly z = linear(g.k, K::k, mu);
        for (std::size_t i = 0; i < ra; ++i)
            for (std::size_t al = 0; al < rb; ++al) z += g.mixed[i][al][mu] * (var(K::a, i) * var(K::b, al));
        forward.set(la.index(K::k, mu), z);
    }
    for (std::size_t mu = 0; mu < rk; ++mu) {
        Poly z(ch);
        for (std::size_t nu = 0; nu < rk; ++nu) {
            Poly w = var(K::k, nu);
            for (std::size_t i = 0; i < ra; ++i)
                for (std::size_t al = 0; al < rb; ++al) w -= g.mixed[i][al][nu] * (xi_old[i] * eta_old[al]);
            z += si[mu][nu] * w;
        }
        back.set(la.index(K::k, mu), z);
    }
    const auto f = build_fields(sf);
    auto push = [&](const Derivation& q) {
        Derivation out(ch);
        for (std::size_t v = 0; v < ch->size(); ++v) out.set(v, substitute(apply(q, forward.image(v)), back));
        return out;
    };
    return structure_from_fields(s, push(f.q1), push(f.q2), sf.charts());
}

} // namespace gv
