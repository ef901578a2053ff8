#pragma once

#include "gv/bundles/multiple.hpp"

#include <string>
#include <vector>

namespace gv {

inline constexpr FamilyMask side1 = 1;
inline constexpr FamilyMask side2 = 2;
inline constexpr FamilyMask core_mask = 3;
inline const Partition mixed_partition{1, 2};

inline MultipleBundle make_double(std::vector<Variable> base, std::vector<Parity> a, std::vector<Parity> b,
                                  std::vector<Parity> k) {
    return MultipleBundle(2, std::move(base), {{}, std::move(a), std::move(b), std::move(k)});
}

inline bool is_even_bundle(const MultipleBundle& d) {
    for (FamilyMask s = 1; s <= d.full_mask(); ++s)
        for (std::size_t i = 0; i < d.rank(s); ++i)
            if (is_odd(d.parity(s, i))) return false;
    for (const auto& v : d.base_chart()->vars())
        if (is_odd(v.parity)) return false;
    return true;
}

struct PiCommuteReport {
    bool ok = false;
    bool core_sign_flip = false; // agreement needed z -> -z
    std::vector<std::string> discrepancies;
    MultipleBundle ba; // reverse direction 2, then direction 1
    MultipleBundle ab; // reverse direction 1, then direction 2
};

/// Compares the two orders of complete reversion. All blocks must agree except
/// the mixed core block, which may agree up to an overall sign (z -> -z).
inline PiCommuteReport check_pi_commute(const MultipleBundle& d) {
    if (d.directions() != 2) throw Error("check_pi_commute needs a double vector bundle");
    PiCommuteReport r{false, false, {}, d.reverse(2).reverse(1), d.reverse(1).reverse(2)};
    const auto& bc = r.ba.base_chart();
    bool same_mixed = true, negated_mixed = true;
    for (const auto& [p, blk] : r.ba.blocks()) {
        const auto& other = r.ab.block(p);
        for (std::size_t k = 0; k < blk.entries.size(); ++k) {
            const Poly& x = blk.entries[k];
            Poly y = embed(other.entries[k], bc);
            if (p == mixed_partition) {
                if (!(x == y)) same_mixed = false;
                if (!(x == -y)) negated_mixed = false;
            } else if (!(x == y)) {
                r.discrepancies.push_back("block " + std::to_string(p.size()) + "-factor entry " + std::to_string(k) +
                                          " differs outside the core");
            }
        }
    }
    if (!same_mixed && !negated_mixed) r.discrepancies.push_back("mixed core block differs by more than a sign");
    r.core_sign_flip = !same_mixed && negated_mixed;
    r.ok = r.discrepancies.empty();
    return r;
}

/// z -> -z on the chart of the completely reversed bundle.
inline ChartMap core_sign_map(const MultipleBundle& d) {
    const ChartPtr& ch = d.chart();
    ChartMap m(ch, ch);
    for (int primed = 0; primed < 2; ++primed)
        for (std::size_t i = 0; i < d.rank(core_mask); ++i) {
            const auto v = d.var_index(core_mask, i, primed != 0);
            m.set(v, -Poly::variable(ch, v));
        }
    return m;
}

inline MultipleBundle swap_sides(const MultipleBundle& d) {
    if (!is_even_bundle(d)) throw ParityError("side swap is implemented for even bundles only");
    auto fam = d.families();
    std::swap(fam[1], fam[2]);
    std::vector<Variable> base = d.base_chart()->vars();
    MultipleBundle out(2, base, fam);
    auto put = [&](FamilyMask to, FamilyMask from) {
        auto& b = out.block(Partition{to});
        b.entries = d.block(Partition{from}).entries;
        for (auto& e : b.entries) e = embed(e, out.base_chart());
    };
    put(1, 2);
    put(2, 1);
    put(3, 3);
    const auto& x = d.block(mixed_partition);
    auto& y = out.block(mixed_partition);
    for (std::size_t i = 0; i < d.rank(1); ++i)
        for (std::size_t a = 0; a < d.rank(2); ++a)
            for (std::size_t m = 0; m < d.rank(3); ++m)
                y.entries[y.flat({a, i, m})] = embed(x.entries[x.flat({i, a, m})], out.base_chart());
    return out;
}

/// Dual over side 1: fibers (side2, core) are dualized. The result has sides
/// (side1, core*) and core side2*.
inline MultipleBundle dualize_side1(const MultipleBundle& d, unsigned degree) {
    if (d.directions() != 2) throw Error("dualize needs a double vector bundle");
    if (!is_even_bundle(d)) throw ParityError("dualization is implemented for even bundles only");
    const auto& fam = d.families();
    std::vector<Variable> base = d.base_chart()->vars();
    MultipleBundle out(2, base, {{}, fam[1], fam[3], fam[2]});
    const ChartPtr& bc = out.base_chart();
    const std::vector<bool> all(bc->size(), true);
    auto emb = [&](const PolyMatrix& m) {
        PolyMatrix r(bc, m.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = embed(m(i, j), bc);
        return r;
    };
    PolyMatrix u = emb(d.square(1));
    PolyMatrix winv = neumann_inverse(emb(d.square(2)), all, degree);
    PolyMatrix zinv = neumann_inverse(emb(d.square(3)), all, degree);
    auto set_square = [&](FamilyMask s, const PolyMatrix& m) {
        auto& b = out.block(Partition{s});
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) b.entries[i * m.size() + j] = m(i, j);
    };
    set_square(1, u);
    set_square(2, zinv.transpose());
    set_square(3, winv.transpose());
    const auto& x = d.block(mixed_partition);
    auto& y = out.block(mixed_partition);
    const std::size_t ra = d.rank(1), rb = d.rank(2), rc = d.rank(3);
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t mp = 0; mp < rc; ++mp)
            for (std::size_t al = 0; al < rb; ++al) {
                Poly acc(bc);
                for (std::size_t ap = 0; ap < rb; ++ap) {
                    if (winv(al, ap).is_zero()) continue;
                    for (std::size_t mu = 0; mu < rc; ++mu) {
                        const Poly& xe = x.entries[x.flat({i, ap, mu})];
                        if (xe.is_zero() || zinv(mu, mp).is_zero()) continue;
                        acc += winv(al, ap) * embed(xe, bc) * zinv(mu, mp);
                    }
                }
                y.entries[y.flat({i, mp, al})] = (-acc).truncate(all, degree);
            }
    return out;
}

/// Dual in direction `side` (1: over A, giving D^{*A}; 2: over B, giving D^{*B}).
inline MultipleBundle dualize(const MultipleBundle& d, unsigned side, unsigned degree) {
    if (side == 1) return dualize_side1(d, degree);
    if (side == 2) return swap_sides(dualize_side1(swap_sides(d), degree));
    throw Error("dualization side must be 1 or 2");
}

inline VectorBundleData core(const MultipleBundle& d) {
    return {d.families().at(d.full_mask()), d.square(d.full_mask())};
}

struct PairingCheck {
    bool ok = false;
    Poly residual;
};

/// Invariance of u^i u_i + sign * w^a w_a (chart names u1, u_1, w1, w_1, z_1) under the paired laws of D^{*A}
/// (fibers u^i, w_a over K*) and D^{*B} (fibers u_i, w^a over K*).
inline PairingCheck pairing_check(const MultipleBundle& dual_a, const MultipleBundle& dual_b, int sign,
                                  unsigned degree) {
    const std::size_t ra = dual_a.rank(1), rk = dual_a.rank(2), rb = dual_a.rank(3);
    if (dual_b.rank(1) != rk || dual_b.rank(2) != rb || dual_b.rank(3) != ra)
        throw Error("pairing_check: duals have mismatched shapes");
    const ChartPtr& bc = dual_a.base_chart();
    for (std::size_t i = 0; i < rk; ++i)
        for (std::size_t j = 0; j < rk; ++j)
            if (!(dual_a.square(2)(i, j) == embed(dual_b.square(1)(i, j), bc)))
                throw Error("pairing_check: duals do not come from the same bundle");
    ChartBuilder cb(0);
    for (const auto& v : bc->vars()) cb.add(v.name, v.parity);
    auto fam = [&](const std::string& pre, std::size_t n) {
        for (int primed = 0; primed < 2; ++primed)
            for (std::size_t i = 0; i < n; ++i)
                cb.add(pre + std::to_string(i + 1) + (primed ? "'" : ""), Parity::even);
    };
    fam("u", ra);
    fam("u_", ra);
    fam("w", rb);
    fam("w_", rb);
    fam("z_", rk);
    ChartPtr ch = cb.build();
    auto var = [&](const std::string& pre, std::size_t i, bool primed) {
        return Poly::variable(ch, pre + std::to_string(i + 1) + (primed ? "'" : ""));
    };
    auto e = [&](const Poly& p) { return embed(p, ch); };
    ChartMap law(ch, ch);
    const auto ua = dual_a.square(1), wb = dual_b.square(2), zk = dual_a.square(2);
    const auto wa = dual_a.square(3), ub = dual_b.square(3);
    const auto& xa = dual_a.block(mixed_partition);
    const auto& xb = dual_b.block(mixed_partition);
    for (std::size_t i = 0; i < ra; ++i) {
        Poly up(ch), dn(ch);
        for (std::size_t ip = 0; ip < ra; ++ip) {
            up += var("u", ip, true) * e(ua(ip, i));
            dn += var("u_", ip, true) * e(ub(ip, i));
        }
        for (std::size_t m = 0; m < rk; ++m)
            for (std::size_t a = 0; a < rb; ++a)
                dn += var("z_", m, true) * var("w", a, true) * e(xb.entries[xb.flat({m, a, i})]);
        law.set("u" + std::to_string(i + 1), up);
        law.set("u_" + std::to_string(i + 1), dn);
    }
    for (std::size_t a = 0; a < rb; ++a) {
        Poly up(ch), dn(ch);
        for (std::size_t ap = 0; ap < rb; ++ap) {
            up += var("w", ap, true) * e(wb(ap, a));
            dn += var("w_", ap, true) * e(wa(ap, a));
        }
        for (std::size_t i = 0; i < ra; ++i)
            for (std::size_t m = 0; m < rk; ++m)
                dn += var("u", i, true) * var("z_", m, true) * e(xa.entries[xa.flat({i, m, a})]);
        law.set("w" + std::to_string(a + 1), up);
        law.set("w_" + std::to_string(a + 1), dn);
    }
    for (std::size_t m = 0; m < rk; ++m) {
        Poly z(ch);
        for (std::size_t mp = 0; mp < rk; ++mp) z += var("z_", mp, true) * e(zk(mp, m));
        law.set("z_" + std::to_string(m + 1), z);
    }
    auto form = [&](bool primed) {
        Poly f(ch);
        for (std::size_t i = 0; i < ra; ++i) f += var("u", i, primed) * var("u_", i, primed);
        for (std::size_t a = 0; a < rb; ++a) f += Scalar(sign) * (var("w", a, primed) * var("w_", a, primed));
        return f;
    };
    std::vector<bool> mask(ch->size(), false);
    for (std::size_t k = 0; k < bc->size(); ++k) mask[k] = true;
    Poly r = (substitute(form(false), law) - form(true)).truncate(mask, degree);
    return {r.is_zero(), r};
}

inline PairingCheck pairing_check(const MultipleBundle& d, int sign, unsigned degree) {
    return pairing_check(dualize(d, 1, degree), dualize(d, 2, degree), sign, degree);
}

} // namespace gv
