#pragma once

#include "gv/algebroid/antialgebroid.hpp"
#include "gv/doubleverify/conditions.hpp"

#include <string>
#include <vector>

namespace gv {

/// A pair of algebroids on E and E* over the same base, in dual frames.
struct BialgebroidData {
    AntialgebroidData e;
    AntialgebroidData estar;
};

/// T* Pi E with x, xi^i (1,0), momenta pi_i of xi (0,1), momenta p_a of x (1,1),
/// laid out as the Pi^2 D chart of the double with sides E, E* and core T*M.
inline DoubleShape cotangent_shape(const BialgebroidData& b) {
    if (b.e.rank() != b.estar.rank()) throw ShapeError("QEstar", "E and E* have different ranks");
    if (b.e.base_size() != b.estar.base_size()) throw ShapeError("QEstar", "E and E* live over different bases");
    DoubleShape s;
    for (std::size_t a = 0; a < b.e.base_size(); ++a) {
        const auto& v = b.e.base()->var(a);
        if (b.estar.base()->var(a).name != v.name) throw ShapeError("QEstar", "E and E* use different base coordinates");
        s.base.push_back({v.name, v.parity, {}});
        s.k.push_back(v.parity);
    }
    for (std::size_t i = 0; i < b.e.rank(); ++i) {
        if (b.e.fiber()[i] != b.estar.fiber()[i]) throw ShapeError("QEstar", "dual frames must have matching parities");
        s.a.push_back(b.e.fiber()[i]);
        s.b.push_back(b.e.fiber()[i]);
    }
    return s;
}

/// Canonical even bracket {p_a, x^a} = 1, {pi_i, xi^i} = 1.
inline BracketTable canonical_table(const DoubleShape& s, const ChartPtr& chart) {
    const auto la = kind_layout(s);
    BracketTable t(chart, Parity::even);
    for (std::size_t a = 0; a < s.base.size(); ++a)
        t.set(la.index(IndexKind::k, a), la.index(IndexKind::base, a), Poly::constant(chart, 1));
    for (std::size_t i = 0; i < s.a.size(); ++i)
        t.set(la.index(IndexKind::b, i), la.index(IndexKind::a, i), Poly::constant(chart, 1));
    return t;
}

/// H_X = X^v p_v for a vector field X on Pi E (coordinates x, xi).
inline Poly fiberwise_hamiltonian(const Derivation& x, const DoubleShape& s, const ChartPtr& chart) {
    const auto la = kind_layout(s);
    Poly h(chart);
    for (std::size_t a = 0; a < s.base.size(); ++a)
        h += embed(x[a], chart) * Poly::variable(chart, la.index(IndexKind::k, a));
    for (std::size_t i = 0; i < s.a.size(); ++i)
        h += embed(x[s.base.size() + i], chart) * Poly::variable(chart, la.index(IndexKind::b, i));
    return h;
}

struct CotangentDouble {
    DoubleStructureFunctions sf;
    Poly h_e, h_estar;
    Poly hamiltonian_bracket; // {H_E, H_E*}
    AlgebroidReport e_report, estar_report;
    bool weights_ok = true;
    std::vector<std::string> notes;
};

/// H_E = xi^i Q_i^a p_a + 1/2 xi^i xi^j Q_ji^k pi_k and
/// H_E* = pi_i Q^ia p_a + 1/2 pi_i pi_j Q^ji_k xi^k.
inline CotangentDouble cotangent_double(const BialgebroidData& b) {
    const DoubleShape s = cotangent_shape(b);
    DoubleStructureFunctions shell(s);
    const auto& charts = shell.charts();
    const ChartPtr& ch = charts.pi2;
    const auto la = kind_layout(s);
    const BracketTable table = canonical_table(s, ch);

    auto e_report = check_algebroid(b.e), estar_report = check_algebroid(b.estar);
    if (!e_report.ok() || !estar_report.ok())
        throw Error(std::string("cotangent double needs two Lie algebroids; failing side: ") +
                    (!e_report.ok() ? "E" : "E*"));

    const Poly h_e = fiberwise_hamiltonian(b.e.field(), s, ch);
    // E* field in the coordinates pi_i: swap the roles of xi and pi.
    Poly h_estar(ch);
    const Scalar half(1, 2);
    auto xi = [&](std::size_t i) { return Poly::variable(ch, la.index(IndexKind::a, i)); };
    auto pi = [&](std::size_t i) { return Poly::variable(ch, la.index(IndexKind::b, i)); };
    auto p = [&](std::size_t a) { return Poly::variable(ch, la.index(IndexKind::k, a)); };
    for (std::size_t i = 0; i < s.a.size(); ++i)
        for (std::size_t a = 0; a < s.base.size(); ++a) h_estar += pi(i) * embed(b.estar.anchor(i, a), ch) * p(a);
    for (std::size_t i = 0; i < s.a.size(); ++i)
        for (std::size_t j = 0; j < s.a.size(); ++j)
            for (std::size_t k = 0; k < s.a.size(); ++k)
                h_estar += half * (pi(i) * pi(j) * embed(b.estar.structure(j, i, k), ch) * xi(k));

    const Derivation q1 = hamiltonian_derivation(table, h_e), q2 = hamiltonian_derivation(table, h_estar);
    CotangentDouble out{structure_from_fields(s, q1, q2, charts), h_e, h_estar, bracket(table, h_e, h_estar),
                        e_report, estar_report, true, {}};
    for (std::size_t v = 0; v < ch->size(); ++v) {
        for (const auto& [q, w] : {std::pair{&q1, Weight{1, 0}}, std::pair{&q2, Weight{0, 1}}}) {
            const auto got = try_weight((*q)[v]);
            if (!(*q)[v].is_zero() && (!got || *got != ch->var(v).weight + w)) out.weights_ok = false;
        }
    }
    if (!out.weights_ok) out.notes.push_back("a Hamiltonian field has the wrong bi-weight");
    return out;
}

} // namespace gv
