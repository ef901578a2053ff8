#pragma once

#include "gv/fields.hpp"

#include <string>
#include <vector>

namespace gv {

/// Tangent chart: every coordinate v, then dot_v of the same parity. Weights
/// gain one direction (the tangent one): v keeps (w, 0), dot_v gets (w, 1).
struct TangentChart {
    ChartPtr source;
    ChartPtr chart;

    std::size_t dot(std::size_t v) const { return source->size() + v; }
    /// d = sum dot_v d/dv, the even derivation differentiating along the dot map
    Derivation dot_field() const {
        Derivation d(chart);
        for (std::size_t v = 0; v < source->size(); ++v) d.set(v, Poly::variable(chart, dot(v)));
        return d;
    }
    Poly lift(const Poly& f) const { return embed(f, chart); }
};

inline std::string dot_name(const std::string& name) { return "dot_" + name; }

inline TangentChart tangent_chart(const ChartPtr& c) {
    ChartBuilder b(c->directions() + 1);
    for (const auto& v : c->vars()) {
        Weight w = v.weight;
        w.push_back(0);
        b.add(v.name, v.parity, w);
    }
    for (const auto& v : c->vars()) {
        Weight w = v.weight;
        w.push_back(1);
        b.add(dot_name(v.name), v.parity, w);
    }
    return {c, b.build()};
}

/// Complete lift X^ = X^v d/dv + d(X^v) d/d(dot_v).
inline Derivation complete_lift(const Derivation& x, const TangentChart& t) {
    if (x.chart() != t.source) throw ChartMismatch("field is not on the source of the tangent chart");
    const Derivation d = t.dot_field();
    Derivation out(t.chart);
    for (std::size_t v = 0; v < t.source->size(); ++v) {
        if (x[v].is_zero()) continue;
        const Poly c = t.lift(x[v]);
        out.set(v, c);
        out.set(t.dot(v), apply(d, c));
    }
    return out;
}

inline Derivation tangent_prolongation(const Derivation& q) { return complete_lift(q, tangent_chart(q.chart())); }

} // namespace gv
