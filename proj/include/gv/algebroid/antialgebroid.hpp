#pragma once

#include "gv/fields.hpp"

#include <string>
#include <vector>

namespace gv {

/// Weight-1 field Q = xi^i Q_i^a d/dx^a + 1/2 xi^i xi^j Q_ji^k d/dxi^k on Pi E.
/// Coordinates: base x^a, then xi^i of parity (parity of e_i) + 1 and weight 1.
class AntialgebroidData {
  public:
    AntialgebroidData(std::vector<Variable> base, std::vector<Parity> fiber, const std::string& prefix = "xi")
        : fiber_(std::move(fiber)) {
        ChartBuilder bb(0), cb(1);
        for (auto& v : base) {
            bb.add(v.name, v.parity);
            cb.add(v.name, v.parity);
        }
        for (std::size_t i = 0; i < fiber_.size(); ++i)
            cb.add(prefix + std::to_string(i + 1), fiber_[i] + Parity::odd, {1});
        base_ = bb.build();
        chart_ = cb.build();
        anchor_.assign(rank(), std::vector<Poly>(base_size(), Poly(chart_)));
        structure_.assign(rank(), std::vector<std::vector<Poly>>(rank(), std::vector<Poly>(rank(), Poly(chart_))));
    }

    const ChartPtr& base() const noexcept { return base_; }
    const ChartPtr& chart() const noexcept { return chart_; }
    std::size_t base_size() const noexcept { return base_->size(); }
    std::size_t rank() const noexcept { return fiber_.size(); }
    const std::vector<Parity>& fiber() const noexcept { return fiber_; }
    std::size_t xi(std::size_t i) const { return base_size() + i; }
    Poly xi_var(std::size_t i) const { return Poly::variable(chart_, xi(i)); }

    /// Q_i^a
    const Poly& anchor(std::size_t i, std::size_t a) const { return anchor_.at(i).at(a); }
    void set_anchor(std::size_t i, std::size_t a, const Poly& p) { anchor_.at(i).at(a) = embed(p, chart_); }
    /// Q_ji^k
    const Poly& structure(std::size_t j, std::size_t i, std::size_t k) const { return structure_.at(j).at(i).at(k); }
    void set_structure(std::size_t j, std::size_t i, std::size_t k, const Poly& p) {
        structure_.at(j).at(i).at(k) = embed(p, chart_);
    }

    Derivation field() const {
        Derivation q(chart_);
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t a = 0; a < base_size(); ++a)
                if (!anchor(i, a).is_zero()) q.add(a, xi_var(i) * anchor(i, a));
        const Scalar half(1, 2);
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j)
                for (std::size_t k = 0; k < rank(); ++k)
                    if (!structure(j, i, k).is_zero())
                        q.add(xi(k), half * (xi_var(i) * xi_var(j) * structure(j, i, k)));
        return q;
    }

    /// Tensors read back from a weight-1 field: Q_i^a = d_i Q^a, Q_ji^k = d_j d_i Q^k.
    AntialgebroidData with_field(const Derivation& q) const {
        if (q.chart() != chart_) throw ChartMismatch("field is not on the antialgebroid chart");
        AntialgebroidData out = *this;
        for (std::size_t i = 0; i < rank(); ++i) {
            for (std::size_t a = 0; a < base_size(); ++a) out.anchor_[i][a] = partial(q[a], xi(i));
            for (std::size_t j = 0; j < rank(); ++j)
                for (std::size_t k = 0; k < rank(); ++k)
                    out.structure_[j][i][k] = partial(partial(q[xi(k)], xi(i)), xi(j));
        }
        return out;
    }

    /// Graded antisymmetric part, so that field() reproduces every stored entry.
    AntialgebroidData normalized() const { return with_field(field()); }

  private:
    std::vector<Parity> fiber_;
    ChartPtr base_;
    ChartPtr chart_;
    std::vector<std::vector<Poly>> anchor_;
    std::vector<std::vector<std::vector<Poly>>> structure_;
};

/// Section u = u^i(x) e_i; component u^i has parity (parity of e_i) + parity.
struct Section {
    std::vector<Poly> components;
    Parity parity = Parity::even;
};

inline void check_section(const AntialgebroidData& q, const Section& u) {
    if (u.components.size() != q.rank()) throw ShapeError("section", "section has the wrong number of components");
    for (std::size_t i = 0; i < q.rank(); ++i) {
        const Poly& c = u.components[i];
        if (c.is_zero()) continue;
        auto p = c.parity();
        if (!p || *p != q.fiber()[i] + u.parity)
            throw ParityError("section component " + std::to_string(i + 1) + " has the wrong parity: " + c.str());
        for (std::size_t k = 0; k < q.rank(); ++k)
            if (c.chart() == q.chart() && c.depends_on(q.xi(k)))
                throw Error("section components must depend on base coordinates only");
    }
}

inline Section frame_section(const AntialgebroidData& q, std::size_t i) {
    Section u{std::vector<Poly>(q.rank(), Poly(q.chart())), q.fiber().at(i)};
    u.components[i] = Poly::constant(q.chart(), 1);
    return u;
}

/// i(u) = (-1)^u u^i(x) d/dxi^i
inline Derivation iota(const AntialgebroidData& q, const Section& u) {
    check_section(q, u);
    Derivation d(q.chart());
    const Scalar s = is_odd(u.parity) ? -1 : 1;
    for (std::size_t i = 0; i < q.rank(); ++i) d.set(q.xi(i), s * embed(u.components[i], q.chart()));
    return d;
}

/// Inverse of iota on weight -1 fields.
inline Section section_of(const AntialgebroidData& q, const Derivation& d, Parity parity) {
    Section u{std::vector<Poly>(q.rank(), Poly(q.chart())), parity};
    for (std::size_t a = 0; a < q.base_size(); ++a)
        if (!d[a].is_zero()) throw Error("field is not of weight -1: d/d" + q.chart()->var(a).name + " component");
    const Scalar s = is_odd(parity) ? -1 : 1;
    for (std::size_t i = 0; i < q.rank(); ++i) {
        for (std::size_t k = 0; k < q.rank(); ++k)
            if (d[q.xi(i)].depends_on(q.xi(k))) throw Error("field is not of weight -1");
        u.components[i] = s * d[q.xi(i)];
    }
    return u;
}

/// a(u) = u^i Q_i^a d/dx^a, as a field on the antialgebroid chart.
inline Derivation derived_anchor(const AntialgebroidData& q, const Section& u) {
    check_section(q, u);
    Derivation d(q.chart());
    for (std::size_t a = 0; a < q.base_size(); ++a)
        for (std::size_t i = 0; i < q.rank(); ++i)
            if (!u.components[i].is_zero()) d.add(a, embed(u.components[i], q.chart()) * q.anchor(i, a));
    return d;
}

/// a(u) f = [[Q, i(u)], f], read off on the base coordinates.
inline Derivation derived_anchor_commutator(const AntialgebroidData& q, const Section& u) {
    const Derivation d = commutator(q.field(), iota(q, u));
    Derivation out(q.chart());
    for (std::size_t a = 0; a < q.base_size(); ++a) out.set(a, apply(d, Poly::variable(q.chart(), a)));
    return out;
}

/// [u,v]^k = u^i Q_i^a d_a v^k - (-1)^{uv} v^i Q_i^a d_a u^k - (-1)^{i(v+1)} u^i v^j Q_ji^k
inline Section derived_bracket(const AntialgebroidData& q, const Section& u, const Section& v) {
    check_section(q, u);
    check_section(q, v);
    const ChartPtr& ch = q.chart();
    Section w{std::vector<Poly>(q.rank(), Poly(ch)), u.parity + v.parity};
    const Derivation au = derived_anchor(q, u), av = derived_anchor(q, v);
    const int suv = koszul(u.parity, v.parity);
    for (std::size_t k = 0; k < q.rank(); ++k) {
        Poly c = apply(au, embed(v.components[k], ch)) - Scalar(suv) * apply(av, embed(u.components[k], ch));
        for (std::size_t i = 0; i < q.rank(); ++i) {
            const Poly ui = embed(u.components[i], ch);
            if (ui.is_zero()) continue;
            const int si = koszul(q.fiber()[i], v.parity + Parity::odd);
            for (std::size_t j = 0; j < q.rank(); ++j)
                if (!q.structure(j, i, k).is_zero())
                    c -= Scalar(si) * (ui * embed(v.components[j], ch) * q.structure(j, i, k));
        }
        w.components[k] = c;
    }
    return w;
}

/// i([u,v]) = (-1)^u [[Q, i(u)], i(v)]
inline Section derived_bracket_commutator(const AntialgebroidData& q, const Section& u, const Section& v) {
    Derivation d = commutator(commutator(q.field(), iota(q, u)), iota(q, v));
    if (is_odd(u.parity)) d *= Scalar(-1);
    return section_of(q, d, u.parity + v.parity);
}

struct JacobiatorResidual {
    std::size_t i, j, k;
    Section residual;
};

struct AnchorResidual {
    std::size_t i, j;
    Derivation residual;
};

struct AlgebroidReport {
    HomologicalCheck homological;
    std::vector<JacobiatorResidual> jacobiators; // nonzero only
    std::vector<AnchorResidual> anchors;         // nonzero only
    bool ok() const { return homological.ok && jacobiators.empty() && anchors.empty(); }
};

inline Section section_sum(Section a, const Section& b, const Scalar& s = 1) {
    for (std::size_t k = 0; k < a.components.size(); ++k) a.components[k] += s * b.components[k];
    return a;
}

inline bool section_is_zero(const Section& u) {
    for (const auto& c : u.components)
        if (!c.is_zero()) return false;
    return true;
}

/// Homological residual, Jacobiators on frame triples, anchor morphism on frame pairs.
inline AlgebroidReport check_algebroid(const AntialgebroidData& q) {
    AlgebroidReport r{is_homological(q.field()), {}, {}};
    const std::size_t n = q.rank();
    std::vector<Section> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(frame_section(q, i));
    auto br = [&](const Section& a, const Section& b) { return derived_bracket(q, a, b); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                // [e_i,[e_j,e_k]] - [[e_i,e_j],e_k] - (-1)^{ij} [e_j,[e_i,e_k]]
                Section s = br(e[i], br(e[j], e[k]));
                s = section_sum(s, br(br(e[i], e[j]), e[k]), -1);
                s = section_sum(s, br(e[j], br(e[i], e[k])), -koszul(q.fiber()[i], q.fiber()[j]));
                if (!section_is_zero(s)) r.jacobiators.push_back({i, j, k, s});
            }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Derivation d = derived_anchor(q, br(e[i], e[j]));
            d -= commutator(derived_anchor(q, e[i]), derived_anchor(q, e[j]));
            if (!d.is_zero()) r.anchors.push_back({i, j, d});
        }
    return r;
}

} // namespace gv
