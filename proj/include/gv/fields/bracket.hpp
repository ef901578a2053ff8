#pragma once

#include "gv/fields/derivation.hpp"

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace gv {

/// Bracket of parity eps given on coordinate pairs and extended as a
/// biderivation: {f, gh} = {f,g}h + (-1)^{(f+eps)g} g{f,h}.
class BracketTable {
  public:
    BracketTable(ChartPtr chart, Parity eps) : chart_(std::move(chart)), eps_(eps) {}

    const ChartPtr& chart() const noexcept { return chart_; }
    Parity parity() const noexcept { return eps_; }

    // Sets {v,w}; {w,v} follows from graded antisymmetry.
    void set(std::size_t v, std::size_t w, Poly value) {
        if (!value.chart()) value = Poly(chart_);
        value.check_same(Poly(chart_));
        const Parity want = chart_->parity(v) + chart_->parity(w) + eps_;
        if (!value.is_zero()) {
            auto got = value.parity();
            if (!got || *got != want)
                throw ParityError("bracket entry {" + chart_->var(v).name + "," + chart_->var(w).name +
                                  "} has the wrong parity: " + value.str());
        }
        if (v == w) {
            // {v,v} = -(-1)^{(v+eps)^2}{v,v} forces zero when v+eps is even.
            if (!is_odd(chart_->parity(v) + eps_) && !value.is_zero())
                throw ParityError("bracket of '" + chart_->var(v).name + "' with itself must vanish");
        }
        if (v <= w) {
            entries_[{v, w}] = std::move(value);
        } else {
            entries_[{w, v}] = swap_sign(v, w) * value;
        }
    }
    void set(const std::string& v, const std::string& w, Poly value) {
        set(chart_->index_of(v), chart_->index_of(w), std::move(value));
    }

    // {v,w} on coordinates.
    Poly entry(std::size_t v, std::size_t w) const {
        if (v <= w) {
            auto it = entries_.find({v, w});
            return it == entries_.end() ? Poly(chart_) : it->second;
        }
        auto it = entries_.find({w, v});
        if (it == entries_.end()) return Poly(chart_);
        return swap_sign(w, v) * it->second;
    }

    const std::map<std::pair<std::size_t, std::size_t>, Poly>& entries() const noexcept { return entries_; }

  private:
    // {w,v} = -(-1)^{(v+eps)(w+eps)} {v,w}
    Scalar swap_sign(std::size_t v, std::size_t w) const {
        const int k = koszul(chart_->parity(v) + eps_, chart_->parity(w) + eps_);
        return Scalar(-k);
    }

    ChartPtr chart_;
    Parity eps_;
    std::map<std::pair<std::size_t, std::size_t>, Poly> entries_;
};

/// The derivation {f, .} of parity f + eps.
inline Derivation hamiltonian_derivation(const BracketTable& t, const Poly& f) {
    const ChartPtr& ch = t.chart();
    Derivation d(ch);
    if (f.is_zero()) return d;
    const Parity pf = f.homogeneous_parity("bracket argument");
    const Parity eps = t.parity();
    std::vector<Poly> df(ch->size());
    for (std::size_t v = 0; v < ch->size(); ++v) df[v] = partial(f, v);
    for (std::size_t w = 0; w < ch->size(); ++w) {
        // {w, f} = sum_v {w,v} d_v f, then {f,w} = -(-1)^{(f+eps)(w+eps)} {w,f}
        Poly wf(ch);
        for (std::size_t v = 0; v < ch->size(); ++v) {
            if (df[v].is_zero()) continue;
            Poly e = t.entry(w, v);
            if (e.is_zero()) continue;
            wf += e * df[v];
        }
        if (wf.is_zero()) continue;
        const int k = koszul(pf + eps, ch->parity(w) + eps);
        d.set(w, Scalar(-k) * wf);
    }
    return d;
}

inline Poly bracket(const BracketTable& t, const Poly& f, const Poly& g) {
    if (f.chart() && f.chart() != t.chart()) throw ChartMismatch("bracket argument on a foreign chart");
    if (g.chart() && g.chart() != t.chart()) throw ChartMismatch("bracket argument on a foreign chart");
    g.homogeneous_parity("bracket argument");
    return apply(hamiltonian_derivation(t, f), g);
}

struct PairResidual {
    std::size_t first;
    std::size_t second;
    Poly residual;
};

struct TripleResidual {
    std::size_t a, b, c;
    Poly residual;
};

/// Q({v,w}) - {Q(v), w} - (-1)^{Q(v+eps)} {v, Q(w)} over coordinate pairs v <= w;
/// only nonzero residuals are returned.
inline std::vector<PairResidual> leibniz_residuals(const Derivation& q, const BracketTable& t) {
    q.same_chart(Derivation(t.chart()));
    const ChartPtr& ch = t.chart();
    const Parity pq = q.homogeneous_parity("derivation");
    const Parity eps = t.parity();
    std::vector<PairResidual> out;
    std::vector<Poly> coords(ch->size());
    for (std::size_t v = 0; v < ch->size(); ++v) coords[v] = Poly::variable(ch, v);
    for (std::size_t v = 0; v < ch->size(); ++v) {
        for (std::size_t w = v; w < ch->size(); ++w) {
            Poly r = apply(q, t.entry(v, w));
            r -= bracket(t, q[v], coords[w]);
            const int s = koszul(pq, ch->parity(v) + eps);
            Poly tail = bracket(t, coords[v], q[w]);
            if (s > 0) {
                r -= tail;
            } else {
                r += tail;
            }
            if (!r.is_zero()) out.push_back({v, w, std::move(r)});
        }
    }
    return out;
}

/// {a,{b,c}} - {{a,b},c} - (-1)^{(a+eps)(b+eps)} {b,{a,c}} on sorted coordinate triples.
inline std::vector<TripleResidual> jacobi_residuals(const BracketTable& t) {
    const ChartPtr& ch = t.chart();
    const Parity eps = t.parity();
    std::vector<TripleResidual> out;
    std::vector<Poly> coords(ch->size());
    for (std::size_t v = 0; v < ch->size(); ++v) coords[v] = Poly::variable(ch, v);
    for (std::size_t a = 0; a < ch->size(); ++a)
        for (std::size_t b = a; b < ch->size(); ++b)
            for (std::size_t c = b; c < ch->size(); ++c) {
                Poly r = bracket(t, coords[a], t.entry(b, c));
                r -= bracket(t, t.entry(a, b), coords[c]);
                const int s = koszul(ch->parity(a) + eps, ch->parity(b) + eps);
                Poly tail = bracket(t, coords[b], t.entry(a, c));
                if (s > 0) {
                    r -= tail;
                } else {
                    r += tail;
                }
                if (!r.is_zero()) out.push_back({a, b, c, std::move(r)});
            }
    return out;
}

} // namespace gv
