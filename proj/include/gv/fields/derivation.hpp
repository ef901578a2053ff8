#pragma once

#include "gv/kernel.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gv {

/// Graded vector field X = sum_v X^v d/dv, coefficients written on the left.
class Derivation {
  public:
    Derivation() = default;
    explicit Derivation(ChartPtr chart) : chart_(std::move(chart)) {
        coeff_.assign(chart_->size(), Poly(chart_));
    }

    const ChartPtr& chart() const noexcept { return chart_; }
    std::size_t size() const noexcept { return coeff_.size(); }

    const Poly& operator[](std::size_t v) const { return coeff_.at(v); }
    const Poly& operator[](const std::string& name) const { return coeff_.at(chart_->index_of(name)); }

    void set(std::size_t v, Poly p) {
        if (!p.chart()) p = Poly(chart_);
        p.check_same(Poly(chart_));
        coeff_.at(v) = std::move(p);
    }
    void set(const std::string& name, Poly p) { set(chart_->index_of(name), std::move(p)); }
    void add(std::size_t v, const Poly& p) { coeff_.at(v) += p; }
    void add(const std::string& name, const Poly& p) { add(chart_->index_of(name), p); }

    bool is_zero() const {
        for (const auto& c : coeff_)
            if (!c.is_zero()) return false;
        return true;
    }

    /// Parity of the field; nullopt when inhomogeneous. The zero field is even.
    std::optional<Parity> parity() const {
        std::optional<Parity> p;
        for (std::size_t v = 0; v < coeff_.size(); ++v) {
            if (coeff_[v].is_zero()) continue;
            auto cp = coeff_[v].parity();
            if (!cp) return std::nullopt;
            const Parity q = *cp + chart_->parity(v);
            if (p && *p != q) return std::nullopt;
            p = q;
        }
        return p ? p : std::optional<Parity>(Parity::even);
    }
    Parity homogeneous_parity(const char* context = "vector field") const {
        auto p = parity();
        if (!p) throw InhomogeneityError(std::string(context) + " is not parity-homogeneous");
        return *p;
    }

    /// Weight weight(X^v) - weight(v), common over all nonzero terms.
    std::optional<Weight> weight() const {
        std::optional<Weight> w;
        for (std::size_t v = 0; v < coeff_.size(); ++v) {
            if (coeff_[v].is_zero()) continue;
            auto cw = try_weight(coeff_[v]);
            if (!cw) return std::nullopt;
            Weight q = *cw - chart_->var(v).weight;
            if (w && *w != q) return std::nullopt;
            w = std::move(q);
        }
        return w;
    }

    Derivation& operator+=(const Derivation& y) {
        same_chart(y);
        for (std::size_t v = 0; v < coeff_.size(); ++v) coeff_[v] += y.coeff_[v];
        return *this;
    }
    Derivation& operator-=(const Derivation& y) {
        same_chart(y);
        for (std::size_t v = 0; v < coeff_.size(); ++v) coeff_[v] -= y.coeff_[v];
        return *this;
    }
    Derivation& operator*=(const Scalar& s) {
        for (auto& c : coeff_) c *= s;
        return *this;
    }
    friend Derivation operator+(Derivation a, const Derivation& b) { return a += b; }
    friend Derivation operator-(Derivation a, const Derivation& b) { return a -= b; }
    friend Derivation operator*(const Scalar& s, Derivation a) { return a *= s; }
    friend bool operator==(const Derivation& a, const Derivation& b) {
        a.same_chart(b);
        return a.coeff_ == b.coeff_;
    }

    // Left multiplication by a function: (fX)^v = f X^v.
    Derivation times(const Poly& f) const {
        Derivation r(chart_);
        for (std::size_t v = 0; v < coeff_.size(); ++v) r.coeff_[v] = f * coeff_[v];
        return r;
    }

    std::string str() const {
        std::string s;
        for (std::size_t v = 0; v < coeff_.size(); ++v) {
            if (coeff_[v].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + coeff_[v].str() + ")*d/d" + chart_->var(v).name;
        }
        return s.empty() ? "0" : s;
    }

    void same_chart(const Derivation& y) const {
        if (chart_ != y.chart_) throw ChartMismatch("vector fields live on different charts");
    }

  private:
    ChartPtr chart_;
    std::vector<Poly> coeff_;
};

inline Derivation partial_field(const ChartPtr& chart, std::size_t v) {
    Derivation d(chart);
    d.set(v, Poly::constant(chart, 1));
    return d;
}

inline Poly apply(const Derivation& x, const Poly& f) {
    if (f.chart() && f.chart() != x.chart()) throw ChartMismatch("function and field live on different charts");
    Poly r(x.chart());
    if (f.is_zero()) return r;
    for (std::size_t v = 0; v < x.size(); ++v) {
        if (x[v].is_zero() || !f.depends_on(v)) continue;
        r += x[v] * partial(f, v);
    }
    return r;
}

/// Graded commutator [X,Y]^v = X(Y^v) - (-1)^{XY} Y(X^v).
inline Derivation commutator(const Derivation& x, const Derivation& y) {
    x.same_chart(y);
    const Parity px = x.homogeneous_parity("left commutator argument");
    const Parity py = y.homogeneous_parity("right commutator argument");
    const int s = koszul(px, py);
    Derivation r(x.chart());
    for (std::size_t v = 0; v < x.size(); ++v) {
        Poly c = apply(x, y[v]);
        if (s > 0) {
            c -= apply(y, x[v]);
        } else {
            c += apply(y, x[v]);
        }
        r.set(v, std::move(c));
    }
    return r;
}

struct HomologicalCheck {
    bool ok = true;
    Derivation residual; // [Q,Q]/2 = Q o Q
};

inline HomologicalCheck is_homological(const Derivation& q) {
    const Parity p = q.homogeneous_parity("homological candidate");
    if (!is_odd(p) && !q.is_zero()) throw ParityError("homological check needs an odd vector field");
    Derivation r = commutator(q, q);
    r *= make_scalar(1, 2);
    const bool ok = r.is_zero();
    return {ok, std::move(r)};
}

} // namespace gv
