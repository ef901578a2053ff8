#pragma once

#include "gv/kernel/chart.hpp"
#include "gv/kernel/errors.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace gv {

using Scalar = mpq_class;

inline Scalar make_scalar(long num, long den = 1) {
    Scalar q(num, den);
    q.canonicalize();
    return q;
}

/// Exponent vector over a chart, in chart order. Odd variables carry exponent
/// 0 or 1. The monomial denotes the ordered product of its variables, so its
/// implicit sign is +1; products that need re-sorting return the Koszul sign.
struct Monomial {
    std::vector<std::uint16_t> exp;

    auto operator<=>(const Monomial&) const = default;

    bool is_one() const {
        return std::all_of(exp.begin(), exp.end(), [](auto e) { return e == 0; });
    }
    unsigned degree() const {
        unsigned d = 0;
        for (auto e : exp) d += e;
        return d;
    }
};

namespace detail {

// out = a*b as ordered products; returns the sign, or 0 when an odd variable
// repeats.
inline int multiply(const Chart& chart, const Monomial& a, const Monomial& b, Monomial& out) {
    const std::size_t n = a.exp.size();
    out.exp.resize(n);
    int odd_seen_in_a = 0;
    int sign_bit = 0;
    for (std::size_t k = n; k-- > 0;) {
        const auto ea = a.exp[k];
        const auto eb = b.exp[k];
        if (chart.odd(k)) {
            if (ea && eb) return 0;
            if (eb) sign_bit ^= (odd_seen_in_a & 1);
            if (ea) ++odd_seen_in_a;
        }
        out.exp[k] = static_cast<std::uint16_t>(ea + eb);
    }
    return sign_bit ? -1 : 1;
}

inline Parity monomial_parity(const Chart& chart, const Monomial& m) {
    int p = 0;
    for (std::size_t k = 0; k < m.exp.size(); ++k)
        if (chart.odd(k)) p += m.exp[k];
    return parity_of(p);
}

inline Weight monomial_weight(const Chart& chart, const Monomial& m) {
    Weight w = chart.zero_weight();
    for (std::size_t k = 0; k < m.exp.size(); ++k) {
        if (!m.exp[k]) continue;
        const auto& vw = chart.var(k).weight;
        for (std::size_t d = 0; d < w.size(); ++d) w[d] += static_cast<int>(m.exp[k]) * vw[d];
    }
    return w;
}

} // namespace detail

/// Exact-rational supercommutative polynomial over a chart.
class Poly {
  public:
    using Terms = std::map<Monomial, Scalar>;

    Poly() = default;
    explicit Poly(ChartPtr chart) : chart_(std::move(chart)) {}
    Poly(ChartPtr chart, const Scalar& c) : chart_(std::move(chart)) {
        if (c != 0) terms_.emplace(one_monomial(), c);
    }

    static Poly constant(ChartPtr chart, const Scalar& c) { return Poly(std::move(chart), c); }
    static Poly variable(ChartPtr chart, std::size_t index) {
        Poly p(chart);
        Monomial m = p.one_monomial();
        m.exp.at(index) = 1;
        p.terms_.emplace(std::move(m), Scalar(1));
        return p;
    }
    static Poly variable(ChartPtr chart, const std::string& name) {
        const auto i = chart->index_of(name);
        return variable(std::move(chart), i);
    }
    static Poly monomial(ChartPtr chart, Monomial m, const Scalar& c = 1) {
        Poly p(std::move(chart));
        if (c != 0) p.terms_.emplace(std::move(m), c);
        return p;
    }

    const ChartPtr& chart() const noexcept { return chart_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }
    Scalar constant_term() const {
        if (terms_.empty()) return 0;
        auto it = terms_.find(one_monomial());
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    Monomial one_monomial() const {
        return Monomial{std::vector<std::uint16_t>(chart_ ? chart_->size() : 0, 0)};
    }

    // Adds c*m, dropping the entry if it cancels.
    void add_term(const Monomial& m, const Scalar& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& q) {
        adopt_chart(q);
        for (const auto& [m, c] : q.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& q) {
        adopt_chart(q);
        for (const auto& [m, c] : q.terms_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const Scalar& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [m, c] : terms_) c *= s;
        }
        return *this;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
    friend Poly operator*(const Scalar& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) { return mul(a, b); }
    Poly& operator*=(const Poly& q) { return *this = mul(*this, q); }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
        a.check_same(b);
        return a.terms_ == b.terms_;
    }

    static Poly mul(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly(a.chart_ ? a.chart_ : b.chart_);
        a.check_same(b);
        const Chart& ch = *a.chart_;
        Poly r(a.chart_);
        Monomial m;
        Scalar c;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                const int s = detail::multiply(ch, ma, mb, m);
                if (!s) continue;
                c = ca * cb;
                if (s < 0) c = -c;
                r.add_term(m, c);
            }
        }
        return r;
    }

    /// Parity of a homogeneous element; nullopt when inhomogeneous. The zero
    /// polynomial reports even.
    std::optional<Parity> parity() const {
        std::optional<Parity> p;
        for (const auto& [m, c] : terms_) {
            const Parity q = detail::monomial_parity(*chart_, m);
            if (p && *p != q) return std::nullopt;
            p = q;
        }
        return p ? p : std::optional<Parity>(Parity::even);
    }
    Parity homogeneous_parity(const char* context = "polynomial") const {
        auto p = parity();
        if (!p) throw InhomogeneityError(std::string(context) + " is not parity-homogeneous: " + str());
        return *p;
    }

    // Even and odd components.
    std::pair<Poly, Poly> split_parity() const {
        Poly even(chart_), odd(chart_);
        for (const auto& [m, c] : terms_)
            (is_odd(detail::monomial_parity(*chart_, m)) ? odd : even).terms_.emplace(m, c);
        return {even, odd};
    }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }
    // Total degree counted only over the flagged variables.
    unsigned degree_in(const std::vector<bool>& mask) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, partial_degree(m, mask));
        return d;
    }
    Poly truncate(const std::vector<bool>& mask, unsigned max_degree) const {
        Poly r(chart_);
        for (const auto& [m, c] : terms_)
            if (partial_degree(m, mask) <= max_degree) r.terms_.emplace(m, c);
        return r;
    }

    bool depends_on(std::size_t var) const {
        for (const auto& [m, c] : terms_)
            if (m.exp[var]) return true;
        return false;
    }

    std::string str() const;

    void check_same(const Poly& q) const {
        if (chart_ != q.chart_)
            throw ChartMismatch("polynomials live on different charts");
    }

  private:
    static unsigned partial_degree(const Monomial& m, const std::vector<bool>& mask) {
        unsigned d = 0;
        for (std::size_t k = 0; k < m.exp.size(); ++k)
            if (mask[k]) d += m.exp[k];
        return d;
    }
    void adopt_chart(const Poly& q) {
        if (!chart_) {
            chart_ = q.chart_;
            return;
        }
        if (q.chart_ && chart_ != q.chart_) check_same(q);
    }

    ChartPtr chart_;
    Terms terms_;
};

inline Poly mul(const Poly& a, const Poly& b) { return Poly::mul(a, b); }

/// Common weight vector of all monomials.
inline Weight weight_of(const Poly& p) {
    if (p.is_zero()) throw InhomogeneityError("weight of the zero polynomial is undefined");
    std::set<Weight> found;
    for (const auto& [m, c] : p.terms()) found.insert(detail::monomial_weight(*p.chart(), m));
    if (found.size() != 1) {
        std::string msg = "polynomial is not weight-homogeneous; weights found:";
        for (const auto& w : found) msg += " " + to_string(w);
        throw InhomogeneityError(msg);
    }
    return *found.begin();
}

inline std::optional<Weight> try_weight(const Poly& p) {
    if (p.is_zero()) return std::nullopt;
    std::optional<Weight> w;
    for (const auto& [m, c] : p.terms()) {
        auto mw = detail::monomial_weight(*p.chart(), m);
        if (w && *w != mw) return std::nullopt;
        w = std::move(mw);
    }
    return w;
}

/// Left partial derivative: the variable is moved to the front past the odd
/// variables preceding it, then stripped.
inline Poly partial(const Poly& p, std::size_t v) {
    Poly r(p.chart());
    if (p.is_zero()) return r;
    const Chart& ch = *p.chart();
    if (v >= ch.size()) throw ChartMismatch("derivative variable index out of range");
    const bool v_odd = ch.odd(v);
    for (const auto& [m, c] : p.terms()) {
        const auto e = m.exp[v];
        if (!e) continue;
        Monomial d = m;
        d.exp[v] = static_cast<std::uint16_t>(e - 1);
        Scalar coeff = c * static_cast<long>(e);
        if (v_odd) {
            int before = 0;
            for (std::size_t k = 0; k < v; ++k)
                if (ch.odd(k)) before += m.exp[k];
            if (before & 1) coeff = -coeff;
        }
        r.add_term(d, coeff);
    }
    return r;
}

inline Poly partial(const Poly& p, const std::string& name) {
    return partial(p, p.chart()->index_of(name));
}

inline std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Scalar a = abs(c);
        const bool neg = c < 0;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        const bool unit = (a == 1);
        bool wrote = false;
        if (!unit || m.is_one()) {
            os << a.get_str();
            wrote = true;
        }
        for (std::size_t k = 0; k < m.exp.size(); ++k) {
            if (!m.exp[k]) continue;
            if (wrote) os << "*";
            os << chart_->var(k).name;
            if (m.exp[k] > 1) os << "^" << m.exp[k];
            wrote = true;
        }
    }
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

// Mask over chart variables selected by predicate.
inline std::vector<bool> variable_mask(const Chart& chart,
                                       const std::function<bool(const Variable&)>& pred) {
    std::vector<bool> mask(chart.size());
    for (std::size_t k = 0; k < chart.size(); ++k) mask[k] = pred(chart.var(k));
    return mask;
}

} // namespace gv
