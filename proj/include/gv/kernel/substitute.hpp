#pragma once

#include "gv/kernel/poly.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace gv {

/// Pullback along a chart map: every source coordinate gets an image on the
/// target chart. Coordinates without an explicit image go to the target
/// variable of the same name.
class ChartMap {
  public:
    ChartMap(ChartPtr source, ChartPtr target)
        : source_(std::move(source)), target_(std::move(target)), images_(source_->size()),
          explicit_(source_->size(), false) {}

    void set(std::size_t source_var, Poly image) {
        if (image.chart() && image.chart() != target_)
            throw ChartMismatch("image of '" + source_->var(source_var).name +
                                "' is not on the target chart");
        if (!image.chart()) image = Poly(target_);
        const Parity want = source_->parity(source_var);
        auto got = image.parity();
        if (!got || (!image.is_zero() && *got != want))
            throw ParityError("image of '" + source_->var(source_var).name +
                              "' has the wrong parity: " + image.str());
        images_[source_var] = std::move(image);
        explicit_[source_var] = true;
    }
    void set(const std::string& source_name, Poly image) {
        set(source_->index_of(source_name), std::move(image));
    }

    const ChartPtr& source() const noexcept { return source_; }
    const ChartPtr& target() const noexcept { return target_; }

    const Poly& image(std::size_t source_var) const {
        if (!explicit_[source_var]) {
            const auto& name = source_->var(source_var).name;
            auto t = target_->find(name);
            if (!t) throw ChartMismatch("no image for '" + name + "' and no same-named target variable");
            images_[source_var] = Poly::variable(target_, *t);
            explicit_[source_var] = true;
        }
        return images_[source_var];
    }

    static ChartMap identity(const ChartPtr& chart) { return ChartMap(chart, chart); }

  private:
    ChartPtr source_;
    ChartPtr target_;
    mutable std::vector<Poly> images_;
    mutable std::vector<bool> explicit_;
};

/// Algebra homomorphism induced by the chart map. Each monomial, an ordered
/// product of generators, maps to the ordered product of their images.
inline Poly substitute(const Poly& p, const ChartMap& map) {
    if (p.chart() && p.chart() != map.source())
        throw ChartMismatch("substitution source chart does not match the polynomial");
    Poly result(map.target());
    if (p.is_zero()) return result;
    std::map<std::pair<std::size_t, unsigned>, Poly> powers;
    auto power = [&](std::size_t v, unsigned e) -> const Poly& {
        auto key = std::make_pair(v, e);
        auto it = powers.find(key);
        if (it != powers.end()) return it->second;
        Poly acc = Poly::constant(map.target(), 1);
        for (unsigned k = 0; k < e; ++k) acc = acc * map.image(v);
        return powers.emplace(key, std::move(acc)).first->second;
    };
    for (const auto& [m, c] : p.terms()) {
        Poly term = Poly::constant(map.target(), c);
        for (std::size_t k = 0; k < m.exp.size() && !term.is_zero(); ++k)
            if (m.exp[k]) term = term * power(k, m.exp[k]);
        result += term;
    }
    return result;
}

/// Same-chart substitution; unmapped variables stay fixed.
inline Poly substitute(const Poly& p, const std::map<std::size_t, Poly>& images) {
    ChartMap map(p.chart(), p.chart());
    for (const auto& [v, img] : images) map.set(v, img);
    return substitute(p, map);
}

inline Poly substitute(const Poly& p, const std::map<std::string, Poly>& images) {
    ChartMap map(p.chart(), p.chart());
    for (const auto& [name, img] : images) map.set(name, img);
    return substitute(p, map);
}

/// Re-expresses p on another chart, matching variables by name.
inline Poly embed(const Poly& p, const ChartPtr& target) {
    if (p.chart() == target) return p;
    if (!p.chart()) return Poly(target);
    return substitute(p, ChartMap(p.chart(), target));
}

/// Pointwise composition: (second after first) pulls back along first, then
/// second, i.e. images of `first`'s source coordinates pushed through `second`.
inline ChartMap compose(const ChartMap& first, const ChartMap& second) {
    if (first.target() != second.source())
        throw ChartMismatch("chart maps do not compose");
    ChartMap out(first.source(), second.target());
    for (std::size_t v = 0; v < first.source()->size(); ++v)
        out.set(v, substitute(first.image(v), second));
    return out;
}

} // namespace gv
