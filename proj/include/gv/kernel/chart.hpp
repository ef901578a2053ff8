#pragma once

#include "gv/kernel/errors.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gv {

enum class Parity : std::uint8_t { even = 0, odd = 1 };

constexpr Parity operator+(Parity a, Parity b) noexcept {
    return static_cast<Parity>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
constexpr Parity flip(Parity p) noexcept { return p + Parity::odd; }
constexpr bool is_odd(Parity p) noexcept { return p == Parity::odd; }
constexpr int bit(Parity p) noexcept { return static_cast<int>(p); }
constexpr Parity parity_of(int k) noexcept { return (k & 1) ? Parity::odd : Parity::even; }
// (-1)^(a*b)
constexpr int koszul(Parity a, Parity b) noexcept { return (is_odd(a) && is_odd(b)) ? -1 : 1; }

using Weight = std::vector<int>;

inline Weight operator+(Weight a, const Weight& b) {
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) a[k] += b[k];
    return a;
}
inline Weight operator-(Weight a, const Weight& b) {
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) a[k] -= b[k];
    return a;
}
inline std::string to_string(const Weight& w);

struct Variable {
    std::string name;
    Parity parity = Parity::even;
    Weight weight;
};

class Chart;
using ChartPtr = std::shared_ptr<const Chart>;

/// An ordered set of coordinate variables. The declaration order is the global
/// monomial order; charts are compared by identity.
class Chart {
  public:
    static ChartPtr make(std::vector<Variable> vars, std::size_t directions) {
        return ChartPtr(new Chart(std::move(vars), directions));
    }

    std::size_t size() const noexcept { return vars_.size(); }
    std::size_t directions() const noexcept { return directions_; }
    const Variable& var(std::size_t i) const { return vars_.at(i); }
    const std::vector<Variable>& vars() const noexcept { return vars_; }
    Parity parity(std::size_t i) const { return vars_[i].parity; }
    bool odd(std::size_t i) const { return is_odd(vars_[i].parity); }

    std::optional<std::size_t> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t index_of(const std::string& name) const {
        auto i = find(name);
        if (!i) throw ChartMismatch("variable '" + name + "' is not in the chart");
        return *i;
    }
    Weight zero_weight() const { return Weight(directions_, 0); }

  private:
    Chart(std::vector<Variable> vars, std::size_t directions)
        : vars_(std::move(vars)), directions_(directions) {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            auto& v = vars_[i];
            if (v.weight.empty()) v.weight.assign(directions_, 0);
            if (v.weight.size() != directions_)
                throw Error("variable '" + v.name + "' has weight of length " +
                            std::to_string(v.weight.size()) + ", chart has " +
                            std::to_string(directions_) + " directions");
            if (!index_.emplace(v.name, i).second)
                throw Error("duplicate variable name '" + v.name + "'");
        }
    }

    std::vector<Variable> vars_;
    std::size_t directions_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline std::string to_string(const Weight& w) {
    std::string s = "(";
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(w[k]);
    }
    return s + ")";
}

// Small builder used by every module that lays out coordinate families.
class ChartBuilder {
  public:
    explicit ChartBuilder(std::size_t directions) : directions_(directions) {}

    ChartBuilder& add(std::string name, Parity p, Weight w = {}) {
        vars_.push_back({std::move(name), p, w.empty() ? Weight(directions_, 0) : std::move(w)});
        return *this;
    }
    ChartBuilder& family(const std::string& prefix, const std::vector<Parity>& parities,
                         const Weight& w) {
        for (std::size_t k = 0; k < parities.size(); ++k)
            add(prefix + std::to_string(k + 1), parities[k], w);
        return *this;
    }
    std::size_t size() const noexcept { return vars_.size(); }
    ChartPtr build() const { return Chart::make(vars_, directions_); }

  private:
    std::size_t directions_;
    std::vector<Variable> vars_;
};

} // namespace gv
