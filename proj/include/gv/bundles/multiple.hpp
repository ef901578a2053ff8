#pragma once

#include "gv/bundles/matrix.hpp"
#include "gv/kernel.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gv {

/// Nonempty subset of directions {1..n}, bit r-1 set for direction r.
using FamilyMask = unsigned;

/// Ordered blocks of a set partition. Blocks are sorted by size, then by
/// their element lists; the law's factors appear in this order.
using Partition = std::vector<FamilyMask>;

inline std::vector<unsigned> mask_elements(FamilyMask m) {
    std::vector<unsigned> out;
    for (unsigned r = 0; m; ++r, m >>= 1)
        if (m & 1u) out.push_back(r + 1);
    return out;
}

inline std::string mask_digits(FamilyMask m) {
    std::string s;
    for (unsigned r : mask_elements(m)) s += std::to_string(r);
    return s;
}

inline bool block_less(FamilyMask a, FamilyMask b) {
    const int ca = std::popcount(a), cb = std::popcount(b);
    if (ca != cb) return ca < cb;
    return mask_elements(a) < mask_elements(b);
}

/// Every set partition of s, blocks in factor order; the single-block
/// partition comes first.
inline std::vector<Partition> set_partitions(FamilyMask s) {
    std::vector<Partition> out;
    if (!s) {
        out.push_back({});
        return out;
    }
    const FamilyMask low = s & (~s + 1u);
    const FamilyMask rest = s & ~low;
    // choose the companions of the lowest element
    for (FamilyMask sub = rest;; sub = (sub - 1) & rest) {
        const FamilyMask block = low | sub;
        for (auto tail : set_partitions(rest & ~sub)) {
            tail.push_back(block);
            std::sort(tail.begin(), tail.end(), block_less);
            out.push_back(std::move(tail));
        }
        if (!sub) break;
    }
    std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), block_less);
    });
    return out;
}

/// Multilinear block T_P with factor indices followed by the target index,
/// flattened row-major; entries live on the base chart.
struct TransitionBlock {
    Partition factors;
    FamilyMask target = 0;
    std::vector<std::size_t> dims; // factor ranks then target rank
    std::vector<Poly> entries;

    std::size_t flat(const std::vector<std::size_t>& idx) const {
        std::size_t k = 0;
        for (std::size_t d = 0; d < dims.size(); ++d) k = k * dims[d] + idx[d];
        return k;
    }
    std::vector<std::size_t> unflat(std::size_t k) const {
        std::vector<std::size_t> idx(dims.size());
        for (std::size_t d = dims.size(); d-- > 0;) {
            idx[d] = k % dims[d];
            k /= dims[d];
        }
        return idx;
    }
    bool is_zero() const {
        return std::all_of(entries.begin(), entries.end(), [](const Poly& p) { return p.is_zero(); });
    }
};

struct VectorBundleData {
    std::vector<Parity> parities;
    PolyMatrix transition; // v = v' M, M(i', i)
};

/// An n-fold vector bundle on a formal chart, with one pairwise transition
/// v = f(v') given by multilinear blocks, one per set partition.
class MultipleBundle {
  public:
    MultipleBundle(std::size_t n, std::vector<Variable> base, std::vector<std::vector<Parity>> families)
        : n_(n), families_(std::move(families)) {
        if (n_ > 6) throw Error("multiple bundles are limited to 6 directions");
        families_.resize(std::size_t(1) << n_);
        for (auto& v : base) v.weight.assign(n_, 0);
        base_chart_ = Chart::make(std::move(base), n_);
        for (FamilyMask s = 1; s < families_.size(); ++s)
            for (const auto& p : set_partitions(s)) blocks_.emplace(p, make_block(p, s));
        // identity squares
        for (FamilyMask s = 1; s < families_.size(); ++s) {
            auto& b = blocks_.at(Partition{s});
            for (std::size_t i = 0; i < rank(s); ++i) b.entries[i * rank(s) + i] = Poly::constant(base_chart_, 1);
        }
    }

    std::size_t directions() const noexcept { return n_; }
    const ChartPtr& base_chart() const noexcept { return base_chart_; }
    FamilyMask full_mask() const noexcept { return FamilyMask((1u << n_) - 1u); }
    std::size_t rank(FamilyMask s) const { return families_.at(s).size(); }
    // Parity of the original (unreversed) coordinate.
    Parity original_parity(FamilyMask s, std::size_t i) const { return families_.at(s).at(i); }
    // Current parity: flipped once per reversed direction in s.
    Parity parity(FamilyMask s, std::size_t i) const {
        return original_parity(s, i) + parity_of(std::popcount(s & reversed_));
    }
    FamilyMask reversed() const noexcept { return reversed_; }

    const std::map<Partition, TransitionBlock>& blocks() const noexcept { return blocks_; }
    const TransitionBlock& block(const Partition& p) const {
        auto it = blocks_.find(p);
        if (it == blocks_.end()) throw Error("no transition block for this partition");
        return it->second;
    }
    TransitionBlock& block(const Partition& p) {
        chart_.reset();
        auto it = blocks_.find(p);
        if (it == blocks_.end()) throw Error("no transition block for this partition");
        return it->second;
    }
    PolyMatrix square(FamilyMask s) const {
        const auto& b = block(Partition{s});
        PolyMatrix m(base_chart_, rank(s));
        for (std::size_t i = 0; i < rank(s); ++i)
            for (std::size_t j = 0; j < rank(s); ++j) m(i, j) = b.entries[i * rank(s) + j];
        return m;
    }

    /// Coordinate prefix for a family in the current reversal state.
    std::string family_name(FamilyMask s) const {
        if (n_ == 2) {
            const bool flip = std::popcount(s & reversed_) % 2 != 0;
            switch (s) {
            case 1: return flip ? "xi" : "u";
            case 2: return flip ? "eta" : "w";
            default: return flip ? "theta" : "z";
            }
        }
        return (std::popcount(s & reversed_) % 2 ? "p" : "v") + mask_digits(s) + "_";
    }
    std::string coordinate(FamilyMask s, std::size_t i, bool primed) const {
        return family_name(s) + std::to_string(i + 1) + (primed ? "'" : "");
    }

    Weight family_weight(FamilyMask s) const {
        Weight w(n_, 0);
        for (unsigned r : mask_elements(s)) w[r - 1] = 1;
        return w;
    }

    /// Chart: base, unprimed families, primed families.
    const ChartPtr& chart() const {
        if (!chart_) {
            ChartBuilder b(n_);
            for (const auto& v : base_chart_->vars()) b.add(v.name, v.parity);
            for (int primed = 0; primed < 2; ++primed)
                for (FamilyMask s = 1; s <= full_mask(); ++s)
                    for (std::size_t i = 0; i < rank(s); ++i)
                        b.add(coordinate(s, i, primed != 0), parity(s, i), family_weight(s));
            chart_ = b.build();
        }
        return chart_;
    }
    std::size_t var_index(FamilyMask s, std::size_t i, bool primed) const {
        return chart()->index_of(coordinate(s, i, primed));
    }
    std::vector<bool> base_mask() const {
        std::vector<bool> m(chart()->size(), false);
        for (std::size_t k = 0; k < base_chart_->size(); ++k) m[k] = true;
        return m;
    }

    /// Ordered product of primed coordinates for one term of the law.
    Poly factor_product(const Partition& p, const std::vector<std::size_t>& idx) const {
        Poly r = Poly::constant(chart(), 1);
        for (std::size_t j = 0; j < p.size(); ++j)
            r = r * Poly::variable(chart(), var_index(p[j], idx[j], true));
        return r;
    }

    /// v = f(v'): images of unprimed coordinates as polynomials in primed ones.
    ChartMap transition_map() const {
        const ChartPtr& ch = chart();
        ChartMap m(ch, ch);
        for (FamilyMask s = 1; s <= full_mask(); ++s)
            for (std::size_t i = 0; i < rank(s); ++i) m.set(var_index(s, i, false), law(s, i));
        return m;
    }

    Poly law(FamilyMask s, std::size_t target_index) const {
        const ChartPtr& ch = chart();
        Poly image(ch);
        for (const auto& p : set_partitions(s)) {
            const auto& b = block(p);
            for (std::size_t k = 0; k < b.entries.size(); ++k) {
                if (b.entries[k].is_zero()) continue;
                auto idx = b.unflat(k);
                if (idx.back() != target_index) continue;
                image += factor_product(p, idx) * embed(b.entries[k], ch);
            }
        }
        return image;
    }

    /// Number of terms (partitions) in the law of family s.
    std::size_t law_term_count(FamilyMask s) const { return set_partitions(s).size(); }

    /// v' = f^{-1}(v), solved family by family with Neumann-inverted squares.
    ChartMap inverse_map(unsigned degree) const {
        const ChartPtr& ch = chart();
        const auto mask = base_mask();
        ChartMap inv(ch, ch);
        std::vector<std::vector<Poly>> solved(full_mask() + 1);
        std::vector<FamilyMask> order;
        for (FamilyMask s = 1; s <= full_mask(); ++s) order.push_back(s);
        std::stable_sort(order.begin(), order.end(),
                         [](FamilyMask a, FamilyMask b) { return std::popcount(a) < std::popcount(b); });
        for (FamilyMask s : order) {
            // rest_i = v_i - sum over nontrivial partitions (expressed in unprimed)
            std::vector<Poly> rest(rank(s), Poly(ch));
            for (std::size_t i = 0; i < rank(s); ++i) rest[i] = Poly::variable(ch, var_index(s, i, false));
            for (const auto& p : set_partitions(s)) {
                if (p.size() == 1) continue;
                const auto& b = block(p);
                for (std::size_t k = 0; k < b.entries.size(); ++k) {
                    if (b.entries[k].is_zero()) continue;
                    auto idx = b.unflat(k);
                    Poly prod = Poly::constant(ch, 1);
                    for (std::size_t j = 0; j < p.size(); ++j) prod = prod * solved[p[j]][idx[j]];
                    rest[idx.back()] -= prod * embed(b.entries[k], ch);
                }
            }
            PolyMatrix minv = neumann_inverse(square(s), std::vector<bool>(base_chart_->size(), true), degree);
            solved[s].assign(rank(s), Poly(ch));
            for (std::size_t ip = 0; ip < rank(s); ++ip) {
                Poly img(ch);
                for (std::size_t i = 0; i < rank(s); ++i)
                    if (!minv(i, ip).is_zero()) img += rest[i] * embed(minv(i, ip), ch);
                solved[s][ip] = img.truncate(mask, degree);
                inv.set(var_index(s, ip, true), solved[s][ip]);
            }
        }
        return inv;
    }

    /// Partial parity reversion in direction r (1-based).
    MultipleBundle reverse(unsigned r) const {
        if (r < 1 || r > n_) throw Error("reversion direction out of range");
        const FamilyMask bit = 1u << (r - 1);
        MultipleBundle out = *this;
        out.chart_.reset();
        for (auto& [p, b] : out.blocks_) {
            if (p.size() < 2 || !(b.target & bit)) continue;
            std::size_t j = 0;
            while (!(p[j] & bit)) ++j;
            for (std::size_t k = 0; k < b.entries.size(); ++k) {
                if (b.entries[k].is_zero()) continue;
                auto idx = b.unflat(k);
                int before = 0;
                for (std::size_t l = 0; l < j; ++l) before += bit_of(parity(p[l], idx[l]));
                if (before & 1) b.entries[k] = -b.entries[k];
            }
        }
        out.reversed_ = reversed_ ^ bit;
        return out;
    }

    /// Same shape, with the blocks of `f after g` (v = f(g(v''))).
    MultipleBundle compose(const MultipleBundle& g) const {
        check_same_shape(g);
        const ChartPtr& ch = chart();
        ChartMap f = transition_map();
        ChartMap gm = g.transition_map();
        // primed v'_k -> g's image of v_k, re-expressed on this chart
        ChartMap sigma(ch, ch);
        for (FamilyMask s = 1; s <= full_mask(); ++s)
            for (std::size_t i = 0; i < rank(s); ++i)
                sigma.set(var_index(s, i, true), embed(gm.image(g.var_index(s, i, false)), ch));
        MultipleBundle out = *this;
        out.chart_.reset();
        std::vector<Poly> images(ch->size());
        for (FamilyMask s = 1; s <= full_mask(); ++s)
            for (std::size_t i = 0; i < rank(s); ++i)
                images[var_index(s, i, false)] = substitute(f.image(var_index(s, i, false)), sigma);
        out.set_from_images(*this, images);
        return out;
    }

    /// Reads the blocks back from images of unprimed coordinates on `shape`'s chart.
    void set_from_images(const MultipleBundle& shape, const std::vector<Poly>& images) {
        const ChartPtr& ch = shape.chart();
        for (auto& [p, b] : blocks_) {
            for (std::size_t k = 0; k < b.entries.size(); ++k) {
                auto idx = b.unflat(k);
                Poly fp = shape.factor_product(p, idx);
                const auto& [fm, fc] = *fp.terms().begin();
                const Poly& img = images[shape.var_index(b.target, idx.back(), false)];
                Poly entry(base_chart_);
                for (const auto& [m, c] : img.terms()) {
                    bool match = true;
                    Monomial bm{std::vector<std::uint16_t>(base_chart_->size(), 0)};
                    for (std::size_t v = 0; v < ch->size(); ++v) {
                        if (v < base_chart_->size()) {
                            bm.exp[v] = m.exp[v];
                        } else if (m.exp[v] != fm.exp[v]) {
                            match = false;
                            break;
                        }
                    }
                    if (!match) continue;
                    // c * base*fiber = T-coefficient * fiber_product * base
                    const Parity pb = detail::monomial_parity(*base_chart_, bm);
                    const Parity pf = detail::monomial_parity(*ch, fm);
                    Scalar coeff = c / fc;
                    if (koszul(pb, pf) < 0) coeff = -coeff;
                    entry.add_term(bm, coeff);
                }
                b.entries[k] = std::move(entry);
            }
        }
    }

    void check_same_shape(const MultipleBundle& g) const {
        if (g.n_ != n_ || g.families_ != families_ || g.reversed_ != reversed_)
            throw Error("transition data have different shapes");
    }

    /// Zeroes every entry of every block except the identity squares.
    void clear() {
        for (auto& [p, b] : blocks_)
            for (auto& e : b.entries) e = Poly(base_chart_);
        for (FamilyMask s = 1; s <= full_mask(); ++s) {
            auto& b = blocks_.at(Partition{s});
            for (std::size_t i = 0; i < rank(s); ++i) b.entries[i * rank(s) + i] = Poly::constant(base_chart_, 1);
        }
        chart_.reset();
    }

    friend bool operator==(const MultipleBundle& a, const MultipleBundle& b) {
        if (a.n_ != b.n_ || a.families_ != b.families_ || a.reversed_ != b.reversed_) return false;
        for (const auto& [p, blk] : a.blocks_) {
            const auto& other = b.blocks_.at(p);
            for (std::size_t k = 0; k < blk.entries.size(); ++k)
                if (!(embed(blk.entries[k], a.base_chart_) == embed(other.entries[k], a.base_chart_))) return false;
        }
        return true;
    }

    const std::vector<std::vector<Parity>>& families() const noexcept { return families_; }

  private:
    static int bit_of(Parity p) { return is_odd(p) ? 1 : 0; }

    TransitionBlock make_block(const Partition& p, FamilyMask s) const {
        TransitionBlock b;
        b.factors = p;
        b.target = s;
        std::size_t total = 1;
        for (FamilyMask f : p) {
            b.dims.push_back(rank(f));
            total *= rank(f);
        }
        b.dims.push_back(rank(s));
        total *= rank(s);
        b.entries.assign(total, Poly(base_chart_));
        return b;
    }

    std::size_t n_;
    std::vector<std::vector<Parity>> families_;
    ChartPtr base_chart_;
    std::map<Partition, TransitionBlock> blocks_;
    FamilyMask reversed_ = 0;
    mutable ChartPtr chart_;
};

} // namespace gv
