#pragma once

#include "gv/bundles/multiple.hpp"

#include <map>
#include <string>
#include <vector>

namespace gv {

/// Label of a partition block list, e.g. "1|23".
inline std::string partition_label(const Partition& p) {
    std::string s;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j) s += '|';
        s += mask_digits(p[j]);
    }
    return s;
}

using BlockEntries = std::map<Partition, std::vector<Poly>>;

/// Fills every block of a bundle from flat entry lists (factor indices, then
/// target index, row-major). Every partition block must be present.
inline MultipleBundle nfold_bundle(std::size_t n, std::vector<Variable> base, std::vector<std::vector<Parity>> families,
                                   const BlockEntries& blocks) {
    MultipleBundle b(n, std::move(base), std::move(families));
    std::vector<Partition> parts;
    for (const auto& [p, blk] : b.blocks()) parts.push_back(p);
    for (const auto& p : parts) {
        auto& blk = b.block(p);
        auto it = blocks.find(p);
        const std::string key = "T[" + partition_label(p) + "]";
        if (it == blocks.end()) throw ShapeError(key, "missing transition block " + key);
        if (it->second.size() != blk.entries.size())
            throw ShapeError(key, "transition block " + key + " has " + std::to_string(it->second.size()) +
                                      " entries, expected " + std::to_string(blk.entries.size()));
        for (std::size_t k = 0; k < blk.entries.size(); ++k) blk.entries[k] = embed(it->second[k], b.base_chart());
    }
    for (const auto& [p, e] : blocks)
        if (!b.blocks().count(p))
            throw ShapeError("T[" + partition_label(p) + "]", "no such partition block T[" + partition_label(p) + "]");
    return b;
}

struct TransitionReport {
    bool ok = false;
    std::vector<std::string> problems;
    ChartMap map;
};

/// The full multilinear law v = f(v') with parity, weight and invertibility checks.
inline TransitionReport nfold_transition(const MultipleBundle& b) {
    TransitionReport r{false, {}, b.transition_map()};
    const ChartPtr& ch = b.chart();
    for (FamilyMask s = 1; s <= b.full_mask(); ++s) {
        for (std::size_t i = 0; i < b.rank(s); ++i) {
            const Poly img = r.map.image(b.var_index(s, i, false));
            const std::string name = b.coordinate(s, i, false);
            if (img.is_zero()) {
                r.problems.push_back("law of " + name + " is zero");
                continue;
            }
            auto p = img.parity();
            if (!p || *p != b.parity(s, i)) r.problems.push_back("law of " + name + " does not preserve parity");
            auto w = try_weight(img);
            if (!w || *w != ch->var(b.var_index(s, i, false)).weight)
                r.problems.push_back("law of " + name + " does not preserve weight");
        }
        std::vector<std::vector<Scalar>> m0(b.rank(s), std::vector<Scalar>(b.rank(s)));
        const PolyMatrix sq = b.square(s);
        for (std::size_t i = 0; i < b.rank(s); ++i)
            for (std::size_t j = 0; j < b.rank(s); ++j) m0[i][j] = sq(i, j).constant_term();
        if (!invert(m0)) r.problems.push_back("square block T[" + mask_digits(s) + "] is not invertible");
    }
    r.ok = r.problems.empty();
    return r;
}

} // namespace gv
