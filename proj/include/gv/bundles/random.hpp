#pragma once

#include "gv/bundles/multiple.hpp"

#include <vector>

namespace gv {

struct RandomBundleOptions {
    unsigned coefficient_degree = 1; // degree of entries in the base variables
    unsigned max_terms = 2;
    bool mixed = true;               // fill the multi-factor blocks
};

/// Random transition data of the given shape. Square blocks get an invertible
/// constant part; every entry has the parity that makes the law homogeneous.
inline MultipleBundle random_bundle(Rng& rng, std::size_t n, std::vector<Variable> base,
                                    std::vector<std::vector<Parity>> families, const RandomBundleOptions& opt = {}) {
    MultipleBundle b(n, std::move(base), std::move(families));
    const ChartPtr& bc = b.base_chart();
    RandomPolyOptions po;
    po.max_degree = opt.coefficient_degree;
    po.max_terms = opt.max_terms;
    std::vector<Partition> parts;
    for (const auto& [p, blk] : b.blocks()) parts.push_back(p);
    for (const auto& p : parts) {
        auto& blk = b.block(p);
        const bool square = p.size() == 1;
        if (!square && !opt.mixed) continue;
        for (int attempt = 0;; ++attempt) {
            for (std::size_t k = 0; k < blk.entries.size(); ++k) {
                auto idx = blk.unflat(k);
                Parity par = b.parity(blk.target, idx.back());
                for (std::size_t j = 0; j < p.size(); ++j) par = par + b.parity(p[j], idx[j]);
                Poly e = random_homogeneous(rng, bc, par, po);
                if (square) {
                    e = e - Poly::constant(bc, e.constant_term());
                    if (!is_odd(par)) e += Poly::constant(bc, random_scalar(rng, 2, false));
                }
                blk.entries[k] = e;
            }
            if (!square) break;
            const std::size_t r = blk.dims[0];
            std::vector<std::vector<Scalar>> m0(r, std::vector<Scalar>(r));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) m0[i][j] = blk.entries[i * r + j].constant_term();
            if (invert(m0)) break;
            if (attempt > 50) {
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) {
                        auto& e = blk.entries[i * r + j];
                        e = e - Poly::constant(bc, e.constant_term()) + Poly::constant(bc, i == j ? 1 : 0);
                    }
                break;
            }
        }
    }
    return b;
}

} // namespace gv
