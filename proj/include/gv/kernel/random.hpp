#pragma once

#include "gv/kernel/poly.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace gv {

using Rng = std::mt19937_64;

// Small nonzero-biased rationals keep expansions readable and fast.
inline Scalar random_scalar(Rng& rng, int range = 3, bool allow_fractions = true) {
    std::uniform_int_distribution<int> num(-range, range);
    std::uniform_int_distribution<int> den(1, allow_fractions ? 2 : 1);
    return make_scalar(num(rng), den(rng));
}

inline Scalar random_nonzero_scalar(Rng& rng, int range = 3) {
    for (;;) {
        Scalar s = random_scalar(rng, range);
        if (s != 0) return s;
    }
}

struct RandomPolyOptions {
    unsigned max_degree = 4;
    unsigned max_terms = 4;
    int coefficient_range = 3;
    // Restrict to these variables; empty means the whole chart.
    std::vector<std::size_t> variables;
};

inline Monomial random_monomial(Rng& rng, const Chart& chart, const RandomPolyOptions& opt,
                                unsigned degree) {
    Monomial m{std::vector<std::uint16_t>(chart.size(), 0)};
    std::vector<std::size_t> pool = opt.variables;
    if (pool.empty())
        for (std::size_t k = 0; k < chart.size(); ++k) pool.push_back(k);
    if (pool.empty()) return m;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (unsigned d = 0; d < degree; ++d) {
        const std::size_t v = pool[pick(rng)];
        if (chart.odd(v) && m.exp[v]) continue;
        ++m.exp[v];
    }
    return m;
}

inline Poly random_poly(Rng& rng, const ChartPtr& chart, const RandomPolyOptions& opt = {}) {
    Poly p(chart);
    std::uniform_int_distribution<unsigned> nterms(0, opt.max_terms);
    std::uniform_int_distribution<unsigned> deg(0, opt.max_degree);
    const unsigned n = nterms(rng);
    for (unsigned t = 0; t < n; ++t)
        p.add_term(random_monomial(rng, *chart, opt, deg(rng)), random_scalar(rng, opt.coefficient_range));
    return p;
}

// Random element of a fixed parity.
inline Poly random_homogeneous(Rng& rng, const ChartPtr& chart, Parity parity,
                               const RandomPolyOptions& opt = {}) {
    Poly p = random_poly(rng, chart, opt);
    auto [even, odd] = p.split_parity();
    return is_odd(parity) ? odd : even;
}

} // namespace gv
