#pragma once

#include "gv/fields/derivation.hpp"

#include <string>
#include <vector>

namespace gv {

struct RelatedResidual {
    std::size_t coordinate; // index on the target chart
    Poly residual;          // on the source chart
};

struct RelatedCheck {
    bool ok = true;
    std::vector<RelatedResidual> residuals;
};

/// X on phi.target() and Y on phi.source(); phi pulls Y-coordinates back to
/// X's chart. Residual_g = X(phi* g) - phi*(Y^g).
inline RelatedCheck related(const ChartMap& phi, const Derivation& x, const Derivation& y) {
    if (x.chart() != phi.target()) throw ChartMismatch("related: first field is not on the map's domain");
    if (y.chart() != phi.source()) throw ChartMismatch("related: second field is not on the map's codomain");
    RelatedCheck out;
    for (std::size_t g = 0; g < y.size(); ++g) {
        Poly r = apply(x, phi.image(g)) - substitute(y[g], phi);
        if (!r.is_zero()) {
            out.ok = false;
            out.residuals.push_back({g, std::move(r)});
        }
    }
    return out;
}

} // namespace gv
