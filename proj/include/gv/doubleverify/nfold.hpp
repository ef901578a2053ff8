#pragma once

#include "gv/bundles/multiple.hpp"
#include "gv/doubleverify/conditions.hpp"

#include <bit>
#include <string>
#include <vector>

namespace gv {

/// Fully reversed n-fold chart: base, then one family per nonempty subset s of
/// {1..n} with coordinates p<digits>_<i>, weight 1 in each direction of s and
/// parity flipped |s| times.
struct NFoldShape {
    std::size_t n = 0;
    std::vector<Variable> base;
    std::vector<std::vector<Parity>> families; // indexed by subset mask
};

inline ChartPtr nfold_chart(const NFoldShape& s) {
    if (s.n == 0 || s.n > 6) throw Error("n-fold charts need 1 to 6 directions");
    if (s.families.size() > (std::size_t(1) << s.n)) throw ShapeError("families", "more families than subsets");
    ChartBuilder b(s.n);
    for (const auto& v : s.base) b.add(v.name, v.parity);
    for (FamilyMask m = 1; m < (FamilyMask(1) << s.n); ++m) {
        if (m >= s.families.size()) break;
        Weight w(s.n, 0);
        for (unsigned r : mask_elements(m)) w[r - 1] = 1;
        for (std::size_t i = 0; i < s.families[m].size(); ++i)
            b.add("p" + mask_digits(m) + "_" + std::to_string(i + 1), s.families[m][i] + parity_of(std::popcount(m)), w);
    }
    return b.build();
}

inline std::string field_label(std::size_t r) { return "Q" + std::to_string(r + 1); }

/// Pairwise [Q_r, Q_s] (r = s halved) for n odd fields of weights e_1..e_n.
inline ConditionReport nfold_check(const ChartPtr& chart, const std::vector<Derivation>& fields) {
    const std::size_t n = fields.size();
    if (chart->directions() != n)
        throw ShapeError("fields", "expected " + std::to_string(chart->directions()) + " fields, got " + std::to_string(n));
    for (std::size_t r = 0; r < n; ++r) {
        const Derivation& q = fields[r];
        if (q.chart() != chart) throw ChartMismatch(field_label(r) + " lives on a different chart");
        if (q.is_zero()) continue;
        const auto p = q.parity();
        if (!p || *p != Parity::odd) throw ShapeError(field_label(r), field_label(r) + " is not odd");
        Weight e(n, 0);
        e[r] = 1;
        const auto w = q.weight();
        if (!w || *w != e)
            throw ShapeError(field_label(r), field_label(r) + " has weight " + (w ? to_string(*w) : std::string("inhomogeneous")) +
                                                 ", expected " + to_string(e));
    }
    ConditionReport rep{"nfold", {}, {}, {}, {}};
    const Scalar half(1, 2);
    Derivation total(chart), pair_sum(chart);
    for (const auto& q : fields) total += q;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = r; s < n; ++s) {
            Derivation x = commutator(fields[r], fields[s]);
            pair_sum += x;
            if (r != s) pair_sum += x;
            if (r == s) x *= half;
            const std::string family = "[" + field_label(r) + "," + field_label(s) + "]";
            FamilyValues fv{family, {}, {}};
            for (std::size_t v = 0; v < x.size(); ++v) {
                fv.tuples.push_back({v});
                fv.values.push_back(x[v]);
                if (!x[v].is_zero()) rep.residuals.push_back({family, chart->var(v).name, x[v]});
            }
            rep.families.emplace(family, std::move(fv));
        }
    const Derivation qq = commutator(total, total);
    for (std::size_t v = 0; v < qq.size(); ++v)
        if (qq[v] != pair_sum[v]) throw Error("[Q,Q] differs from the sum of pairwise brackets at " + chart->var(v).name);
    if (qq.is_zero() != rep.pass()) throw Error("[Q,Q] = 0 disagrees with pairwise vanishing");
    rep.notes.push_back(qq.is_zero() ? "total field Q = sum Q_r is homological" : "total field Q = sum Q_r is not homological");
    return rep;
}

/// n = 2 specialization on the Pi^2 D chart of a double.
inline ConditionReport nfold_check(const DoubleStructureFunctions& sf) {
    const auto f = build_fields(normalized(sf));
    return nfold_check(sf.charts().pi2, {f.q1, f.q2});
}

} // namespace gv
