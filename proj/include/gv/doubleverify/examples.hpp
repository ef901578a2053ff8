#pragma once

#include "gv/algebroid/examples.hpp"
#include "gv/doubleverify/cotangent.hpp"
#include "gv/doubleverify/transform.hpp"

#include <string>
#include <vector>

namespace gv {

/// Pi T(Pi A): x, xi, eta = dx, z = dxi with Q2 = d and Q1 = Q^v d_v - d(Q^v) d_{dv}.
inline DoubleStructureFunctions tangent_double(const AntialgebroidData& a) {
    const std::size_t n = a.base_size(), r = a.rank();
    DoubleShape s;
    for (std::size_t b = 0; b < n; ++b) {
        const auto& v = a.base()->var(b);
        s.base.push_back({v.name, v.parity, {}});
        s.b.push_back(v.parity);
    }
    s.a = a.fiber();
    s.k = a.fiber();
    DoubleStructureFunctions shell(s);
    const auto& charts = shell.charts();
    const ChartPtr& ch = charts.pi2;
    Derivation d(ch), q1(ch);
    for (std::size_t v = 0; v < n + r; ++v) d.set(v, Poly::variable(ch, v + n + r));
    const Derivation qa = a.field();
    for (std::size_t v = 0; v < n + r; ++v) {
        const Poly p = embed(qa[v], ch);
        q1.set(v, p);
        q1.set(v + n + r, -apply(d, p));
    }
    return structure_from_fields(s, q1, d, charts);
}

/// Lie bialgebra over a point: brackets c on g and c_dual on g*, where
/// [eps^i, eps^j] = c_dual[i][j][k] eps^k transposes the cobracket.
inline BialgebroidData lie_bialgebra(const StructureConstants& c, const StructureConstants& c_dual) {
    return {lie_algebra(c), lie_algebra(c_dual)};
}

/// ax+b: [e1,e2] = e2, delta e2 = e1 ^ e2, delta e1 = 0.
inline BialgebroidData ax_plus_b_bialgebra() {
    auto c = empty_constants(2), d = empty_constants(2);
    set_bracket(c, 0, 1, 1, 1);
    set_bracket(d, 0, 1, 1, 1);
    return lie_bialgebra(c, d);
}

/// ax+b + R e3 with delta e3 = s e1 ^ e3: the cocycle identity fails at (e2, e3)
/// for s != 0 although both brackets satisfy Jacobi.
inline BialgebroidData broken_bialgebra(const Scalar& s = Scalar(1)) {
    auto c = empty_constants(3), d = empty_constants(3);
    set_bracket(c, 0, 1, 1, 1);
    set_bracket(d, 0, 1, 1, 1);
    set_bracket(d, 0, 2, 2, s);
    return lie_bialgebra(c, d);
}

/// delta[x,y] - ad_x delta y + ad_y delta x on basis pairs, with delta read off c_dual.
inline std::vector<Scalar> cocycle_defect(const StructureConstants& c, const StructureConstants& c_dual) {
    const std::size_t n = c.size();
    // delta(e_k) = 1/2 d_k^{ij} e_i ^ e_j with d_k^{ij} = c_dual[i][j][k]; as a tensor t[k][i][j]
    auto delta = [&](const std::vector<Scalar>& x) {
        std::vector<std::vector<Scalar>> t(n, std::vector<Scalar>(n, Scalar(0)));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) t[i][j] += x[k] * c_dual[i][j][k];
        return t;
    };
    auto ad = [&](std::size_t a, const std::vector<std::vector<Scalar>>& t) {
        // ad_{e_a}(e_i ^ e_j) = [e_a,e_i] ^ e_j + e_i ^ [e_a,e_j]
        std::vector<std::vector<Scalar>> out(n, std::vector<Scalar>(n, Scalar(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (t[i][j] == 0) continue;
                for (std::size_t m = 0; m < n; ++m) {
                    out[m][j] += t[i][j] * c[a][i][m];
                    out[i][m] += t[i][j] * c[a][j][m];
                }
            }
        return out;
    };
    std::vector<Scalar> defect;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            std::vector<Scalar> ab(n), ea(n, Scalar(0)), eb(n, Scalar(0));
            for (std::size_t k = 0; k < n; ++k) ab[k] = c[a][b][k];
            ea[a] = 1;
            eb[b] = 1;
            const auto lhs = delta(ab), r1 = ad(a, delta(eb)), r2 = ad(b, delta(ea));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) defect.push_back(lhs[i][j] - r1[i][j] + r2[i][j]);
        }
    return defect;
}

/// (TM, T*M) with the linear Poisson tensor pi^{ij} = c_k^{ij} x^k of the dual of a Lie algebra.
inline BialgebroidData poisson_bialgebroid(const StructureConstants& c) {
    const std::size_t n = c.size();
    AntialgebroidData tm = de_rham(n);
    AntialgebroidData tstar(even_base(n), std::vector<Parity>(n, Parity::even));
    const ChartPtr& ch = tstar.chart();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Poly pij(ch);
            for (std::size_t k = 0; k < n; ++k) pij += c[i][j][k] * Poly::variable(ch, k);
            tstar.set_anchor(i, j, pij);
            for (std::size_t k = 0; k < n; ++k) tstar.set_structure(i, j, k, Poly::constant(ch, c[i][j][k]));
        }
    return {tm, tstar};
}

/// Any pair of brackets on a 2-dimensional space is a Lie bialgebra.
inline BialgebroidData random_plane_bialgebra(Rng& rng) {
    auto c = empty_constants(2), d = empty_constants(2);
    for (std::size_t k = 0; k < 2; ++k) {
        set_bracket(c, 0, 1, k, random_scalar(rng, 2, false));
        set_bracket(d, 0, 1, k, random_scalar(rng, 2, false));
    }
    return lie_bialgebra(c, d);
}

struct NamedDouble {
    std::string name;
    DoubleStructureFunctions sf;
};

/// Valid even double Lie algebroids with ranks <= 2, base dimension <= 2 and
/// coefficients of degree <= 1, before any frame change.
inline std::vector<NamedDouble> valid_double_catalog() {
    std::vector<NamedDouble> out;
    for (const auto& a : action_catalog())
        if (a.base_dim <= 2 && a.c.size() <= 2) out.push_back({"tangent double of " + a.name, tangent_double(action_algebroid(a))});
    for (const auto& g : lie_algebra_catalog())
        if (g.c.size() <= 2) out.push_back({"tangent double of " + g.name, tangent_double(lie_algebra(g.c))});
    out.push_back({"tangent double of TR2", tangent_double(de_rham(2))});
    out.push_back({"cotangent double of ax+b", cotangent_double(ax_plus_b_bialgebra()).sf});
    auto axb = empty_constants(2);
    set_bracket(axb, 0, 1, 1, 1);
    out.push_back({"cotangent double of (TR2, T*R2) with the ax+b Poisson tensor",
                   cotangent_double(poisson_bialgebroid(axb)).sf});
    return out;
}

/// A valid instance: a catalog entry or a random plane bialgebra's cotangent
/// double, in random frames.
inline NamedDouble random_valid_double(Rng& rng) {
    std::uniform_int_distribution<int> pick(0, 2);
    NamedDouble base = [&]() -> NamedDouble {
        if (pick(rng) == 0) return {"cotangent double of a random plane bialgebra", cotangent_double(random_plane_bialgebra(rng)).sf};
        auto cat = valid_double_catalog();
        std::uniform_int_distribution<std::size_t> which(0, cat.size() - 1);
        return cat[which(rng)];
    }();
    return {base.name + " in random frames", transform(base.sf, random_frame_change(rng, base.sf.shape()))};
}

} // namespace gv
