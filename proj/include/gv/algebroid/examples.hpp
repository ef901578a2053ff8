#pragma once

#include "gv/algebroid/antialgebroid.hpp"
#include "gv/bundles/matrix.hpp"

#include <string>
#include <vector>

namespace gv {

using StructureConstants = std::vector<std::vector<std::vector<Scalar>>>; // c[i][j][k]: [e_i,e_j] = c e_k

inline std::vector<Variable> even_base(std::size_t n, const std::string& prefix = "x") {
    std::vector<Variable> v;
    for (std::size_t a = 0; a < n; ++a) v.push_back({prefix + std::to_string(a + 1), Parity::even, {}});
    return v;
}

/// Even Lie algebroid with anchor rho_i^a and brackets [e_i,e_j] = c_ij^k e_k,
/// encoded as Q_i^a = rho_i^a, Q_ij^k = c_ij^k.
inline AntialgebroidData algebroid_from(std::vector<Variable> base, const std::vector<std::vector<Poly>>& rho,
                                        const std::vector<std::vector<std::vector<Poly>>>& c) {
    const std::size_t n = c.size();
    AntialgebroidData q(std::move(base), std::vector<Parity>(n, Parity::even));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < q.base_size() && i < rho.size(); ++a) q.set_anchor(i, a, rho[i][a]);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) q.set_structure(i, j, k, c[i][j][k]);
    }
    return q;
}

inline std::vector<std::vector<std::vector<Poly>>> constant_structure(const ChartPtr& ch, const StructureConstants& c) {
    std::vector<std::vector<std::vector<Poly>>> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        out[i].resize(c.size());
        for (std::size_t j = 0; j < c.size(); ++j)
            for (std::size_t k = 0; k < c.size(); ++k) out[i][j].push_back(Poly::constant(ch, c[i][j][k]));
    }
    return out;
}

/// Lie algebra over a point.
inline AntialgebroidData lie_algebra(const StructureConstants& c) {
    AntialgebroidData shape({}, std::vector<Parity>(c.size(), Parity::even));
    return algebroid_from({}, {}, constant_structure(shape.chart(), c));
}

/// de Rham field xi^a d/dx^a on Pi TM.
inline AntialgebroidData de_rham(std::size_t n) {
    AntialgebroidData q(even_base(n), std::vector<Parity>(n, Parity::even));
    for (std::size_t a = 0; a < n; ++a) q.set_anchor(a, a, Poly::constant(q.chart(), 1));
    return q;
}

inline StructureConstants empty_constants(std::size_t n) {
    return StructureConstants(n, std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(0))));
}

inline void set_bracket(StructureConstants& c, std::size_t i, std::size_t j, std::size_t k, const Scalar& v) {
    c[i][j][k] = v;
    c[j][i][k] = -v;
}

struct NamedAlgebra {
    std::string name;
    StructureConstants c;
};

/// Real Lie algebras of dimension <= 3 used as test material.
inline std::vector<NamedAlgebra> lie_algebra_catalog(const Scalar& lambda = Scalar(2)) {
    std::vector<NamedAlgebra> out;
    out.push_back({"abelian1", empty_constants(1)});
    out.push_back({"abelian2", empty_constants(2)});
    auto axb = empty_constants(2);
    set_bracket(axb, 0, 1, 1, 1);
    out.push_back({"ax+b", axb});
    auto heis = empty_constants(3);
    set_bracket(heis, 0, 1, 2, 1);
    out.push_back({"heisenberg", heis});
    auto so3 = empty_constants(3);
    set_bracket(so3, 0, 1, 2, 1);
    set_bracket(so3, 1, 2, 0, 1);
    set_bracket(so3, 2, 0, 1, 1);
    out.push_back({"so3", so3});
    auto sl2 = empty_constants(3); // h, e, f
    set_bracket(sl2, 0, 1, 1, 2);
    set_bracket(sl2, 0, 2, 2, -2);
    set_bracket(sl2, 1, 2, 0, 1);
    out.push_back({"sl2", sl2});
    auto r3 = empty_constants(3);
    set_bracket(r3, 0, 1, 1, 1);
    set_bracket(r3, 0, 2, 2, lambda);
    out.push_back({"r3", r3});
    auto axb_sum = empty_constants(3);
    set_bracket(axb_sum, 0, 1, 1, 1);
    out.push_back({"ax+b+R", axb_sum});
    return out;
}

/// Structure constants in the basis e'_i = P_i^j e_j.
inline StructureConstants change_basis(const StructureConstants& c, const std::vector<std::vector<Scalar>>& p) {
    const std::size_t n = c.size();
    auto pinv = invert(p);
    if (!pinv) throw Error("change of basis is singular");
    auto out = empty_constants(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    const Scalar pp = p[i][a] * p[j][b];
                    if (pp == 0) continue;
                    for (std::size_t m = 0; m < n; ++m)
                        for (std::size_t k = 0; k < n; ++k) out[i][j][k] += pp * c[a][b][m] * (*pinv)[m][k];
                }
    return out;
}

inline std::vector<std::vector<Scalar>> random_invertible(Rng& rng, std::size_t n) {
    for (;;) {
        std::vector<std::vector<Scalar>> p(n, std::vector<Scalar>(n));
        for (auto& row : p)
            for (auto& e : row) e = random_scalar(rng, 2, false);
        if (invert(p)) return p;
    }
}

/// Anchor and brackets in the basis e'_i = P_i^j e_j (constant P).
inline AntialgebroidData change_basis(const AntialgebroidData& q, const std::vector<std::vector<Scalar>>& p) {
    const std::size_t n = q.rank();
    auto pinv = invert(p);
    if (!pinv) throw Error("change of basis is singular");
    AntialgebroidData out(q.base()->vars(), q.fiber());
    const ChartPtr& ch = out.chart();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < q.base_size(); ++a) {
            Poly s(ch);
            for (std::size_t j = 0; j < n; ++j) s += p[i][j] * embed(q.anchor(j, a), ch);
            out.set_anchor(i, a, s);
        }
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Poly s(ch);
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b) {
                        const Scalar pp = p[i][a] * p[j][b];
                        if (pp == 0) continue;
                        for (std::size_t m = 0; m < n; ++m)
                            if ((*pinv)[m][k] != 0) s += pp * (*pinv)[m][k] * embed(q.structure(a, b, m), ch);
                    }
                out.set_structure(i, j, k, s);
            }
    }
    return out;
}

struct NamedAction {
    std::string name;
    std::size_t base_dim;
    StructureConstants c;
    std::vector<std::vector<std::string>> rho; // rho[i][a] in the base grammar
};

/// Polynomial actions [rho_i, rho_j] = c_ij^k rho_k.
inline std::vector<NamedAction> action_catalog() {
    std::vector<NamedAction> out;
    auto algebras = lie_algebra_catalog();
    auto find = [&](const std::string& n) {
        for (auto& a : algebras)
            if (a.name == n) return a.c;
        throw Error("no algebra " + n);
    };
    out.push_back({"sl2 on R", 1, find("sl2"), {{"-2*x1"}, {"1"}, {"-x1^2"}}});
    out.push_back({"ax+b on R", 1, find("ax+b"), {{"-x1"}, {"1"}}});
    out.push_back({"R2 on R2", 2, find("abelian2"), {{"1", "0"}, {"0", "1"}}});
    out.push_back({"so3 on R3", 3, find("so3"), {{"0", "x3", "-x2"}, {"-x3", "0", "x1"}, {"x2", "-x1", "0"}}});
    out.push_back({"heisenberg on R2", 2, find("heisenberg"), {{"1", "0"}, {"0", "x1"}, {"0", "1"}}});
    return out;
}

inline AntialgebroidData action_algebroid(const NamedAction& a) {
    AntialgebroidData shape(even_base(a.base_dim), std::vector<Parity>(a.c.size(), Parity::even));
    std::vector<std::vector<Poly>> rho;
    for (const auto& row : a.rho) {
        rho.emplace_back();
        for (const auto& s : row) rho.back().push_back(parse_poly(s, shape.chart()));
    }
    return algebroid_from(even_base(a.base_dim), rho, constant_structure(shape.chart(), a.c));
}

/// TM with the frame e_i = A_i^a d_a, A unipotent upper triangular with
/// polynomial entries, so the structure functions are polynomial.
inline AntialgebroidData tangent_frame(Rng& rng, std::size_t n, unsigned degree = 1) {
    AntialgebroidData q(even_base(n), std::vector<Parity>(n, Parity::even));
    const ChartPtr& ch = q.chart();
    RandomPolyOptions o;
    o.max_degree = degree;
    o.max_terms = 2;
    for (std::size_t a = 0; a < n; ++a) o.variables.push_back(a);
    PolyMatrix a = PolyMatrix::identity(ch, n), nil(ch, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = random_poly(rng, ch, o);
            nil(i, j) = -a(i, j);
        }
    // B = A^{-1} = sum_m (I - A)^m
    PolyMatrix b = PolyMatrix::identity(ch, n), term = PolyMatrix::identity(ch, n);
    for (std::size_t m = 1; m < n; ++m) {
        term = term * nil;
        b = b + term;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) q.set_anchor(i, k, a(i, k));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            // [e_i, e_j]^c = A_i^b d_b A_j^c - A_j^b d_b A_i^c, then expand in the frame
            std::vector<Poly> v(n, Poly(ch));
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t bb = 0; bb < n; ++bb)
                    v[c] += a(i, bb) * partial(a(j, c), bb) - a(j, bb) * partial(a(i, c), bb);
            for (std::size_t k = 0; k < n; ++k) {
                Poly s(ch);
                for (std::size_t c = 0; c < n; ++c) s += v[c] * b(c, k);
                q.set_structure(i, j, k, s);
            }
        }
    return q;
}

/// Random Q-data of the right parities, reduced to its graded antisymmetric part.
inline AntialgebroidData random_antialgebroid(Rng& rng, std::vector<Variable> base, std::vector<Parity> fiber,
                                              unsigned degree = 1) {
    AntialgebroidData q(std::move(base), std::move(fiber));
    RandomPolyOptions o;
    o.max_degree = degree;
    o.max_terms = 2;
    for (std::size_t a = 0; a < q.base_size(); ++a) o.variables.push_back(a);
    const ChartPtr& ch = q.chart();
    for (std::size_t i = 0; i < q.rank(); ++i) {
        for (std::size_t a = 0; a < q.base_size(); ++a)
            q.set_anchor(i, a, random_homogeneous(rng, ch, q.fiber()[i] + ch->parity(a), o));
        for (std::size_t j = 0; j < q.rank(); ++j)
            for (std::size_t k = 0; k < q.rank(); ++k)
                q.set_structure(j, i, k, random_homogeneous(rng, ch, q.fiber()[i] + q.fiber()[j] + q.fiber()[k], o));
    }
    return q.normalized();
}

inline Section random_section(Rng& rng, const AntialgebroidData& q, Parity parity, unsigned degree = 2) {
    RandomPolyOptions o;
    o.max_degree = degree;
    o.max_terms = 3;
    for (std::size_t a = 0; a < q.base_size(); ++a) o.variables.push_back(a);
    Section u{{}, parity};
    for (std::size_t i = 0; i < q.rank(); ++i)
        u.components.push_back(random_homogeneous(rng, q.chart(), q.fiber()[i] + parity, o));
    return u;
}

} // namespace gv
