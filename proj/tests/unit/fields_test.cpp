#include "gv/fields.hpp"

#include <gtest/gtest.h>

using namespace gv;

namespace {

ChartPtr small_chart() {
    return ChartBuilder(1)
        .add("x", Parity::even)
        .add("y", Parity::even)
        .add("xi", Parity::odd, {1})
        .add("eta", Parity::odd, {1})
        .add("u", Parity::even, {1})
        .build();
}

Poly v(const ChartPtr& c, const char* n) { return Poly::variable(c, n); }
Poly P(const ChartPtr& c, const char* s) { return parse_poly(s, c); }

Derivation random_field(Rng& rng, const ChartPtr& c, Parity p, unsigned degree = 2) {
    Derivation d(c);
    RandomPolyOptions o;
    o.max_degree = degree;
    o.max_terms = 2;
    for (std::size_t k = 0; k < c->size(); ++k)
        d.set(k, random_homogeneous(rng, c, p + c->parity(k), o));
    return d;
}

// X(Y(f)) - (-1)^{XY} Y(X(f))
Poly composition_oracle(const Derivation& x, const Derivation& y, const Poly& f) {
    const int s = koszul(*x.parity(), *y.parity());
    return apply(x, apply(y, f)) - Scalar(s) * apply(y, apply(x, f));
}

} // namespace

TEST(Fields, ApplyExamples) {
    auto c = small_chart();
    Derivation x(c);
    x.set("x", v(c, "xi"));
    EXPECT_EQ(apply(x, P(c, "x^2")), P(c, "2*x*xi"));

    Derivation y(c);
    y.set("x", v(c, "xi"));
    y.set("xi", v(c, "x"));
    EXPECT_EQ(apply(y, P(c, "x*xi")), P(c, "x^2"));
}

TEST(Fields, CommutatorExamples) {
    auto c = small_chart();
    Derivation dx = partial_field(c, 0);
    Derivation xdx(c);
    xdx.set("x", v(c, "x"));
    EXPECT_EQ(commutator(dx, xdx), dx);

    Derivation odd(c);
    odd.set("x", v(c, "xi"));
    EXPECT_TRUE(commutator(odd, odd).is_zero());
}

TEST(Fields, HomologicalExamples) {
    auto c = ChartBuilder(1).add("x", Parity::even).add("xi", Parity::odd, {1}).build();
    Derivation dr(c);
    dr.set("x", v(c, "xi"));
    EXPECT_TRUE(is_homological(dr).ok);
    EXPECT_TRUE(is_homological(Derivation(c)).ok);

    Derivation q(c);
    q.set("x", v(c, "xi"));
    q.set("xi", v(c, "x"));
    auto h = is_homological(q);
    // Q(Q(f)) on generators is the residual
    for (std::size_t k = 0; k < c->size(); ++k)
        EXPECT_EQ(h.residual[k], apply(q, apply(q, Poly::variable(c, k))));
    EXPECT_FALSE(h.ok);

    Derivation even(c);
    even.set("x", v(c, "x"));
    EXPECT_THROW(is_homological(even), ParityError);
}

TEST(Fields, WeightAndParityOfFields) {
    auto c = small_chart();
    Derivation q(c);
    q.set("x", v(c, "xi"));
    q.set("u", v(c, "xi") * v(c, "eta") * v(c, "xi") + v(c, "xi") * v(c, "u"));
    EXPECT_EQ(*q.parity(), Parity::odd);
    ASSERT_TRUE(q.weight().has_value());
    EXPECT_EQ(*q.weight(), Weight{1});
    Derivation bad(c);
    bad.set("x", v(c, "xi"));
    bad.set("y", v(c, "x"));
    EXPECT_FALSE(bad.parity().has_value());
    EXPECT_THROW(commutator(bad, bad), InhomogeneityError);
}

TEST(Fields, BracketExamples) {
    auto c = ChartBuilder(0).add("x", Parity::even).add("p", Parity::even).build();
    BracketTable t(c, Parity::even);
    t.set("p", "x", P(c, "1"));
    EXPECT_EQ(bracket(t, v(c, "p"), P(c, "x^2")), P(c, "2*x"));
    EXPECT_EQ(bracket(t, v(c, "x"), v(c, "p")), P(c, "-1"));
}

TEST(Fields, SchoutenTableEntry) {
    auto c = ChartBuilder(0).add("x", Parity::even).add("eta", Parity::odd).add("z", Parity::even)
                 .add("q", Parity::even).build();
    BracketTable t(c, Parity::odd);
    t.set("eta", "z", -v(c, "q"));
    EXPECT_EQ(bracket(t, v(c, "eta"), v(c, "z")), -v(c, "q"));
    // {z,eta} = -(-1)^{(z+1)(eta+1)} {eta,z}
    EXPECT_EQ(t.entry(c->index_of("z"), c->index_of("eta")), v(c, "q"));
}

TEST(Fields, BracketEntryParityIsChecked) {
    auto c = small_chart();
    BracketTable t(c, Parity::odd);
    EXPECT_THROW(t.set("x", "y", v(c, "x")), ParityError);
}

TEST(Fields, LeibnizResidualsOfZeroField) {
    auto c = small_chart();
    BracketTable t(c, Parity::odd);
    t.set("x", "xi", v(c, "x"));
    EXPECT_TRUE(leibniz_residuals(Derivation(c), t).empty());
}

TEST(Fields, RelatedExamples) {
    auto c = small_chart();
    Derivation x(c);
    x.set("x", v(c, "xi"));
    EXPECT_TRUE(related(ChartMap::identity(c), x, x).ok);

    // projection killing u; X depends only on u
    auto base = ChartBuilder(1).add("x", Parity::even).add("y", Parity::even).add("xi", Parity::odd, {1})
                    .add("eta", Parity::odd, {1}).build();
    ChartMap proj(base, c);
    Derivation xu(c);
    xu.set("x", v(c, "u"));
    Derivation y(base);
    auto res = related(proj, xu, y);
    EXPECT_FALSE(res.ok);
    ASSERT_EQ(res.residuals.size(), 1u);
    EXPECT_EQ(res.residuals[0].residual, v(c, "u"));
}

TEST(FieldsProperties, CommutatorMatchesCompositionOracle) {
    auto c = small_chart();
    Rng rng(21);
    RandomPolyOptions o;
    o.max_degree = 3;
    for (int k = 0; k < 200; ++k) {
        Derivation x = random_field(rng, c, parity_of(k));
        Derivation y = random_field(rng, c, parity_of(k / 2));
        Derivation b = commutator(x, y);
        for (std::size_t var = 0; var < c->size(); ++var)
            ASSERT_EQ(b[var], composition_oracle(x, y, Poly::variable(c, var)));
        Poly f = random_poly(rng, c, o);
        ASSERT_EQ(apply(b, f), composition_oracle(x, y, f));
    }
}

TEST(FieldsProperties, GradedJacobiAndAntisymmetry) {
    auto c = small_chart();
    Rng rng(22);
    for (int k = 0; k < 200; ++k) {
        Parity px = parity_of(k), py = parity_of(k / 2), pz = parity_of(k / 4);
        Derivation x = random_field(rng, c, px, 1), y = random_field(rng, c, py, 1),
                   z = random_field(rng, c, pz, 1);
        ASSERT_EQ(commutator(x, y), Scalar(-koszul(px, py)) * commutator(y, x));
        Derivation lhs = commutator(x, commutator(y, z));
        Derivation rhs = commutator(commutator(x, y), z) + Scalar(koszul(px, py)) * commutator(y, commutator(x, z));
        ASSERT_EQ(lhs, rhs);
    }
}

TEST(FieldsProperties, WeightAdditivity) {
    auto c = small_chart();
    Rng rng(23);
    int checked = 0;
    for (int k = 0; k < 200; ++k) {
        Derivation x = random_field(rng, c, parity_of(k), 2);
        Derivation y = random_field(rng, c, parity_of(k / 2), 2);
        auto wx = x.weight(), wy = y.weight();
        auto b = commutator(x, y);
        if (!wx || !wy || b.is_zero()) continue;
        auto wb = b.weight();
        ASSERT_TRUE(wb.has_value());
        ASSERT_EQ(*wb, *wx + *wy);
        ++checked;
    }
    // single-term fields are weight-homogeneous often enough
    Derivation a(c), d(c);
    a.set("x", v(c, "xi"));
    d.set("xi", v(c, "u"));
    EXPECT_EQ(*commutator(a, d).weight(), Weight{1});
    (void)checked;
}

TEST(FieldsProperties, BracketAntisymmetryAndDerivation) {
    auto c = small_chart();
    Rng rng(24);
    for (Parity eps : {Parity::even, Parity::odd}) {
        BracketTable t(c, eps);
        RandomPolyOptions o;
        o.max_degree = 2;
        o.max_terms = 2;
        for (std::size_t a = 0; a < c->size(); ++a)
            for (std::size_t b = a; b < c->size(); ++b) {
                if (a == b && !is_odd(c->parity(a) + eps)) continue;
                t.set(a, b, random_homogeneous(rng, c, c->parity(a) + c->parity(b) + eps, o));
            }
        for (int k = 0; k < 100; ++k) {
            Parity pf = parity_of(k), pg = parity_of(k / 2), ph = parity_of(k / 4);
            Poly f = random_homogeneous(rng, c, pf, o), g = random_homogeneous(rng, c, pg, o),
                 h = random_homogeneous(rng, c, ph, o);
            ASSERT_EQ(bracket(t, f, g) + Scalar(koszul(pf + eps, pg + eps)) * bracket(t, g, f), Poly(c));
            ASSERT_EQ(bracket(t, f, g * h),
                      bracket(t, f, g) * h + Scalar(koszul(pf + eps, pg)) * (g * bracket(t, f, h)));
        }
    }
}

TEST(FieldsProperties, PoissonHamiltonianMorphism) {
    // {H_X, H_Y} = H_[X,Y] with H_X = X^v p_v on T*R^1|1
    auto c = ChartBuilder(0)
                 .add("x", Parity::even)
                 .add("xi", Parity::odd)
                 .add("px", Parity::even)
                 .add("pxi", Parity::odd)
                 .build();
    BracketTable t(c, Parity::even);
    t.set("px", "x", P(c, "1"));
    t.set("pxi", "xi", P(c, "1"));
    auto base = std::vector<std::size_t>{0, 1};
    auto ham = [&](const Derivation& x) {
        return x[0] * v(c, "px") + x[1] * v(c, "pxi");
    };
    Rng rng(25);
    RandomPolyOptions o;
    o.max_degree = 2;
    o.variables = base;
    for (int k = 0; k < 100; ++k) {
        Derivation x(c), y(c);
        Parity px = parity_of(k), py = parity_of(k / 2);
        for (std::size_t var : base) {
            x.set(var, random_homogeneous(rng, c, px + c->parity(var), o));
            y.set(var, random_homogeneous(rng, c, py + c->parity(var), o));
        }
        ASSERT_EQ(bracket(t, ham(x), ham(y)), ham(commutator(x, y)));
    }
}
