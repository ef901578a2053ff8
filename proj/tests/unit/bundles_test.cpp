#include "gv/bundles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace gv;

namespace {

const Parity E = Parity::even;
const Parity O = Parity::odd;

std::vector<Variable> base_x() { return {Variable{"x", E, {}}}; }
std::vector<Variable> base_xy() { return {Variable{"x", E, {}}, Variable{"y", E, {}}}; }

Poly P(const MultipleBundle& b, const std::string& s) { return parse_poly(s, b.chart()); }

// A: (u1 even, u2 odd), B: w1 even, K: z1 even, with printed-style entries.
MultipleBundle super_sample() {
    auto d = make_double(base_x(), {E, O}, {E}, {E});
    const auto& bc = d.base_chart();
    auto& k = d.block(Partition{3});
    k.entries[0] = parse_poly("1+x", bc);
    auto& m = d.block(mixed_partition);
    m.entries[m.flat({0, 0, 0})] = parse_poly("2", bc);
    m.entries[m.flat({1, 0, 0})] = Poly(bc);
    return d;
}

// Odd entry for the odd u-direction needs an odd base, so the u2 term is checked
// on a chart with an odd base coordinate.
MultipleBundle super_sample_odd_base() {
    auto d = make_double({Variable{"x", E, {}}, Variable{"c", O, {}}}, {E, O}, {E}, {E});
    const auto& bc = d.base_chart();
    d.block(Partition{3}).entries[0] = parse_poly("1+x", bc);
    auto& m = d.block(mixed_partition);
    m.entries[m.flat({0, 0, 0})] = parse_poly("2", bc);
    m.entries[m.flat({1, 0, 0})] = parse_poly("3*c", bc);
    return d;
}

bool same_blocks(const MultipleBundle& a, const MultipleBundle& b) {
    for (const auto& [p, blk] : a.blocks()) {
        const auto& other = b.block(p);
        for (std::size_t k = 0; k < blk.entries.size(); ++k)
            if (!(blk.entries[k] == embed(other.entries[k], a.base_chart()))) return false;
    }
    return true;
}

MultipleBundle random_even(Rng& rng, std::size_t ra, std::size_t rb, std::size_t rk, bool mixed = true,
                           unsigned degree = 1) {
    RandomBundleOptions o;
    o.mixed = mixed;
    o.coefficient_degree = degree;
    return random_bundle(rng, 2, base_xy(), {{}, std::vector<Parity>(ra, E), std::vector<Parity>(rb, E),
                                             std::vector<Parity>(rk, E)},
                         o);
}

MultipleBundle random_super(Rng& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    auto fam = [&](std::size_t n) {
        std::vector<Parity> f;
        for (std::size_t i = 0; i < n; ++i) f.push_back(bit(rng) ? O : E);
        return f;
    };
    return random_bundle(rng, 2, {Variable{"x", E, {}}, Variable{"c", O, {}}}, {{}, fam(2), fam(2), fam(2)});
}

} // namespace

TEST(Bundles, LawForZMatchesDisplayedForm) {
    auto d = super_sample();
    EXPECT_EQ(d.law(1, 0), P(d, "u1'"));
    EXPECT_EQ(d.law(2, 0), P(d, "w1'"));
    EXPECT_EQ(d.law(3, 0), P(d, "z1'*(1+x) + 2*u1'*w1'"));
}

TEST(Bundles, ReversionLawsMatchDisplayedForms) {
    auto d = super_sample_odd_base();
    auto pa = d.reverse(2);
    EXPECT_EQ(pa.law(3, 0), P(pa, "theta1'*(1+x) + 2*u1'*eta1' - u2'*eta1'*3*c"));
    auto pb = d.reverse(1);
    EXPECT_EQ(pb.law(3, 0), P(pb, "theta1'*(1+x) + 2*xi1'*w1' + xi2'*w1'*3*c"));
    auto ba = d.reverse(2).reverse(1);
    EXPECT_EQ(ba.law(3, 0), P(ba, "z1'*(1+x) + 2*xi1'*eta1' - xi2'*eta1'*3*c"));
    auto ab = d.reverse(1).reverse(2);
    EXPECT_EQ(ab.law(3, 0), P(ab, "z1'*(1+x) - 2*xi1'*eta1' + xi2'*eta1'*3*c"));
}

TEST(Bundles, ReversionFlipsParitiesAndNames) {
    auto d = super_sample();
    auto pa = d.reverse(2);
    EXPECT_EQ(pa.parity(1, 0), E);
    EXPECT_EQ(pa.parity(2, 0), O);
    EXPECT_EQ(pa.parity(3, 0), O);
    EXPECT_EQ(pa.coordinate(2, 0, true), "eta1'");
    EXPECT_EQ(d.reverse(1).reverse(2).coordinate(3, 0, false), "z1");
    EXPECT_THROW(d.reverse(3), Error);
}

TEST(Bundles, ReversionIsAnInvolution) {
    Rng rng(11);
    for (int t = 0; t < 30; ++t) {
        auto d = random_super(rng);
        EXPECT_EQ(d.reverse(1).reverse(1), d);
        EXPECT_EQ(d.reverse(2).reverse(2), d);
    }
    auto t3 = random_bundle(rng, 3, base_x(), {{}, {E}, {O}, {E}, {E}, {O}, {E}, {O, E}});
    for (unsigned r = 1; r <= 3; ++r) EXPECT_EQ(t3.reverse(r).reverse(r), t3);
}

TEST(Bundles, DecomposedEvenBundleReversesWithoutSigns) {
    Rng rng(3);
    auto d = random_even(rng, 2, 2, 1, false);
    EXPECT_TRUE(same_blocks(d, d.reverse(1)));
    EXPECT_TRUE(same_blocks(d, d.reverse(2)));
    EXPECT_TRUE(same_blocks(d, d.reverse(1).reverse(2)));
}

TEST(Bundles, PiCommuteUpToCoreSign) {
    Rng rng(5);
    for (int t = 0; t < 25; ++t) {
        auto d = t % 2 ? random_super(rng) : random_even(rng, 2, 1, 2);
        auto r = check_pi_commute(d);
        EXPECT_TRUE(r.ok);
        EXPECT_EQ(r.core_sign_flip, !d.block(mixed_partition).is_zero());
        // z -> -z carries one law onto the other
        auto m = core_sign_map(r.ab);
        for (std::size_t i = 0; i < d.rank(3); ++i) {
            Poly lhs = -substitute(r.ab.law(3, i), m);
            EXPECT_EQ(r.core_sign_flip ? lhs : r.ab.law(3, i), embed(r.ba.law(3, i), r.ab.chart()));
        }
    }
}

TEST(Bundles, PiCommuteDecomposedNeedsNoSign) {
    Rng rng(6);
    auto r = check_pi_commute(random_even(rng, 2, 2, 2, false));
    EXPECT_TRUE(r.ok);
    EXPECT_FALSE(r.core_sign_flip);
}

TEST(Bundles, DualOverADisplayedLaw) {
    // w_a' = T_a'^a w_a + u^i' T_a'i'^mu z_mu, z_mu' = T_mu'^mu z_mu
    Rng rng(8);
    const unsigned degree = 4;
    for (int t = 0; t < 10; ++t) {
        auto d = random_even(rng, 2, 2, 2);
        auto da = dualize(d, 1, degree);
        const auto& ch = da.chart();
        ChartMap law = da.transition_map();
        auto img = [&](FamilyMask s, std::size_t i) { return law.image(da.var_index(s, i, false)); };
        auto e = [&](const Poly& p) { return embed(p, ch); };
        const auto& x = d.block(mixed_partition);
        const auto mask = da.base_mask();
        for (std::size_t ap = 0; ap < d.rank(2); ++ap) {
            Poly rhs(ch);
            for (std::size_t a = 0; a < d.rank(2); ++a) rhs += e(d.square(2)(ap, a)) * img(3, a);
            for (std::size_t i = 0; i < d.rank(1); ++i)
                for (std::size_t mu = 0; mu < d.rank(3); ++mu)
                    rhs += Poly::variable(ch, da.var_index(1, i, true)) * e(x.entries[x.flat({i, ap, mu})]) *
                           img(2, mu);
            EXPECT_EQ(rhs.truncate(mask, degree), Poly::variable(ch, da.var_index(3, ap, true)));
        }
        for (std::size_t mp = 0; mp < d.rank(3); ++mp) {
            Poly rhs(ch);
            for (std::size_t mu = 0; mu < d.rank(3); ++mu) rhs += e(d.square(3)(mp, mu)) * img(2, mu);
            EXPECT_EQ(rhs.truncate(mask, degree), Poly::variable(ch, da.var_index(2, mp, true)));
        }
    }
}

TEST(Bundles, Biduality) {
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        auto d = random_even(rng, 2, 1, 2);
        EXPECT_EQ(dualize(dualize(d, 1, 4), 1, 4), d);
        EXPECT_EQ(dualize(dualize(d, 2, 4), 2, 4), d);
    }
}

TEST(Bundles, DualsRejectSuperData) {
    Rng rng(1);
    EXPECT_THROW(dualize(random_super(rng), 1, 3), ParityError);
    EXPECT_THROW(dualize(random_even(rng, 1, 1, 1), 3, 3), Error);
}

TEST(Bundles, CoreOfDualIsInverseTranspose) {
    Rng rng(10);
    const unsigned degree = 3;
    auto d = random_even(rng, 2, 2, 2);
    auto da = dualize(d, 1, degree);
    const auto& bc = da.base_chart();
    const auto mask = std::vector<bool>(bc->size(), true);
    auto on = [&](const PolyMatrix& m) {
        PolyMatrix r(bc, m.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = embed(m(i, j), bc);
        return r;
    };
    // side K* of D^*A and core B* of D^*A
    EXPECT_EQ((da.square(2) * on(d.square(3)).transpose()).truncate(mask, degree), PolyMatrix::identity(bc, 2));
    auto c = core(da);
    EXPECT_EQ((c.transition * on(d.square(2)).transpose()).truncate(mask, degree), PolyMatrix::identity(bc, 2));
}

TEST(Bundles, CoreOfDecomposedBundle) {
    Rng rng(12);
    auto d = random_even(rng, 1, 1, 2, false);
    auto c = core(d);
    EXPECT_EQ(c.parities, (std::vector<Parity>{E, E}));
    EXPECT_EQ(c.transition, d.square(3));
}

TEST(Bundles, PairingMinusIsInvariant) {
    Rng rng(13);
    for (int t = 0; t < 15; ++t) {
        auto d = random_even(rng, 2, 2, 1);
        EXPECT_TRUE(pairing_check(d, -1, 4).ok);
        auto plus = pairing_check(d, +1, 4);
        EXPECT_EQ(plus.ok, d.block(mixed_partition).is_zero());
    }
}

TEST(Bundles, PairingPlusResidualIsTwiceTheMixedTerms) {
    // constant data: residual of the + form is -2 u^i' w^a' X_{i a}^mu z_mu'
    auto d = make_double({}, {E}, {E}, {E});
    auto& m = d.block(mixed_partition);
    m.entries[0] = Poly::constant(d.base_chart(), 5);
    auto plus = pairing_check(d, +1, 2);
    EXPECT_FALSE(plus.ok);
    EXPECT_EQ(plus.residual, parse_poly("-10*u1'*w1'*z_1'", plus.residual.chart()));
}

TEST(Bundles, PairingDecomposedBothSigns) {
    Rng rng(14);
    auto d = random_even(rng, 2, 1, 2, false);
    EXPECT_TRUE(pairing_check(d, -1, 4).ok);
    EXPECT_TRUE(pairing_check(d, +1, 4).ok);
}

TEST(Bundles, PairingRejectsMismatchedDuals) {
    Rng rng(15);
    auto d1 = random_even(rng, 1, 1, 1);
    auto d2 = d1;
    d2.block(Partition{3}).entries[0] += Poly::variable(d2.base_chart(), "x");
    EXPECT_THROW(pairing_check(dualize(d1, 1, 2), dualize(d2, 2, 2), -1, 2), Error);
}

TEST(Bundles, NeighborGraphShape) {
    auto g = neighbor_graph();
    ASSERT_EQ(g.nodes.size(), 12u);
    std::set<std::string> labels;
    int structured = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& n = g.nodes[i];
        labels.insert(n.label);
        EXPECT_EQ(g.degree(i), 4u);
        std::set<std::size_t> targets(n.edges.begin(), n.edges.end());
        EXPECT_EQ(targets.size(), 4u) << n.label;
        EXPECT_FALSE(targets.count(i));
        if (n.structure_bearing) ++structured;
    }
    EXPECT_EQ(labels.size(), 12u);
    EXPECT_EQ(structured, 5);
    EXPECT_TRUE(g.undirected());
    for (const char* l : {"Pi^2 D", "Pi_K* D^*A", "Pi^2 D^*A", "Pi_K* D^*B", "Pi^2 D^*B"})
        EXPECT_TRUE(g.nodes[g.index_of(std::string(l))].structure_bearing) << l;
}

TEST(Bundles, ParityEdgesAreInvolutions) {
    auto g = neighbor_graph();
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (std::size_t e = 0; e < 2; ++e) EXPECT_EQ(g.nodes[g.nodes[i].edges[e]].edges[e], i);
    // D1 is the dual over the first side: D <-> D^*A, and D^*B -> D^*A over K*
    EXPECT_EQ(normalize_word("D1 D1"), "D");
    EXPECT_EQ(normalize_word("D2 D2"), "D");
    EXPECT_EQ(normalize_word("D2 D1"), "D^*B");
    EXPECT_EQ(normalize_word("D1 D2"), "D^*A");
}

TEST(Bundles, NeighborGraphIsDeterministic) {
    auto a = neighbor_graph(), b = neighbor_graph();
    for (std::size_t i = 0; i < 12; ++i) {
        EXPECT_EQ(a.nodes[i].label, b.nodes[i].label);
        EXPECT_EQ(a.nodes[i].edges, b.nodes[i].edges);
    }
}

TEST(Bundles, WordNormalizationMatchesGraphWalk) {
    auto g = neighbor_graph();
    std::size_t at = g.index_of(std::string("D"));
    at = g.nodes[at].edges[2]; // D1
    at = g.nodes[at].edges[1]; // Pi2
    at = g.nodes[at].edges[0]; // Pi1
    EXPECT_EQ(normalize_word("Pi1 Pi2 D1"), g.nodes[at].label);
    EXPECT_EQ(normalize_word(""), "D");
    EXPECT_EQ(normalize_word("Pi1 Pi2"), "Pi^2 D");
    EXPECT_EQ(normalize_word("Pi1 D1"), "Pi_K* D^*A");
    EXPECT_EQ(normalize_word("Pi2 D2"), "Pi_K* D^*B");
    EXPECT_EQ(normalize_word("D1 D1"), "D");
    EXPECT_THROW(normalize_word("Pi3"), Error);
}

TEST(Bundles, NeighborBundlesCarryData) {
    Rng rng(16);
    auto d = random_even(rng, 1, 2, 1);
    auto g = neighbors(d, 3);
    for (const auto& n : g.nodes) {
        ASSERT_TRUE(n.bundle.has_value()) << n.label;
        EXPECT_EQ(n.bundle->reversed(), (n.key.flip1 ? 1u : 0u) | (n.key.flip2 ? 2u : 0u));
    }
    EXPECT_EQ(*g.nodes[g.index_of(std::string("D^*A"))].bundle, dualize(d, 1, 3));
    auto s = neighbors(random_super(rng), 3);
    EXPECT_FALSE(s.nodes[s.index_of(std::string("D^*B"))].bundle.has_value());
}

TEST(Bundles, NFoldLawTermCounts) {
    auto t1 = MultipleBundle(1, base_x(), {{}, {E, E}});
    EXPECT_EQ(t1.law_term_count(1), 1u);
    auto t2 = make_double(base_x(), {E}, {E}, {E});
    EXPECT_EQ(t2.law_term_count(3), 2u);
    auto t3 = MultipleBundle(3, base_x(), {{}, {E}, {E}, {E}, {E}, {E}, {E}, {E}});
    EXPECT_EQ(t3.law_term_count(7), 5u);
    EXPECT_EQ(t3.law_term_count(3), 2u);
}

TEST(Bundles, NFoldTopLawDisplayedShape) {
    // v123 = v123' T + v1' v23' T + v2' v13' T + v3' v12' T + v1' v2' v3' T
    auto t3 = MultipleBundle(3, {}, {{}, {E}, {E}, {E}, {E}, {E}, {E}, {E}});
    std::set<std::string> seen;
    for (const auto& p : set_partitions(7)) {
        seen.insert(partition_label(p));
        for (auto& e : t3.block(p).entries) e = Poly::constant(t3.base_chart(), 1);
    }
    EXPECT_EQ(seen, (std::set<std::string>{"123", "1|23", "2|13", "3|12", "1|2|3"}));
    EXPECT_EQ(t3.law(7, 0), parse_poly("v123_1' + v1_1'*v23_1' + v2_1'*v13_1' + v3_1'*v12_1' + v1_1'*v2_1'*v3_1'",
                                       t3.chart()));
    auto r2 = t3.reverse(2);
    EXPECT_EQ(r2.law(7, 0),
              parse_poly("p123_1' + v1_1'*p23_1' + p2_1'*v13_1' + v3_1'*p12_1' + v1_1'*p2_1'*v3_1'", r2.chart()));
}

TEST(Bundles, NFoldN2ReducesToDoubleLaw) {
    auto d = super_sample();
    BlockEntries blocks;
    const auto& bc = d.base_chart();
    for (const auto& [p, b] : d.blocks()) blocks[p] = b.entries;
    auto n2 = nfold_bundle(2, base_x(), {{}, {E, O}, {E}, {E}}, blocks);
    EXPECT_EQ(n2, d);
    auto r = nfold_transition(n2);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.map.image(n2.var_index(3, 0, false)), P(n2, "z1'*(1+x) + 2*u1'*w1'"));
    (void)bc;
}

TEST(Bundles, NFoldMissingBlockIsShapeError) {
    BlockEntries blocks;
    blocks[Partition{1}] = {};
    try {
        nfold_bundle(1, base_x(), {{}, {E}}, blocks);
        FAIL();
    } catch (const ShapeError& e) {
        EXPECT_EQ(e.key(), "T[1]");
    }
    EXPECT_THROW(nfold_bundle(2, base_x(), {{}, {E}, {E}, {E}}, {}), ShapeError);
}

TEST(Bundles, NFoldValidityReport) {
    auto d = make_double(base_x(), {E}, {O}, {E});
    auto& k = d.block(Partition{3});
    k.entries[0] = Poly(d.base_chart());
    auto r = nfold_transition(d);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.problems.empty());
    auto bad = make_double(base_x(), {E}, {E}, {E});
    bad.block(mixed_partition).entries[0] = Poly::variable(bad.base_chart(), "x");
    EXPECT_TRUE(nfold_transition(bad).ok);
}

TEST(Bundles, InverseComposesToIdentity) {
    Rng rng(18);
    const unsigned degree = 3;
    for (int t = 0; t < 10; ++t) {
        auto d = t % 2 ? random_super(rng) : random_even(rng, 2, 1, 2);
        ChartMap f = d.transition_map();
        ChartMap g = d.inverse_map(degree);
        ChartMap fg = compose(f, g);
        const auto mask = d.base_mask();
        for (FamilyMask s = 1; s <= 3; ++s)
            for (std::size_t i = 0; i < d.rank(s); ++i) {
                const auto v = d.var_index(s, i, false);
                EXPECT_EQ(fg.image(v).truncate(mask, degree), Poly::variable(d.chart(), v));
            }
    }
}

TEST(Bundles, ReversionAndDualityAreFunctorial) {
    Rng rng(19);
    for (int t = 0; t < 10; ++t) {
        auto f = random_super(rng);
        auto g = random_bundle(rng, 2, f.base_chart()->vars(), f.families());
        for (unsigned r = 1; r <= 2; ++r) EXPECT_EQ(f.compose(g).reverse(r), f.reverse(r).compose(g.reverse(r)));
        auto fe = random_even(rng, 1, 2, 1, true, 0);
        auto ge = random_even(rng, 1, 2, 1, true, 0);
        for (unsigned s = 1; s <= 2; ++s) {
            EXPECT_EQ(dualize(fe.compose(ge), s, 2), dualize(fe, s, 2).compose(dualize(ge, s, 2)));
        }
    }
}

TEST(Bundles, LawsPreserveWeights) {
    Rng rng(20);
    for (int t = 0; t < 10; ++t) {
        auto d = random_super(rng);
        for (auto b : {d, d.reverse(1), d.reverse(2), d.reverse(1).reverse(2)}) {
            auto r = nfold_transition(b);
            EXPECT_TRUE(r.ok) << (r.problems.empty() ? "" : r.problems.front());
        }
        auto e = random_even(rng, 2, 2, 1);
        for (auto b : {dualize(e, 1, 3), dualize(e, 2, 3)}) EXPECT_TRUE(nfold_transition(b).ok);
    }
}
