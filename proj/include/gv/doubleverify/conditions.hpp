#pragma once

#include "gv/algebroid/prolongation.hpp"
#include "gv/doubleverify/families.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gv {

struct Residual {
    std::string family;
    std::string index;
    Poly value;
};

/// Engine family against its printed counterpart on one instance.
struct PrintedStatus {
    std::string family;  // engine family
    std::string printed; // printed family it is compared with
    Scalar factor;
    bool exact;             // the printed form needs no correction
    bool agrees;            // engine = factor * printed
    bool agrees_corrected;  // engine = factor * printed with the flipped terms negated
    bool engine_zero;
    bool printed_zero;
    std::vector<std::string> flipped;
};

struct ConditionReport {
    std::string condition;
    std::vector<Residual> residuals; // nonzero only
    std::vector<PrintedStatus> printed;
    std::vector<std::string> notes;
    std::map<std::string, FamilyValues> families; // engine values by family
    bool pass() const { return residuals.empty(); }
};

/// engine = factor * (printed family with the `flipped` terms negated).
struct Correspondence {
    std::string engine;  // commutator, leibniz, related
    std::string family;  // engine family
    std::string printed; // printed family
    Scalar factor;
    std::vector<std::string> flipped;
    bool representable = true; // false: no combination of the printed terms matches
    bool exact() const { return representable && flipped.empty(); }
    friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

/// from-engine family = factor * to-engine family, with to-tuple[k] = from-tuple[permutation[k]].
struct EngineLink {
    std::string from_engine, from_family, to_engine, to_family;
    Scalar factor;
    std::vector<std::size_t> permutation;
    friend bool operator==(const EngineLink&, const EngineLink&) = default;
};

/// Alternation weight for the printed anchor families.
inline Scalar printed_alternation() { return Scalar(1, 2); }

inline const std::vector<Correspondence>& frozen_correspondences();
inline const std::vector<EngineLink>& frozen_links();

inline std::optional<Correspondence> find_correspondence(const std::string& engine, const std::string& family) {
    for (const auto& c : frozen_correspondences())
        if (c.engine == engine && c.family == family) return c;
    return std::nullopt;
}

inline Correspondence correspondence_from_fit(const std::string& engine, const std::string& family,
                                              const std::string& printed, const TermFitter::Result& fit) {
    Correspondence c{engine, family, printed, Scalar(0), {}, false};
    if (!fit.consistent || fit.coefficients.empty()) return c;
    Scalar size = 0;
    int positive = 0, negative = 0;
    for (const auto& x : fit.coefficients) {
        if (!x || *x == 0) return c;
        if (size == 0) size = abs(*x);
        if (abs(*x) != size) return c;
        (*x > 0 ? positive : negative)++;
    }
    const int sign = positive > negative || (positive == negative && *fit.coefficients[0] > 0) ? 1 : -1;
    c.factor = sign * size;
    c.representable = true;
    for (std::size_t t = 0; t < fit.labels.size(); ++t)
        if ((*fit.coefficients[t] > 0 ? 1 : -1) != sign) c.flipped.push_back(fit.labels[t]);
    return c;
}

namespace detail {

inline std::vector<int> kind_map(const DoubleShape& s, const ChartPtr& chart) {
    std::vector<int> out(chart->size(), -1);
    const std::size_t n = s.base.size(), ra = s.a.size(), rb = s.b.size();
    for (std::size_t v = n; v < chart->size(); ++v) out[v] = v < n + ra ? 0 : (v < n + ra + rb ? 1 : 2);
    return out;
}

inline void push_family(ConditionReport& r, FamilyValues fv) {
    const auto& info = family_info(fv.family.substr(0, fv.family.find('-')));
    for (std::size_t t = 0; t < fv.values.size(); ++t)
        if (!fv.values[t].is_zero()) r.residuals.push_back({fv.family, index_label(info, fv.tuples[t]), fv.values[t]});
    r.families.emplace(fv.family, std::move(fv));
}

/// Terms of a residual outside the expected signatures.
inline void push_other(ConditionReport& r, const std::string& family, const std::string& label, const Poly& p,
                       const std::vector<int>& kinds, const std::vector<KindSignature>& expected) {
    for (const auto& [sig, part] : split_by_kind(p, kinds)) {
        bool known = false;
        for (const auto& e : expected) known = known || e == sig;
        if (!known) r.residuals.push_back({family, label + "{" + signature_label(sig) + "}", part});
    }
}

inline void compare_printed(ConditionReport& r, const std::string& engine, const DoubleStructureFunctions& sf) {
    if (!sf.shape().is_even()) {
        r.notes.push_back("printed families are stated for purely even data; only the engine residuals apply");
        return;
    }
    const PrintedFamilies printed(sf, printed_alternation());
    for (const auto& [name, values] : r.families) {
        auto corr = find_correspondence(engine, name);
        if (!corr) continue;
        PrintedStatus st{name, corr->printed, corr->factor, corr->exact(), true, corr->representable,
                         values.all_zero(), true, corr->flipped};
        for (std::size_t t = 0; t < values.tuples.size(); ++t) {
            Poly plain(sf.charts().base), fixed(sf.charts().base);
            for (const auto& term : printed.terms(corr->printed, values.tuples[t])) {
                plain += term.value;
                const bool flip =
                    std::find(corr->flipped.begin(), corr->flipped.end(), term.label) != corr->flipped.end();
                fixed += flip ? -term.value : term.value;
            }
            st.printed_zero = st.printed_zero && plain.is_zero();
            st.agrees = st.agrees && values.values[t] == corr->factor * plain;
            st.agrees_corrected = st.agrees_corrected && values.values[t] == corr->factor * fixed;
        }
        r.printed.push_back(std::move(st));
    }
}

} // namespace detail

/// Tensors of Q1 carrying one core index change sign (z -> -z on the Q1 side).
/// II, III and the printed families read the data in this form.
inline DoubleStructureFunctions core_reidentified(const DoubleStructureFunctions& sf) {
    DoubleStructureFunctions out = sf;
    for (const auto& key : tensor_keys()) {
        if (key.field != 1) continue;
        int cores = key.upper == IndexKind::k;
        for (auto k : key.lower) cores += k == IndexKind::k;
        if (cores % 2 == 0) continue;
        Tensor& t = out.tensor(key.name);
        for (std::size_t f = 0; f < t.size(); ++f) t.flat(f) = -t.flat(f);
    }
    return out;
}

/// Condition I from assembled fields: Q1^Pi of weight (1,0), Q2^Pi of weight
/// (0,1), both tangent to the zero sections with restrictions Q1^(0), Q2^(0).
inline ConditionReport condition_I(const DoubleShape& s, const DoubleCharts& c, const DoubleFields& f) {
    ConditionReport r{"I", {}, {}, {}, {}};
    auto weight_scan = [&](const Derivation& q, const Weight& w, const std::string& name) {
        const ChartPtr& ch = q.chart();
        for (std::size_t v = 0; v < ch->size(); ++v) {
            const Weight want = ch->var(v).weight + w;
            Poly bad(ch);
            for (const auto& [m, coef] : q[v].terms())
                if (detail::monomial_weight(*ch, m) != want) bad.add_term(m, coef);
            if (!bad.is_zero()) r.residuals.push_back({"weight " + name, ch->var(v).name, bad});
        }
    };
    weight_scan(f.q1pi, {1, 0}, "Q1^Pi");
    weight_scan(f.q2pi, {0, 1}, "Q2^Pi");
    auto restriction = [&](const Derivation& q, const Derivation& side, int drop_kind, const std::string& name) {
        const ChartPtr& ch = q.chart();
        const auto kinds = detail::kind_map(s, ch);
        std::vector<bool> mask(ch->size(), false);
        for (std::size_t v = 0; v < ch->size(); ++v) mask[v] = kinds[v] == drop_kind || kinds[v] == 2;
        for (std::size_t v = 0; v < ch->size(); ++v) {
            const Poly on_zero = q[v].truncate(mask, 0);
            if (mask[v]) {
                if (!on_zero.is_zero()) r.residuals.push_back({"tangency " + name, ch->var(v).name, on_zero});
                continue;
            }
            const std::size_t w = side.chart()->index_of(ch->var(v).name);
            Poly d = embed(on_zero, side.chart()) - side[w];
            if (!d.is_zero()) r.residuals.push_back({"restriction " + name, ch->var(v).name, d});
        }
    };
    restriction(f.q1pi, f.q1_0, 1, "Q1^(0)");
    restriction(f.q2pi, f.q2_0, 0, "Q2^(0)");
    (void)c;
    return r;
}

inline ConditionReport condition_I(const DoubleStructureFunctions& sf) {
    return condition_I(sf.shape(), sf.charts(), build_fields(sf));
}

/// Anchor maps of Pi_A D -> T(Pi B) and Pi_B D -> T(Pi A).
struct AnchorMaps {
    TangentChart tb, ta;
    ChartMap to_tb, to_ta;
};

inline AnchorMaps anchor_maps(const DoubleStructureFunctions& sf) {
    const auto& c = sf.charts();
    const auto& s = sf.shape();
    const std::size_t n = s.base.size();
    TangentChart tb = tangent_chart(c.pb), ta = tangent_chart(c.pa);
    ChartMap to_tb(tb.chart, c.pia), to_ta(ta.chart, c.pib);
    const auto la = kind_layout(s);
    auto var = [](const ChartPtr& ch, std::size_t v) { return Poly::variable(ch, v); };
    auto on = [](const Poly& p, const ChartPtr& ch) { return embed(p, ch); };
    // dot x^a = u^i Q_i^a, dot eta^beta = u^i eta^alpha Q_alpha,i^beta + theta^mu Q_mu^beta
    for (std::size_t a = 0; a < n; ++a) {
        Poly img(c.pia);
        for (std::size_t i = 0; i < s.a.size(); ++i)
            img += var(c.pia, la.index(IndexKind::a, i)) * on(sf.get("Qia", {i, a}), c.pia);
        to_tb.set(tb.dot(a), img);
    }
    for (std::size_t be = 0; be < s.b.size(); ++be) {
        Poly img(c.pia);
        for (std::size_t i = 0; i < s.a.size(); ++i)
            for (std::size_t al = 0; al < s.b.size(); ++al)
                img += var(c.pia, la.index(IndexKind::a, i)) * var(c.pia, la.index(IndexKind::b, al)) *
                       on(sf.get("QaiB", {al, i, be}), c.pia);
        for (std::size_t mu = 0; mu < s.k.size(); ++mu)
            img += var(c.pia, la.index(IndexKind::k, mu)) * on(sf.get("QmuB", {mu, be}), c.pia);
        to_tb.set(tb.dot(n + be), img);
    }
    // dot x^a = w^alpha Q_alpha^a, dot xi^j = w^alpha xi^i Q_i,alpha^j + theta^mu Q_mu^j
    for (std::size_t a = 0; a < n; ++a) {
        Poly img(c.pib);
        for (std::size_t al = 0; al < s.b.size(); ++al)
            img += var(c.pib, la.index(IndexKind::b, al)) * on(sf.get("QAa", {al, a}), c.pib);
        to_ta.set(ta.dot(a), img);
    }
    for (std::size_t j = 0; j < s.a.size(); ++j) {
        Poly img(c.pib);
        for (std::size_t al = 0; al < s.b.size(); ++al)
            for (std::size_t i = 0; i < s.a.size(); ++i)
                img += var(c.pib, la.index(IndexKind::b, al)) * var(c.pib, la.index(IndexKind::a, i)) *
                       on(sf.get("QiAj", {i, al, j}), c.pib);
        for (std::size_t mu = 0; mu < s.k.size(); ++mu)
            img += var(c.pib, la.index(IndexKind::k, mu)) * on(sf.get("Qmuj", {mu, j}), c.pib);
        to_ta.set(ta.dot(n + j), img);
    }
    return {tb, ta, to_tb, to_ta};
}

/// Condition II: the anchor maps relate Q_DA with the prolongation of Q_BM,
/// and Q_DB with the prolongation of Q_AM.
inline ConditionReport condition_II(const DoubleStructureFunctions& sf_in) {
    const DoubleStructureFunctions sf = core_reidentified(normalized(sf_in));
    const auto& s = sf.shape();
    const auto& c = sf.charts();
    const auto f = build_fields(sf);
    const auto maps = anchor_maps(sf);
    const auto la = kind_layout(s);
    const std::size_t n = s.base.size();
    ConditionReport r{"II", {}, {}, {}, {}};

    const Derivation hat_b = complete_lift(f.q2_0, maps.tb);
    const Derivation hat_a = complete_lift(f.q1_0, maps.ta);
    std::vector<Poly> res_b(maps.tb.chart->size(), Poly(c.pia)), res_a(maps.ta.chart->size(), Poly(c.pib));
    for (const auto& x : related(maps.to_tb, f.q2pi, hat_b).residuals) res_b[x.coordinate] = x.residual;
    for (const auto& x : related(maps.to_ta, f.q1pi, hat_a).residuals) res_a[x.coordinate] = x.residual;

    using K = IndexKind;
    auto ix = [&](K k, std::size_t r_) { return la.index(k, r_); };
    auto coef = [&](const Poly& p, std::vector<std::size_t> vars) { return coefficient(p, vars, c.base); };
    using T = std::vector<std::size_t>;
    detail::push_family(r, tabulate("anchor1", s, [&](const T& t) { return coef(res_b[maps.tb.dot(t[1])], {ix(K::k, t[0])}); }));
    detail::push_family(r, tabulate("anchor2", s, [&](const T& t) {
                            return coef(res_b[maps.tb.dot(t[2])], {ix(K::a, t[1]), ix(K::b, t[0])});
                        }));
    detail::push_family(r, tabulate("anchor3", s, [&](const T& t) {
                            return coef(res_b[maps.tb.dot(n + t[3])], {ix(K::a, t[2]), ix(K::b, t[0]), ix(K::b, t[1])});
                        }));
    detail::push_family(r, tabulate("anchor4", s, [&](const T& t) {
                            return coef(res_b[maps.tb.dot(n + t[2])], {ix(K::b, t[1]), ix(K::k, t[0])});
                        }));
    {
        FamilyValues v = tabulate("anchor1", s, [&](const T& t) { return coef(res_a[maps.ta.dot(t[1])], {ix(K::k, t[0])}); });
        v.family = "anchor1-swap";
        detail::push_family(r, std::move(v));
        FamilyValues w = tabulate("anchor2", s, [&](const T& t) {
            return coef(res_a[maps.ta.dot(t[2])], {ix(K::b, t[0]), ix(K::a, t[1])});
        });
        w.family = "anchor2-swap";
        detail::push_family(r, std::move(w));
    }
    detail::push_family(r, tabulate("anchor5", s, [&](const T& t) {
                            return coef(res_a[maps.ta.dot(n + t[3])], {ix(K::b, t[2]), ix(K::a, t[0]), ix(K::a, t[1])});
                        }));
    detail::push_family(r, tabulate("anchor6", s, [&](const T& t) {
                            return coef(res_a[maps.ta.dot(n + t[2])], {ix(K::a, t[1]), ix(K::k, t[0])});
                        }));
    // anything outside these monomial types
    const auto kinds_b = detail::kind_map(s, c.pia), kinds_a = detail::kind_map(s, c.pib);
    for (std::size_t g = 0; g < res_b.size(); ++g) {
        std::vector<KindSignature> expected;
        if (g >= maps.tb.dot(0) && g < maps.tb.dot(n)) expected = {{0, 0, 1}, {1, 1, 0}};
        if (g >= maps.tb.dot(n)) expected = {{1, 2, 0}, {0, 1, 1}};
        detail::push_other(r, "other", maps.tb.chart->var(g).name, res_b[g], kinds_b, expected);
    }
    for (std::size_t g = 0; g < res_a.size(); ++g) {
        std::vector<KindSignature> expected;
        if (g >= maps.ta.dot(0) && g < maps.ta.dot(n)) expected = {{0, 0, 1}, {1, 1, 0}};
        if (g >= maps.ta.dot(n)) expected = {{2, 1, 0}, {1, 0, 1}};
        detail::push_other(r, "other-swap", maps.ta.chart->var(g).name, res_a[g], kinds_a, expected);
    }
    detail::compare_printed(r, "related", sf);
    return r;
}

/// Field on Pi_K* D^{*B} (coordinates x, xi_i, eta, z_mu).
inline Derivation dual_field(const DoubleStructureFunctions& sf) {
    const auto& s = sf.shape();
    const ChartPtr& ch = sf.charts().dual;
    const auto la = kind_layout(s);
    auto V = [&](IndexKind k, std::size_t r) { return Poly::variable(ch, la.index(k, r)); };
    auto E = [&](const char* key, std::vector<std::size_t> idx) { return embed(sf.get(key, idx), ch); };
    const std::size_t n = s.base.size(), ra = s.a.size(), rb = s.b.size(), rk = s.k.size();
    const Scalar half(1, 2);
    Derivation q(ch);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t al = 0; al < rb; ++al) q.add(a, V(IndexKind::b, al) * E("QAa", {al, a}));
    for (std::size_t i = 0; i < ra; ++i) {
        Poly c(ch);
        for (std::size_t al = 0; al < rb; ++al) {
            for (std::size_t j = 0; j < ra; ++j) c += V(IndexKind::b, al) * E("QiAj", {i, al, j}) * V(IndexKind::a, j);
            for (std::size_t be = 0; be < rb; ++be)
                for (std::size_t la_ = 0; la_ < rk; ++la_)
                    c += half * (V(IndexKind::b, al) * V(IndexKind::b, be) * E("QibaL", {i, be, al, la_}) *
                                 V(IndexKind::k, la_));
        }
        q.add(la.index(IndexKind::a, i), -c);
    }
    for (std::size_t ga = 0; ga < rb; ++ga)
        for (std::size_t al = 0; al < rb; ++al)
            for (std::size_t be = 0; be < rb; ++be)
                q.add(la.index(IndexKind::b, ga),
                      half * (V(IndexKind::b, al) * V(IndexKind::b, be) * E("QbaG", {be, al, ga})));
    for (std::size_t mu = 0; mu < rk; ++mu) {
        Poly c(ch);
        for (std::size_t j = 0; j < ra; ++j) c -= E("Qmuj", {mu, j}) * V(IndexKind::a, j);
        for (std::size_t al = 0; al < rb; ++al)
            for (std::size_t la_ = 0; la_ < rk; ++la_)
                c += V(IndexKind::b, al) * E("QmuaL", {mu, al, la_}) * V(IndexKind::k, la_);
        q.add(la.index(IndexKind::k, mu), -c);
    }
    return q;
}

/// Odd bracket on Pi_K* D^{*B} induced by the structure of D -> B.
inline BracketTable dual_schouten(const DoubleStructureFunctions& sf) {
    const auto& s = sf.shape();
    const ChartPtr& ch = sf.charts().dual;
    const auto la = kind_layout(s);
    auto I = [&](IndexKind k, std::size_t r) { return la.index(k, r); };
    auto V = [&](IndexKind k, std::size_t r) { return Poly::variable(ch, I(k, r)); };
    auto E = [&](const char* key, std::vector<std::size_t> idx) { return embed(sf.get(key, idx), ch); };
    const std::size_t n = s.base.size(), ra = s.a.size(), rb = s.b.size(), rk = s.k.size();
    BracketTable t(ch, Parity::odd);
    using K = IndexKind;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < ra; ++i) t.set(I(K::base, a), I(K::a, i), -E("Qia", {i, a}));
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = i; j < ra; ++j) {
            Poly e(ch);
            for (std::size_t l = 0; l < ra; ++l) e += E("Qjik", {i, j, l}) * V(K::a, l);
            for (std::size_t al = 0; al < rb; ++al)
                for (std::size_t lam = 0; lam < rk; ++lam) e += V(K::b, al) * E("QajiL", {al, i, j, lam}) * V(K::k, lam);
            t.set(I(K::a, i), I(K::a, j), e);
        }
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t al = 0; al < rb; ++al) {
            Poly e(ch);
            for (std::size_t be = 0; be < rb; ++be) e += V(K::b, be) * E("QaiB", {be, i, al});
            t.set(I(K::a, i), I(K::b, al), e);
        }
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t mu = 0; mu < rk; ++mu) {
            Poly e(ch);
            for (std::size_t lam = 0; lam < rk; ++lam) e -= E("QmuiL", {mu, i, lam}) * V(K::k, lam);
            t.set(I(K::a, i), I(K::k, mu), e);
        }
    for (std::size_t al = 0; al < rb; ++al)
        for (std::size_t mu = 0; mu < rk; ++mu) t.set(I(K::b, al), I(K::k, mu), -E("QmuB", {mu, al}));
    return t;
}

/// Q{v,w} - {Qv, w} - (-1)^{Q(v+eps)} {v, Qw} on one ordered coordinate pair.
inline Poly leibniz_pair(const Derivation& q, const BracketTable& t, std::size_t v, std::size_t w) {
    const ChartPtr& ch = t.chart();
    const Parity pq = q.is_zero() ? Parity::odd : q.homogeneous_parity("derivation");
    Poly r = apply(q, t.entry(v, w)) - bracket(t, q[v], Poly::variable(ch, w));
    const Poly tail = bracket(t, Poly::variable(ch, v), q[w]);
    return koszul(pq, ch->parity(v) + t.parity()) > 0 ? r - tail : r + tail;
}

/// Condition III: the dual field is a derivation of the Schouten bracket, and
/// it projects to Q_BM.
inline ConditionReport condition_III(const DoubleStructureFunctions& sf_in) {
    const DoubleStructureFunctions sf = core_reidentified(normalized(sf_in));
    const auto& s = sf.shape();
    const auto& c = sf.charts();
    const auto f = build_fields(sf);
    const Derivation q = dual_field(sf);
    const BracketTable table = dual_schouten(sf);
    const auto la = kind_layout(s);
    ConditionReport r{"III", {}, {}, {}, {}};
    using K = IndexKind;
    using T = std::vector<std::size_t>;
    auto ix = [&](K k, std::size_t r_) { return la.index(k, r_); };
    std::map<std::pair<std::size_t, std::size_t>, Poly> cache;
    auto res = [&](std::size_t v, std::size_t w) -> const Poly& {
        auto it = cache.find({v, w});
        if (it == cache.end()) it = cache.emplace(std::make_pair(v, w), leibniz_pair(q, table, v, w)).first;
        return it->second;
    };
    auto coef = [&](const Poly& p, std::vector<std::size_t> vars) { return coefficient(p, vars, c.base); };
    detail::push_family(r, tabulate("bialg1", s, [&](const T& t) { return coef(res(ix(K::base, t[1]), ix(K::k, t[0])), {}); }));
    detail::push_family(r, tabulate("bialg2", s, [&](const T& t) {
                            return coef(res(ix(K::k, t[0]), ix(K::k, t[1])), {ix(K::k, t[2])});
                        }));
    detail::push_family(r, tabulate("bialg3", s, [&](const T& t) {
                            return coef(res(ix(K::base, t[2]), ix(K::a, t[1])), {ix(K::b, t[0])});
                        }));
    detail::push_family(r, tabulate("bialg4", s, [&](const T& t) {
                            return coef(res(ix(K::a, t[1]), ix(K::k, t[0])), {ix(K::a, t[2])});
                        }));
    detail::push_family(r, tabulate("bialg5", s, [&](const T& t) {
                            return coef(res(ix(K::a, t[2]), ix(K::k, t[0])), {ix(K::b, t[1]), ix(K::k, t[3])});
                        }));
    detail::push_family(r, tabulate("bialg6", s, [&](const T& t) {
                            return coef(res(ix(K::b, t[2]), ix(K::k, t[0])), {ix(K::b, t[1])});
                        }));
    detail::push_family(r, tabulate("bialg7", s, [&](const T& t) {
                            return coef(res(ix(K::a, t[0]), ix(K::a, t[1])), {ix(K::b, t[2]), ix(K::a, t[3])});
                        }));
    detail::push_family(r, tabulate("bialg8", s, [&](const T& t) {
                            return coef(res(ix(K::a, t[0]), ix(K::a, t[1])),
                                        {ix(K::b, t[2]), ix(K::b, t[3]), ix(K::k, t[4])});
                        }));
    detail::push_family(r, tabulate("bialg9", s, [&](const T& t) {
                            return coef(res(ix(K::a, t[0]), ix(K::b, t[3])), {ix(K::b, t[1]), ix(K::b, t[2])});
                        }));
    // every coordinate pair, including those with a vanishing bracket
    const auto kinds = detail::kind_map(s, c.dual);
    for (const auto& pr : leibniz_residuals(q, table)) {
        const int kv = kinds[pr.first], kw = kinds[pr.second];
        std::vector<KindSignature> expected;
        if (kv == -1 && kw == 0) expected = {{0, 1, 0}};
        if (kv == -1 && kw == 2) expected = {{0, 0, 0}};
        if (kv == 0 && kw == 0) expected = {{1, 1, 0}, {0, 2, 1}};
        if (kv == 0 && kw == 1) expected = {{0, 2, 0}};
        if (kv == 0 && kw == 2) expected = {{1, 0, 0}, {0, 1, 1}};
        if (kv == 1 && kw == 2) expected = {{0, 1, 0}};
        if (kv == 2 && kw == 2) expected = {{0, 0, 1}};
        detail::push_other(r, "other",
                           "{" + c.dual->var(pr.first).name + "," + c.dual->var(pr.second).name + "}", pr.residual,
                           kinds, expected);
    }
    // projection to Pi B
    for (const auto& x : related(ChartMap(c.pb, c.dual), q, f.q2_0).residuals)
        r.residuals.push_back({"projection", c.pb->var(x.coordinate).name, x.residual});
    detail::compare_printed(r, "leibniz", sf);
    if (!s.is_even())
        r.notes.push_back("the dual field and bracket carry extra signs for super data that are not displayed; "
                          "this report uses the even-case formulas");
    return r;
}

/// [Q1,Q2] = 0 together with [Q1,Q1] = 0 and [Q2,Q2] = 0.
inline ConditionReport commutativity(const DoubleStructureFunctions& sf_in) {
    const DoubleStructureFunctions sf = normalized(sf_in);
    const auto& s = sf.shape();
    const auto& c = sf.charts();
    const auto f = build_fields(sf);
    const auto la = kind_layout(s);
    ConditionReport r{"commute", {}, {}, {}, {}};
    const Derivation x = commutator(f.q1, f.q2);
    using K = IndexKind;
    using T = std::vector<std::size_t>;
    auto ix = [&](K k, std::size_t r_) { return la.index(k, r_); };
    auto coef = [&](std::size_t v, std::vector<std::size_t> vars) { return coefficient(x[v], vars, c.base); };
    detail::push_family(r, tabulate("bialg1", s, [&](const T& t) { return coef(ix(K::base, t[1]), {ix(K::k, t[0])}); }));
    detail::push_family(r, tabulate("bialg2", s, [&](const T& t) {
                            return coef(ix(K::k, t[2]), {ix(K::k, t[0]), ix(K::k, t[1])});
                        }));
    detail::push_family(r, tabulate("bialg3", s, [&](const T& t) {
                            return coef(ix(K::base, t[2]), {ix(K::a, t[1]), ix(K::b, t[0])});
                        }));
    detail::push_family(r, tabulate("bialg4", s, [&](const T& t) {
                            return coef(ix(K::a, t[2]), {ix(K::a, t[1]), ix(K::k, t[0])});
                        }));
    detail::push_family(r, tabulate("bialg5", s, [&](const T& t) {
                            return coef(ix(K::k, t[3]), {ix(K::a, t[2]), ix(K::b, t[1]), ix(K::k, t[0])});
                        }));
    detail::push_family(r, tabulate("bialg6", s, [&](const T& t) {
                            return coef(ix(K::b, t[2]), {ix(K::b, t[1]), ix(K::k, t[0])});
                        }));
    detail::push_family(r, tabulate("bialg7", s, [&](const T& t) {
                            return coef(ix(K::a, t[3]), {ix(K::a, t[0]), ix(K::a, t[1]), ix(K::b, t[2])});
                        }));
    detail::push_family(r, tabulate("bialg8", s, [&](const T& t) {
                            return coef(ix(K::k, t[4]), {ix(K::a, t[0]), ix(K::a, t[1]), ix(K::b, t[2]), ix(K::b, t[3])});
                        }));
    detail::push_family(r, tabulate("bialg9", s, [&](const T& t) {
                            return coef(ix(K::b, t[3]), {ix(K::a, t[0]), ix(K::b, t[1]), ix(K::b, t[2])});
                        }));
    const auto kinds = detail::kind_map(s, c.pi2);
    for (std::size_t v = 0; v < c.pi2->size(); ++v) {
        std::vector<KindSignature> expected;
        switch (kinds[v]) {
        case -1: expected = {{0, 0, 1}, {1, 1, 0}}; break;
        case 0: expected = {{1, 0, 1}, {2, 1, 0}}; break;
        case 1: expected = {{0, 1, 1}, {1, 2, 0}}; break;
        default: expected = {{0, 0, 2}, {1, 1, 1}, {2, 2, 0}};
        }
        detail::push_other(r, "other", c.pi2->var(v).name, x[v], kinds, expected);
    }
    const Scalar half(1, 2);
    for (const auto& [q, name] : {std::pair{&f.q1, "Q1^2"}, std::pair{&f.q2, "Q2^2"}}) {
        Derivation sq = commutator(*q, *q);
        sq *= half;
        for (std::size_t v = 0; v < sq.size(); ++v)
            if (!sq[v].is_zero()) r.residuals.push_back({name, c.pi2->var(v).name, sq[v]});
    }
    detail::compare_printed(r, "commutator", core_reidentified(sf));
    return r;
}

struct EquivalenceReport {
    ConditionReport I, II, III, commute;
    bool even = true;
    bool homological() const {
        for (const auto& r : commute.residuals)
            if (r.family == "Q1^2" || r.family == "Q2^2") return false;
        return true;
    }
    bool mixed_bracket_vanishes() const {
        for (const auto& r : commute.residuals)
            if (r.family != "Q1^2" && r.family != "Q2^2") return false;
        return true;
    }
    bool III_implies_II() const { return !III.pass() || II.pass(); }
    bool III_iff_commute() const { return III.pass() == mixed_bracket_vanishes(); }
    bool consistent() const { return III_implies_II() && III_iff_commute(); }
};

inline EquivalenceReport equivalence_report(const DoubleStructureFunctions& sf) {
    return {condition_I(sf), condition_II(sf), condition_III(sf), commutativity(sf), sf.shape().is_even()};
}

namespace detail {

inline std::string printed_name(const std::string& family) { return family.substr(0, family.find('-')); }

inline std::vector<std::pair<std::string, ConditionReport>> engine_reports(const DoubleStructureFunctions& sf) {
    return {{"commutator", commutativity(sf)}, {"leibniz", condition_III(sf)}, {"related", condition_II(sf)}};
}

} // namespace detail

/// Fits every engine family against its printed family over even samples.
inline std::vector<Correspondence> discover_correspondences(const std::vector<DoubleStructureFunctions>& samples) {
    std::map<std::pair<std::string, std::string>, TermFitter> fits;
    for (const auto& sf : samples) {
        if (!sf.shape().is_even()) continue;
        const PrintedFamilies printed(core_reidentified(normalized(sf)), printed_alternation());
        for (const auto& [engine, report] : detail::engine_reports(sf))
            for (const auto& [name, values] : report.families) {
                auto it = fits.try_emplace({engine, name}, detail::printed_name(name)).first;
                it->second.add(values, printed);
            }
    }
    std::vector<Correspondence> out;
    for (const auto& [key, fit] : fits)
        out.push_back(correspondence_from_fit(key.first, key.second, detail::printed_name(key.second), fit.solve()));
    return out;
}

/// Recomputes the factor of each frozen link; 0 when no single factor fits.
inline std::vector<EngineLink> discover_links(const std::vector<DoubleStructureFunctions>& samples) {
    std::vector<EngineLink> out = frozen_links();
    std::vector<std::optional<Scalar>> factor(out.size());
    std::vector<bool> ok(out.size(), true);
    for (const auto& sf : samples) {
        std::map<std::string, ConditionReport> reports;
        for (auto& [engine, report] : detail::engine_reports(sf)) reports.emplace(engine, std::move(report));
        for (std::size_t l = 0; l < out.size(); ++l) {
            const auto& link = out[l];
            const FamilyValues& from = reports.at(link.from_engine).families.at(link.from_family);
            const FamilyValues& to = reports.at(link.to_engine).families.at(link.to_family);
            FamilyValues moved = from;
            for (std::size_t t = 0; t < from.tuples.size(); ++t) {
                std::vector<std::size_t> target;
                for (auto k : link.permutation) target.push_back(from.tuples[t][k]);
                for (std::size_t u = 0; u < to.tuples.size(); ++u)
                    if (to.tuples[u] == target) moved.values[t] = to.values[u];
            }
            const FactorMatch m = match_factor(from, moved, factor[l]);
            if (m.determined && !factor[l] && !moved.all_zero()) factor[l] = m.factor;
            ok[l] = ok[l] && m.agrees;
        }
    }
    for (std::size_t l = 0; l < out.size(); ++l) out[l].factor = ok[l] && factor[l] ? *factor[l] : Scalar(0);
    return out;
}

inline const std::vector<Correspondence>& frozen_correspondences() {
    static const std::vector<Correspondence> table = {
        {"commutator", "bialg1", "bialg1", Scalar(-1), {}, true},
        {"commutator", "bialg2", "bialg2", Scalar(1), {"N.S2", "N.S2'"}, true},
        {"commutator", "bialg3", "bialg3", Scalar(1), {"B.dA"}, true},
        {"commutator", "bialg4", "bialg4", Scalar(1), {"S1.Nu"}, true},
        {"commutator", "bialg5", "bialg5", Scalar(-1), {"Nu.R1", "A.dS2", "B.dS1"}, true},
        {"commutator", "bialg6", "bialg6", Scalar(1), {}, true},
        {"commutator", "bialg7", "bialg7", Scalar(-1), {"B.dC1", "R1.Nu"}, true},
        {"commutator", "bialg8", "bialg8", Scalar(0), {}, false},
        {"commutator", "bialg9", "bialg9", Scalar(1), {"M.P(b)", "M.P(a)", "R2.N", "A.dC2"}, true},
        {"leibniz", "bialg1", "bialg1", Scalar(1), {}, true},
        {"leibniz", "bialg2", "bialg2", Scalar(1), {"N.S2", "N.S2'"}, true},
        {"leibniz", "bialg3", "bialg3", Scalar(1), {"B.dA"}, true},
        {"leibniz", "bialg4", "bialg4", Scalar(-1), {"S1.Nu"}, true},
        {"leibniz", "bialg5", "bialg5", Scalar(-1), {"Nu.R1", "A.dS2", "B.dS1"}, true},
        {"leibniz", "bialg6", "bialg6", Scalar(1), {}, true},
        {"leibniz", "bialg7", "bialg7", Scalar(1), {"B.dC1", "R1.Nu"}, true},
        {"leibniz", "bialg8", "bialg8", Scalar(0), {}, false},
        {"leibniz", "bialg9", "bialg9", Scalar(-1), {"M.P(b)", "M.P(a)", "R2.N", "A.dC2"}, true},
        {"related", "anchor1", "anchor1", Scalar(-1), {}, true},
        {"related", "anchor1-swap", "anchor1", Scalar(1), {}, true},
        {"related", "anchor2", "anchor2", Scalar(-1), {}, true},
        {"related", "anchor2-swap", "anchor2", Scalar(1), {}, true},
        {"related", "anchor3", "anchor3", Scalar(-2), {}, true},
        {"related", "anchor4", "anchor4", Scalar(1), {}, true},
        {"related", "anchor5", "anchor5", Scalar(-2), {}, true},
        {"related", "anchor6", "anchor6", Scalar(1), {}, true},
    };
    return table;
}

inline const std::vector<EngineLink>& frozen_links() {
    static const std::vector<EngineLink> table = {
        {"related", "anchor1", "commutator", "bialg1", Scalar(1), {0, 1}},
        {"related", "anchor1-swap", "commutator", "bialg1", Scalar(-1), {0, 1}},
        {"related", "anchor2", "commutator", "bialg3", Scalar(-1), {0, 1, 2}},
        {"related", "anchor2-swap", "commutator", "bialg3", Scalar(1), {0, 1, 2}},
        {"related", "anchor3", "commutator", "bialg9", Scalar(-1), {2, 0, 1, 3}},
        {"related", "anchor4", "commutator", "bialg6", Scalar(-1), {0, 1, 2}},
        {"related", "anchor5", "commutator", "bialg7", Scalar(-1), {0, 1, 2, 3}},
        {"related", "anchor6", "commutator", "bialg4", Scalar(1), {0, 1, 2}},
        {"leibniz", "bialg1", "commutator", "bialg1", Scalar(-1), {0, 1}},
        {"leibniz", "bialg2", "commutator", "bialg2", Scalar(1), {0, 1, 2}},
        {"leibniz", "bialg3", "commutator", "bialg3", Scalar(1), {0, 1, 2}},
        {"leibniz", "bialg4", "commutator", "bialg4", Scalar(-1), {0, 1, 2}},
        {"leibniz", "bialg5", "commutator", "bialg5", Scalar(1), {0, 1, 2, 3}},
        {"leibniz", "bialg6", "commutator", "bialg6", Scalar(1), {0, 1, 2}},
        {"leibniz", "bialg7", "commutator", "bialg7", Scalar(-1), {0, 1, 2, 3}},
        {"leibniz", "bialg8", "commutator", "bialg8", Scalar(1), {0, 1, 2, 3, 4}},
        {"leibniz", "bialg9", "commutator", "bialg9", Scalar(-1), {0, 1, 2, 3}},
    };
    return table;
}

} // namespace gv
