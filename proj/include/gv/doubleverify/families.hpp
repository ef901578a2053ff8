#pragma once

#include "gv/doubleverify/structure.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gv {

/// Equation family: free indices (lower ones, then the upper one).
struct FamilyInfo {
    std::string name;
    std::vector<IndexKind> kinds;
    std::vector<std::string> index_names;
    std::size_t lower() const { return kinds.size() - 1; }
};

inline const std::vector<FamilyInfo>& family_catalog() {
    using K = IndexKind;
    static const std::vector<FamilyInfo> cat = {
        {"anchor1", {K::k, K::base}, {"mu", "a"}},
        {"anchor2", {K::b, K::a, K::base}, {"alpha", "i", "a"}},
        {"anchor3", {K::b, K::b, K::a, K::b}, {"alpha", "beta", "i", "gamma"}},
        {"anchor4", {K::k, K::b, K::b}, {"mu", "beta", "gamma"}},
        {"anchor5", {K::a, K::a, K::b, K::a}, {"i", "j", "alpha", "k"}},
        {"anchor6", {K::k, K::a, K::a}, {"mu", "j", "k"}},
        {"bialg1", {K::k, K::base}, {"mu", "a"}},
        {"bialg2", {K::k, K::k, K::k}, {"mu", "nu", "lambda"}},
        {"bialg3", {K::b, K::a, K::base}, {"alpha", "j", "a"}},
        {"bialg4", {K::k, K::a, K::a}, {"mu", "j", "i"}},
        {"bialg5", {K::k, K::b, K::a, K::k}, {"mu", "beta", "j", "lambda"}},
        {"bialg6", {K::k, K::b, K::b}, {"mu", "alpha", "gamma"}},
        {"bialg7", {K::a, K::a, K::b, K::a}, {"i", "j", "alpha", "k"}},
        {"bialg8", {K::a, K::a, K::b, K::b, K::k}, {"i", "j", "alpha", "beta", "lambda"}},
        {"bialg9", {K::a, K::b, K::b, K::b}, {"j", "alpha", "beta", "gamma"}},
    };
    return cat;
}

inline const FamilyInfo& family_info(const std::string& name) {
    for (const auto& f : family_catalog())
        if (f.name == name) return f;
    throw Error("unknown equation family '" + name + "'");
}

inline std::vector<std::size_t> family_dims(const FamilyInfo& f, const DoubleShape& s) {
    std::vector<std::size_t> d;
    for (auto k : f.kinds) d.push_back(s.range(k));
    return d;
}

/// "[mu=1,j=2|i=1]": lower indices, then the upper one.
inline std::string index_label(const FamilyInfo& f, const std::vector<std::size_t>& t) {
    std::string s = "[";
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (r) s += r == f.lower() ? "|" : ",";
        s += f.index_names[r] + "=" + std::to_string(t[r] + 1);
    }
    return s + "]";
}

/// Values of a family at every index tuple, in index_tuples order.
struct FamilyValues {
    std::string family;
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<Poly> values;
    bool all_zero() const {
        for (const auto& v : values)
            if (!v.is_zero()) return false;
        return true;
    }
};

inline FamilyValues tabulate(const std::string& family, const DoubleShape& s,
                             const std::function<Poly(const std::vector<std::size_t>&)>& f) {
    FamilyValues out{family, index_tuples(family_dims(family_info(family), s)), {}};
    for (const auto& t : out.tuples) out.values.push_back(f(t));
    return out;
}

/// One summand of a printed family, moved to the left-hand side.
struct PrintedTerm {
    std::string label;
    Poly value;
};

/// The printed families, transcribed for purely even data from normalized
/// tensors. Alternation X_[ab] = h (X_ab - X_ba).
class PrintedFamilies {
  public:
    PrintedFamilies(const DoubleStructureFunctions& sf, Scalar alternation)
        : sf_(sf), h_(std::move(alternation)), zero_(sf.charts().base) {}

    FamilyValues eval(const std::string& family) const {
        return tabulate(family, sf_.shape(), [&](const std::vector<std::size_t>& t) { return at(family, t); });
    }

    Poly at(const std::string& family, const std::vector<std::size_t>& t) const {
        Poly s = zero_;
        for (const auto& term : terms(family, t)) s += term.value;
        return s;
    }

    std::vector<PrintedTerm> terms(const std::string& family, const std::vector<std::size_t>& t) const {
        if (family == "anchor1") return anchor1(t[0], t[1]);
        if (family == "anchor2") return anchor2(t[0], t[1], t[2]);
        if (family == "anchor3") return anchor3(t[0], t[1], t[2], t[3]);
        if (family == "anchor4") return anchor4(t[0], t[1], t[2]);
        if (family == "anchor5") return anchor5(t[0], t[1], t[2], t[3]);
        if (family == "anchor6") return anchor6(t[0], t[1], t[2]);
        if (family == "bialg1") return bialg1(t[0], t[1]);
        if (family == "bialg2") return bialg2(t[0], t[1], t[2]);
        if (family == "bialg3") return bialg3(t[0], t[1], t[2]);
        if (family == "bialg4") return bialg4(t[0], t[1], t[2]);
        if (family == "bialg5") return bialg5(t[0], t[1], t[2], t[3]);
        if (family == "bialg6") return bialg6(t[0], t[1], t[2]);
        if (family == "bialg7") return bialg7(t[0], t[1], t[2], t[3]);
        if (family == "bialg8") return bialg8(t[0], t[1], t[2], t[3], t[4]);
        if (family == "bialg9") return bialg9(t[0], t[1], t[2], t[3]);
        throw Error("unknown equation family '" + family + "'");
    }

  private:
    using I = std::size_t;
    using Terms = std::vector<PrintedTerm>;
    const Poly& T(const char* key, std::vector<I> idx) const { return sf_.get(key, idx); }
    // Q1
    const Poly& A(I i, I a) const { return T("Qia", {i, a}); }
    const Poly& C1(I j, I i, I k) const { return T("Qjik", {j, i, k}); }
    const Poly& M(I al, I i, I be) const { return T("QaiB", {al, i, be}); }
    const Poly& N(I mu, I be) const { return T("QmuB", {mu, be}); }
    const Poly& R1(I al, I j, I i, I la) const { return T("QajiL", {al, j, i, la}); }
    const Poly& S1(I mu, I i, I la) const { return T("QmuiL", {mu, i, la}); }
    // Q2
    const Poly& B(I al, I a) const { return T("QAa", {al, a}); }
    const Poly& P(I i, I al, I j) const { return T("QiAj", {i, al, j}); }
    const Poly& Nu(I mu, I j) const { return T("Qmuj", {mu, j}); }
    const Poly& C2(I be, I al, I ga) const { return T("QbaG", {be, al, ga}); }
    const Poly& R2(I i, I be, I al, I la) const { return T("QibaL", {i, be, al, la}); }
    const Poly& S2(I mu, I al, I la) const { return T("QmuaL", {mu, al, la}); }

    Poly d(const Poly& f, I b) const { return partial(f, b); }
    Poly sum(IndexKind k, const std::function<Poly(I)>& f) const {
        Poly s = zero_;
        for (I r = 0; r < sf_.shape().range(k); ++r) s += f(r);
        return s;
    }
    Poly alt(const std::function<Poly(I, I)>& f, I x, I y) const { return h_ * (f(x, y) - f(y, x)); }
    /// Right-hand side terms enter negated.
    static Terms lhs_minus_rhs(Terms lhs, const Terms& rhs) {
        for (const auto& t : rhs) lhs.push_back({t.label, -t.value});
        return lhs;
    }

    static constexpr IndexKind kA = IndexKind::a, kB = IndexKind::b, kK = IndexKind::k, kX = IndexKind::base;
    const Scalar half = Scalar(1, 2);

    Terms anchor1(I mu, I a) const {
        return {{"N.B", sum(kB, [&](I be) { return N(mu, be) * B(be, a); })},
                {"Nu.A", -sum(kA, [&](I j) { return Nu(mu, j) * A(j, a); })}};
    }
    Terms anchor2(I al, I i, I a) const {
        return {{"M.B", sum(kB, [&](I be) { return M(al, i, be) * B(be, a); })},
                {"A.dB", sum(kX, [&](I b) { return A(i, b) * d(B(al, a), b); })},
                {"B.dA", -sum(kX, [&](I b) { return B(al, b) * d(A(i, a), b); })},
                {"P.A", -sum(kA, [&](I j) { return P(i, al, j) * A(j, a); })}};
    }
    Terms anchor3(I al, I be, I i, I ga) const {
        auto l1 = [&](I x, I y) { return sum(kB, [&](I de) { return M(x, i, de) * C2(y, de, ga); }); };
        auto r1 = [&](I x, I y) { return sum(kX, [&](I a) { return B(x, a) * d(M(y, i, ga), a); }); };
        auto r2 = [&](I x, I y) { return sum(kA, [&](I j) { return P(i, x, j) * M(y, j, ga); }); };
        return lhs_minus_rhs({{"M.C2", alt(l1, al, be)},
                              {"A.dC2", half * sum(kX, [&](I b) { return A(i, b) * d(C2(be, al, ga), b); })}},
                             {{"B.dM", alt(r1, al, be)},
                              {"P.M", alt(r2, al, be)},
                              {"C2.M", half * sum(kB, [&](I de) { return C2(be, al, de) * M(de, i, ga); })},
                              {"R2.N", half * sum(kK, [&](I la) { return R2(i, be, al, la) * N(la, ga); })}});
    }
    Terms anchor4(I mu, I be, I ga) const {
        return {{"N.C2", sum(kB, [&](I al) { return N(mu, al) * C2(be, al, ga); })},
                {"B.dN", sum(kX, [&](I a) { return B(be, a) * d(N(mu, ga), a); })},
                {"Nu.M", -sum(kA, [&](I j) { return Nu(mu, j) * M(be, j, ga); })},
                {"S2.N", sum(kK, [&](I la) { return S2(mu, be, la) * N(la, ga); })}};
    }
    Terms anchor5(I i, I j, I al, I k) const {
        auto l1 = [&](I x, I y) { return sum(kA, [&](I l) { return P(x, al, l) * C1(y, l, k); }); };
        auto r1 = [&](I x, I y) { return sum(kX, [&](I a) { return A(x, a) * d(P(y, al, k), a); }); };
        auto r2 = [&](I x, I y) { return sum(kB, [&](I be) { return M(al, x, be) * P(y, be, k); }); };
        return lhs_minus_rhs({{"P.C1", alt(l1, i, j)},
                              {"B.dC1", half * sum(kX, [&](I b) { return B(al, b) * d(C1(j, i, k), b); })}},
                             {{"A.dP", alt(r1, i, j)},
                              {"M.P", alt(r2, i, j)},
                              {"C1.P", half * sum(kA, [&](I l) { return C1(j, i, l) * P(l, al, k); })},
                              {"R1.Nu", half * sum(kK, [&](I la) { return R1(al, j, i, la) * Nu(la, k); })}});
    }
    Terms anchor6(I mu, I j, I k) const {
        return {{"Nu.C1", sum(kA, [&](I i) { return Nu(mu, i) * C1(j, i, k); })},
                {"A.dNu", sum(kX, [&](I a) { return A(j, a) * d(Nu(mu, k), a); })},
                {"N.P", -sum(kB, [&](I be) { return N(mu, be) * P(j, be, k); })},
                {"S1.Nu", sum(kK, [&](I la) { return S1(mu, j, la) * Nu(la, k); })}};
    }

    Terms bialg1(I mu, I a) const {
        return {{"B.N", sum(kB, [&](I al) { return B(al, a) * N(mu, al); })},
                {"Nu.A", -sum(kA, [&](I i) { return Nu(mu, i) * A(i, a); })}};
    }
    Terms bialg2(I mu, I nu, I la) const {
        return {{"Nu.S1", sum(kA, [&](I i) { return Nu(mu, i) * S1(nu, i, la); })},
                {"N.S2", sum(kB, [&](I al) { return N(mu, al) * S2(nu, al, la); })},
                {"Nu.S1'", sum(kA, [&](I i) { return Nu(nu, i) * S1(mu, i, la); })},
                {"N.S2'", sum(kB, [&](I al) { return N(nu, al) * S2(mu, al, la); })}};
    }
    // right-hand side index corrected to j
    Terms bialg3(I al, I j, I a) const {
        return lhs_minus_rhs({{"M.B", sum(kB, [&](I be) { return M(al, j, be) * B(be, a); })},
                              {"A.dB", sum(kX, [&](I b) { return A(j, b) * d(B(al, a), b); })},
                              {"P.A", -sum(kA, [&](I i) { return P(j, al, i) * A(i, a); })}},
                             {{"B.dA", -sum(kX, [&](I b) { return B(al, b) * d(A(j, a), b); })}});
    }
    Terms bialg4(I mu, I j, I i) const {
        return lhs_minus_rhs({{"A.dNu", sum(kX, [&](I a) { return A(j, a) * d(Nu(mu, i), a); })},
                              {"Nu.C1", sum(kA, [&](I k) { return Nu(mu, k) * C1(j, k, i); })},
                              {"N.P", -sum(kB, [&](I al) { return N(mu, al) * P(j, al, i); })}},
                             {{"S1.Nu", sum(kK, [&](I la) { return S1(mu, j, la) * Nu(la, i); })}});
    }
    Terms bialg5(I mu, I be, I j, I la) const {
        return lhs_minus_rhs({{"Nu.R1", -sum(kA, [&](I i) { return Nu(mu, i) * R1(be, j, i, la); })},
                              {"M.S2", -sum(kB, [&](I al) { return M(be, j, al) * S2(mu, al, la); })},
                              {"S1.S2", sum(kK, [&](I nu) { return S1(nu, j, la) * S2(mu, be, nu); })},
                              {"A.dS2", sum(kX, [&](I a) { return A(j, a) * d(S2(mu, be, la), a); })},
                              {"S1.P", sum(kA, [&](I i) { return S1(mu, i, la) * P(j, be, i); })},
                              {"N.R2", -sum(kB, [&](I al) { return N(mu, al) * R2(j, be, al, la); })}},
                             {{"B.dS1", sum(kX, [&](I a) { return B(be, a) * d(S1(mu, j, la), a); })},
                              {"S1.S2'", sum(kK, [&](I nu) { return S1(mu, j, nu) * S2(nu, be, la); })}});
    }
    Terms bialg6(I mu, I al, I ga) const {
        return lhs_minus_rhs({{"Nu.M", sum(kA, [&](I i) { return Nu(mu, i) * M(al, i, ga); })},
                              {"N.S2", -sum(kK, [&](I la) { return N(la, ga) * S2(mu, al, la); })},
                              {"N.C2", -sum(kB, [&](I be) { return N(mu, be) * C2(al, be, ga); })}},
                             {{"B.dN", sum(kX, [&](I a) { return B(al, a) * d(N(mu, ga), a); })}});
    }
    Terms bialg7(I i, I j, I al, I k) const {
        return lhs_minus_rhs({{"M.P(j)", -sum(kB, [&](I be) { return M(al, j, be) * P(i, be, k); })},
                              {"C1.P(j)", -sum(kA, [&](I l) { return C1(j, l, k) * P(i, al, l); })},
                              {"A.dP(j)", -sum(kX, [&](I a) { return A(j, a) * d(P(i, al, k), a); })},
                              {"M.P(i)", sum(kB, [&](I be) { return M(al, i, be) * P(j, be, k); })},
                              {"C1.P(i)", sum(kA, [&](I l) { return C1(i, l, k) * P(j, al, l); })},
                              {"A.dP(i)", sum(kX, [&](I a) { return A(i, a) * d(P(j, al, k), a); })}},
                             {{"B.dC1", sum(kX, [&](I a) { return B(al, a) * d(C1(i, j, k), a); })},
                              {"C1.P", sum(kA, [&](I l) { return C1(i, j, l) * P(l, al, k); })},
                              {"R1.Nu", -sum(kK, [&](I mu) { return R1(al, i, j, mu) * Nu(mu, k); })}});
    }
    // Upper index of the contracted Q_{i beta}, Q_{j beta} corrected to l; the
    // uncontracted fragment -Q_{alpha ij}^mu is left out.
    Terms bialg8(I i, I j, I al, I be, I la) const {
        return lhs_minus_rhs(
            {{"C1.R2", sum(kA, [&](I l) { return C1(i, j, l) * R2(l, be, al, la); })},
             {"C2.R1", sum(kB, [&](I ga) { return C2(be, al, ga) * R1(ga, i, j, la); })},
             {"B.dR1(a)", sum(kX, [&](I a) { return B(al, a) * d(R1(be, i, j, la), a); })},
             {"B.dR1(b)", -sum(kX, [&](I a) { return B(be, a) * d(R1(al, i, j, la), a); })},
             {"R1.S2", sum(kK, [&](I mu) { return R1(be, i, j, mu) * S2(mu, al, la); })}},
            {{"R1.P(b,i)", sum(kA, [&](I l) { return R1(be, j, l, la) * P(i, al, l); })},
             {"R1.P(a,i)", -sum(kA, [&](I l) { return R1(al, j, l, la) * P(i, be, l); })},
             {"M.R2(a,i)", -sum(kB, [&](I ga) { return M(al, j, ga) * R2(i, be, ga, la); })},
             {"M.R2(b,i)", sum(kB, [&](I ga) { return M(be, j, ga) * R2(i, al, ga, la); })},
             {"A.dR2(i)", -sum(kX, [&](I a) { return A(j, a) * d(R2(i, be, al, la), a); })},
             {"R2.S1(i)", -sum(kK, [&](I mu) { return R2(i, be, al, mu) * S1(mu, j, la); })},
             {"R1.P(b,j)", -sum(kA, [&](I l) { return R1(be, i, l, la) * P(j, al, l); })},
             {"R1.P(a,j)", sum(kA, [&](I l) { return R1(al, i, l, la) * P(j, be, l); })},
             {"M.R2(a,j)", sum(kB, [&](I ga) { return M(al, i, ga) * R2(j, be, ga, la); })},
             {"M.R2(b,j)", -sum(kB, [&](I ga) { return M(be, i, ga) * R2(j, al, ga, la); })},
             {"A.dR2(j)", sum(kX, [&](I a) { return A(i, a) * d(R2(j, be, al, la), a); })},
             {"R2.S1(j)", sum(kK, [&](I mu) { return R2(j, be, al, mu) * S1(mu, i, la); })}});
    }
    // Repeated index in Q_{beta alpha}^gamma Q_{gamma j}^beta read as a contraction over epsilon.
    Terms bialg9(I j, I al, I be, I ga) const {
        return lhs_minus_rhs({{"M.P(b)", sum(kA, [&](I k) { return M(be, k, ga) * P(j, al, k); })},
                              {"M.P(a)", -sum(kA, [&](I k) { return M(al, k, ga) * P(j, be, k); })},
                              {"R2.N", sum(kK, [&](I la) { return R2(j, be, al, la) * N(la, ga); })},
                              {"M.C2(a)", sum(kB, [&](I ep) { return M(al, j, ep) * C2(be, ep, ga); })},
                              {"M.C2(b)", -sum(kB, [&](I ep) { return M(be, j, ep) * C2(al, ep, ga); })},
                              {"A.dC2", -sum(kX, [&](I a) { return A(j, a) * d(C2(be, al, ga), a); })}},
                             {{"C2.M", sum(kB, [&](I ep) { return C2(be, al, ep) * M(ep, j, ga); })},
                              {"B.dM(a)", sum(kX, [&](I a) { return B(al, a) * d(M(be, j, ga), a); })},
                              {"B.dM(b)", -sum(kX, [&](I a) { return B(be, a) * d(M(al, j, ga), a); })}});
    }

    DoubleStructureFunctions sf_;
    Scalar h_;
    Poly zero_;
};

/// Exact fit engine = sum_t c_t * term_t of one printed family over several instances.
class TermFitter {
  public:
    explicit TermFitter(std::string family) : family_(std::move(family)) {}

    void add(const FamilyValues& engine, const PrintedFamilies& printed) {
        for (std::size_t t = 0; t < engine.tuples.size(); ++t) {
            const auto terms = printed.terms(family_, engine.tuples[t]);
            if (labels_.empty())
                for (const auto& x : terms) labels_.push_back(x.label);
            std::set<Monomial> monos;
            for (const auto& [m, c] : engine.values[t].terms()) monos.insert(m);
            for (const auto& x : terms)
                for (const auto& [m, c] : x.value.terms()) monos.insert(m);
            for (const auto& m : monos) {
                std::vector<Scalar> row;
                for (const auto& x : terms) row.push_back(coef(x.value, m));
                rows_.push_back(std::move(row));
                rhs_.push_back(coef(engine.values[t], m));
            }
        }
    }

    struct Result {
        bool consistent = true;
        std::vector<std::string> labels;
        std::vector<std::optional<Scalar>> coefficients; // nullopt: not determined by the data
    };

    /// Gauss-Jordan elimination over the rationals.
    Result solve() const {
        const std::size_t n = labels_.size();
        auto a = rows_;
        auto b = rhs_;
        std::vector<std::optional<std::size_t>> pivot(n);
        std::size_t r = 0;
        for (std::size_t col = 0; col < n && r < a.size(); ++col) {
            std::size_t p = r;
            while (p < a.size() && a[p][col] == 0) ++p;
            if (p == a.size()) continue;
            std::swap(a[p], a[r]);
            std::swap(b[p], b[r]);
            const Scalar inv = 1 / a[r][col];
            for (auto& x : a[r]) x *= inv;
            b[r] *= inv;
            for (std::size_t q = 0; q < a.size(); ++q) {
                if (q == r || a[q][col] == 0) continue;
                const Scalar f = a[q][col];
                for (std::size_t k = 0; k < n; ++k) a[q][k] -= f * a[r][k];
                b[q] -= f * b[r];
            }
            pivot[col] = r++;
        }
        Result out{true, labels_, std::vector<std::optional<Scalar>>(n)};
        for (std::size_t q = r; q < a.size(); ++q)
            if (b[q] != 0) out.consistent = false;
        for (std::size_t col = 0; col < n; ++col) {
            if (!pivot[col]) continue;
            bool alone = true;
            for (std::size_t k = 0; k < n; ++k)
                if (k != col && !pivot[k] && a[*pivot[col]][k] != 0) alone = false;
            if (alone) out.coefficients[col] = b[*pivot[col]];
        }
        return out;
    }

  private:
    static Scalar coef(const Poly& p, const Monomial& m) {
        auto it = p.terms().find(m);
        return it == p.terms().end() ? Scalar(0) : it->second;
    }
    std::string family_;
    std::vector<std::string> labels_;
    std::vector<std::vector<Scalar>> rows_;
    std::vector<Scalar> rhs_;
};

/// Terms of p grouped by how many variables of each fiber kind (A, B, K) they carry.
using KindSignature = std::array<int, 3>;

inline std::map<KindSignature, Poly> split_by_kind(const Poly& p, const std::vector<int>& kind_of) {
    std::map<KindSignature, Poly> out;
    for (const auto& [m, c] : p.terms()) {
        KindSignature sig{0, 0, 0};
        for (std::size_t v = 0; v < m.exp.size(); ++v)
            if (m.exp[v] && kind_of[v] >= 0) sig[kind_of[v]] += m.exp[v];
        auto it = out.find(sig);
        if (it == out.end()) it = out.emplace(sig, Poly(p.chart())).first;
        it->second.add_term(m, c);
    }
    return out;
}

/// Iterated left derivatives (first listed acts first), restricted to the base.
inline Poly coefficient(Poly p, const std::vector<std::size_t>& vars, const ChartPtr& base) {
    for (auto v : vars) p = partial(p, v);
    const ChartPtr ch = p.chart();
    std::vector<bool> fiber(ch->size(), true);
    for (std::size_t v = 0; v < ch->size(); ++v)
        if (base->find(ch->var(v).name)) fiber[v] = false;
    return embed(p.truncate(fiber, 0), base);
}

inline std::string signature_label(const KindSignature& s) {
    std::string out;
    const char* names[3] = {"A", "B", "K"};
    for (int k = 0; k < 3; ++k)
        if (s[k]) out += std::string(names[k]) + "^" + std::to_string(s[k]);
    return out.empty() ? "1" : out;
}

/// e = factor * p at every tuple. With no factor given, the first nonzero pair fixes it.
struct FactorMatch {
    bool determined = false; // some tuple had a nonzero printed value
    bool agrees = false;
    Scalar factor = 1;
};

inline FactorMatch match_factor(const FamilyValues& engine, const FamilyValues& printed,
                                std::optional<Scalar> factor = std::nullopt) {
    FactorMatch m;
    if (factor) {
        m.factor = *factor;
        m.determined = true;
    } else {
        for (std::size_t t = 0; t < printed.values.size(); ++t) {
            const Poly& p = printed.values[t];
            if (p.is_zero()) continue;
            const auto& [mono, c] = *p.terms().begin();
            Scalar e = 0;
            auto it = engine.values[t].terms().find(mono);
            if (it != engine.values[t].terms().end()) e = it->second;
            m.factor = e / c;
            m.determined = true;
            break;
        }
    }
    m.agrees = true;
    for (std::size_t t = 0; t < engine.values.size(); ++t)
        if (!(engine.values[t] == m.factor * printed.values[t])) {
            m.agrees = false;
            break;
        }
    return m;
}

} // namespace gv
