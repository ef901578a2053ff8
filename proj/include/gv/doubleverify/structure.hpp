#pragma once

#include "gv/fields.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gv {

/// Index kinds: base coordinates, side A, side B, core K.
enum class IndexKind { base, a, b, k };

/// Parities of a double vector bundle D: base x^a, side fibers u^i (A),
/// w^alpha (B) and core z^mu.
struct DoubleShape {
    std::vector<Variable> base;
    std::vector<Parity> a, b, k;

    std::size_t range(IndexKind kind) const {
        switch (kind) {
        case IndexKind::base: return base.size();
        case IndexKind::a: return a.size();
        case IndexKind::b: return b.size();
        case IndexKind::k: return k.size();
        }
        return 0;
    }
    bool is_even() const {
        for (const auto& v : base)
            if (is_odd(v.parity)) return false;
        for (const auto* f : {&a, &b, &k})
            for (Parity p : *f)
                if (is_odd(p)) return false;
        return true;
    }
};

inline DoubleShape even_shape(std::size_t n, std::size_t ra, std::size_t rb, std::size_t rk) {
    DoubleShape s;
    for (std::size_t a = 0; a < n; ++a) s.base.push_back({"x" + std::to_string(a + 1), Parity::even, {}});
    s.a.assign(ra, Parity::even);
    s.b.assign(rb, Parity::even);
    s.k.assign(rk, Parity::even);
    return s;
}

/// Coefficient tensor key: lower indices, then the upper one. The field term
/// is (1/multiplicities) * (lower variables in reverse order) * Q * d/d(upper).
struct TensorKey {
    const char* name;
    int field; // 1 for Q1 (weight (1,0)), 2 for Q2 (weight (0,1))
    std::vector<IndexKind> lower;
    IndexKind upper;
    const char* symbol;
};

inline const std::vector<TensorKey>& tensor_keys() {
    using K = IndexKind;
    static const std::vector<TensorKey> keys = {
        {"Qia", 1, {K::a}, K::base, "Q_i^a"},
        {"Qjik", 1, {K::a, K::a}, K::a, "Q_ji^k"},
        {"QaiB", 1, {K::b, K::a}, K::b, "Q_alpha,i^beta"},
        {"QmuB", 1, {K::k}, K::b, "Q_mu^beta"},
        {"QajiL", 1, {K::b, K::a, K::a}, K::k, "Q_alpha,j,i^lambda"},
        {"QmuiL", 1, {K::k, K::a}, K::k, "Q_mu,i^lambda"},
        {"QAa", 2, {K::b}, K::base, "Q_alpha^a"},
        {"QiAj", 2, {K::a, K::b}, K::a, "Q_i,alpha^j"},
        {"Qmuj", 2, {K::k}, K::a, "Q_mu^j"},
        {"QbaG", 2, {K::b, K::b}, K::b, "Q_beta,alpha^gamma"},
        {"QibaL", 2, {K::a, K::b, K::b}, K::k, "Q_i,beta,alpha^lambda"},
        {"QmuaL", 2, {K::k, K::b}, K::k, "Q_mu,alpha^lambda"},
    };
    return keys;
}

inline const TensorKey& tensor_key(const std::string& name) {
    for (const auto& k : tensor_keys())
        if (name == k.name) return k;
    throw ShapeError(name, "unknown tensor block '" + name + "'");
}

/// Dense array of base polynomials.
class Tensor {
  public:
    Tensor() = default;
    Tensor(const ChartPtr& base, std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        std::size_t n = 1;
        for (auto d : dims_) n *= d;
        data_.assign(n, Poly(base));
    }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return data_.size(); }
    Poly& flat(std::size_t k) { return data_.at(k); }
    const Poly& flat(std::size_t k) const { return data_.at(k); }
    std::size_t offset(const std::vector<std::size_t>& idx) const {
        if (idx.size() != dims_.size()) throw ShapeError("tensor", "wrong number of indices");
        std::size_t k = 0;
        for (std::size_t r = 0; r < dims_.size(); ++r) {
            if (idx[r] >= dims_[r]) throw ShapeError("tensor", "index out of range");
            k = k * dims_[r] + idx[r];
        }
        return k;
    }
    std::vector<std::size_t> unflatten(std::size_t k) const {
        std::vector<std::size_t> idx(dims_.size());
        for (std::size_t r = dims_.size(); r-- > 0;) {
            idx[r] = k % dims_[r];
            k /= dims_[r];
        }
        return idx;
    }
    Poly& at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
    const Poly& at(const std::vector<std::size_t>& idx) const { return data_[offset(idx)]; }

  private:
    std::vector<std::size_t> dims_;
    std::vector<Poly> data_;
};

/// Every index tuple of the given ranges, last index fastest.
inline std::vector<std::vector<std::size_t>> index_tuples(const std::vector<std::size_t>& dims) {
    std::vector<std::vector<std::size_t>> out;
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::size_t> idx(dims.size());
        std::size_t r = k;
        for (std::size_t p = dims.size(); p-- > 0;) {
            idx[p] = r % dims[p];
            r /= dims[p];
        }
        out.push_back(std::move(idx));
    }
    return out;
}

/// Charts of the double and its relatives:
///   pi2  = Pi_B Pi_A D:   x, xi (1,0), eta (0,1), z (1,1)
///   pib  = Pi_B D:        x, xi, w, theta
///   pia  = Pi_A D:        x, u, eta, theta
///   pa   = Pi A:          x, xi
///   pb   = Pi B:          x, eta
///   dual = Pi_K* D^{*B}:  x, xi_i, eta, z_mu
struct DoubleCharts {
    ChartPtr base, pi2, pib, pia, pa, pb, dual;
};

namespace detail {

inline ChartPtr double_chart(const DoubleShape& s, const std::array<const char*, 3>& names,
                             const std::array<bool, 3>& flip, bool with_b = true, bool with_k = true,
                             bool with_a = true) {
    ChartBuilder cb(2);
    for (const auto& v : s.base) cb.add(v.name, v.parity, {0, 0});
    const Parity odd = Parity::odd, even = Parity::even;
    if (with_a)
        for (std::size_t i = 0; i < s.a.size(); ++i)
            cb.add(names[0] + std::to_string(i + 1), s.a[i] + (flip[0] ? odd : even), {1, 0});
    if (with_b)
        for (std::size_t i = 0; i < s.b.size(); ++i)
            cb.add(names[1] + std::to_string(i + 1), s.b[i] + (flip[1] ? odd : even), {0, 1});
    if (with_k)
        for (std::size_t i = 0; i < s.k.size(); ++i)
            cb.add(names[2] + std::to_string(i + 1), s.k[i] + (flip[2] ? odd : even), {1, 1});
    return cb.build();
}

} // namespace detail

inline DoubleCharts double_charts(const DoubleShape& s) {
    DoubleCharts c;
    ChartBuilder bb(0);
    for (const auto& v : s.base) bb.add(v.name, v.parity);
    c.base = bb.build();
    c.pi2 = detail::double_chart(s, {"xi", "eta", "z"}, {true, true, false});
    c.pib = detail::double_chart(s, {"xi", "w", "theta"}, {true, false, true});
    c.pia = detail::double_chart(s, {"u", "eta", "theta"}, {false, true, true});
    c.pa = detail::double_chart(s, {"xi", "", ""}, {true, false, false}, false, false);
    c.pb = detail::double_chart(s, {"", "eta", ""}, {false, true, false}, true, false, false);
    ChartBuilder db(0);
    for (const auto& v : s.base) db.add(v.name, v.parity);
    for (std::size_t i = 0; i < s.a.size(); ++i) db.add("xi_" + std::to_string(i + 1), s.a[i] + Parity::odd);
    for (std::size_t i = 0; i < s.b.size(); ++i) db.add("eta" + std::to_string(i + 1), s.b[i] + Parity::odd);
    for (std::size_t i = 0; i < s.k.size(); ++i) db.add("z_" + std::to_string(i + 1), s.k[i]);
    c.dual = db.build();
    return c;
}

/// Position of the r-th variable of a kind on a chart laid out as base, A, B, K;
/// absent families are skipped.
struct KindLayout {
    std::size_t base = 0, a = 0, b = 0, k = 0;
    bool has_a = true, has_b = true, has_k = true;
    std::size_t index(IndexKind kind, std::size_t r) const {
        switch (kind) {
        case IndexKind::base: return r;
        case IndexKind::a: return base + r;
        case IndexKind::b: return base + (has_a ? a : 0) + r;
        case IndexKind::k: return base + (has_a ? a : 0) + (has_b ? b : 0) + r;
        }
        return 0;
    }
};

inline KindLayout kind_layout(const DoubleShape& s, bool has_a = true, bool has_b = true, bool has_k = true) {
    return {s.base.size(), s.a.size(), s.b.size(), s.k.size(), has_a, has_b, has_k};
}

/// The twelve coefficient tensors of Q1 and Q2, entries polynomial in x.
class DoubleStructureFunctions {
  public:
    explicit DoubleStructureFunctions(DoubleShape shape) : shape_(std::move(shape)), charts_(double_charts(shape_)) {
        for (const auto& key : tensor_keys()) tensors_.emplace(key.name, Tensor(charts_.base, dims(key)));
    }
    DoubleStructureFunctions(DoubleShape shape, DoubleCharts charts)
        : shape_(std::move(shape)), charts_(std::move(charts)) {
        for (const auto& key : tensor_keys()) tensors_.emplace(key.name, Tensor(charts_.base, dims(key)));
    }

    const DoubleShape& shape() const noexcept { return shape_; }
    const DoubleCharts& charts() const noexcept { return charts_; }

    std::vector<std::size_t> dims(const TensorKey& key) const {
        std::vector<std::size_t> d;
        for (auto kind : key.lower) d.push_back(shape_.range(kind));
        d.push_back(shape_.range(key.upper));
        return d;
    }

    Tensor& tensor(const std::string& name) {
        auto it = tensors_.find(name);
        if (it == tensors_.end()) throw ShapeError(name, "unknown tensor block '" + name + "'");
        return it->second;
    }
    const Tensor& tensor(const std::string& name) const {
        auto it = tensors_.find(name);
        if (it == tensors_.end()) throw ShapeError(name, "unknown tensor block '" + name + "'");
        return it->second;
    }
    const Poly& get(const std::string& name, const std::vector<std::size_t>& idx) const { return tensor(name).at(idx); }
    void set(const std::string& name, const std::vector<std::size_t>& idx, const Poly& p) {
        tensor(name).at(idx) = embed(p, charts_.base);
    }

    /// Parity an entry must have so that its term in Q1 or Q2 is odd.
    Parity entry_parity(const TensorKey& key, const std::vector<std::size_t>& idx) const {
        const auto layout = kind_layout(shape_);
        Parity p = Parity::odd;
        for (std::size_t r = 0; r < key.lower.size(); ++r) p = p + charts_.pi2->parity(layout.index(key.lower[r], idx[r]));
        p = p + charts_.pi2->parity(layout.index(key.upper, idx.back()));
        return p;
    }

    /// Parity check of every entry; optional bound on the degree in x.
    void validate(std::optional<unsigned> max_degree = std::nullopt) const {
        for (const auto& key : tensor_keys()) {
            const Tensor& t = tensor(key.name);
            for (std::size_t f = 0; f < t.size(); ++f) {
                const Poly& e = t.flat(f);
                if (e.is_zero()) continue;
                const auto idx = t.unflatten(f);
                const auto want = entry_parity(key, idx);
                auto got = e.parity();
                if (!got || *got != want)
                    throw ShapeError(key.name, std::string("entry ") + key.name + label(idx) + " must be " +
                                                   (is_odd(want) ? "odd" : "even") + ": " + e.str());
                if (max_degree && e.degree() > *max_degree)
                    throw ShapeError(key.name, std::string("entry ") + key.name + label(idx) +
                                                   " exceeds the degree bound " + std::to_string(*max_degree));
            }
        }
    }

    static std::string label(const std::vector<std::size_t>& idx) {
        std::string s = "[";
        for (std::size_t r = 0; r < idx.size(); ++r) {
            if (r) s += r + 1 == idx.size() ? "|" : ",";
            s += std::to_string(idx[r] + 1);
        }
        return s + "]";
    }

    friend bool operator==(const DoubleStructureFunctions& x, const DoubleStructureFunctions& y) {
        if (x.charts_.base != y.charts_.base) return false;
        for (const auto& key : tensor_keys()) {
            const Tensor &a = x.tensor(key.name), &b = y.tensor(key.name);
            for (std::size_t f = 0; f < a.size(); ++f)
                if (!(a.flat(f) == b.flat(f))) return false;
        }
        return true;
    }

  private:
    DoubleShape shape_;
    DoubleCharts charts_;
    std::map<std::string, Tensor> tensors_;
};

/// Q1, Q2 on Pi^2 D; their reversions Q1^Pi on Pi_B D, Q2^Pi on Pi_A D; the
/// side fields Q1^(0) on Pi A, Q2^(0) on Pi B.
struct DoubleFields {
    Derivation q1, q2, q1pi, q2pi, q1_0, q2_0;
};

namespace detail {

inline Scalar multiplicity_factor(const std::vector<IndexKind>& lower) {
    Scalar f = 1;
    for (std::size_t r = 0; r < lower.size(); ++r) {
        int m = 0;
        for (std::size_t s = 0; s <= r; ++s)
            if (lower[s] == lower[r]) ++m;
        f /= m;
    }
    return f;
}

inline bool uses(const TensorKey& key, IndexKind kind) {
    if (key.upper == kind) return true;
    for (auto k : key.lower)
        if (k == kind) return true;
    return false;
}

} // namespace detail

/// Assembles the terms of one field on a chart with the given layout; keys
/// touching a missing family are skipped.
inline Derivation assemble_field(const DoubleStructureFunctions& sf, int field, const ChartPtr& chart,
                                 const KindLayout& layout) {
    Derivation q(chart);
    for (const auto& key : tensor_keys()) {
        if (key.field != field) continue;
        if ((!layout.has_a && detail::uses(key, IndexKind::a)) || (!layout.has_b && detail::uses(key, IndexKind::b)) ||
            (!layout.has_k && detail::uses(key, IndexKind::k)))
            continue;
        const Scalar factor = detail::multiplicity_factor(key.lower);
        const Tensor& t = sf.tensor(key.name);
        for (std::size_t f = 0; f < t.size(); ++f) {
            if (t.flat(f).is_zero()) continue;
            const auto idx = t.unflatten(f);
            Poly term = Poly::constant(chart, factor);
            for (std::size_t r = key.lower.size(); r-- > 0;)
                term = term * Poly::variable(chart, layout.index(key.lower[r], idx[r]));
            term = term * embed(t.flat(f), chart);
            q.add(layout.index(key.upper, idx.back()), term);
        }
    }
    return q;
}

inline DoubleFields build_fields(const DoubleStructureFunctions& sf) {
    const auto& c = sf.charts();
    const auto& s = sf.shape();
    const auto full = kind_layout(s);
    DoubleFields out{assemble_field(sf, 1, c.pi2, full),         assemble_field(sf, 2, c.pi2, full),
                     assemble_field(sf, 1, c.pib, full),         assemble_field(sf, 2, c.pia, full),
                     assemble_field(sf, 1, c.pa, kind_layout(s, true, false, false)),
                     assemble_field(sf, 2, c.pb, kind_layout(s, false, true, false))};
    const Weight w1{1, 0}, w2{0, 1};
    auto check = [](const Derivation& q, const Weight& w, const char* name) {
        if (q.is_zero()) return;
        auto got = q.weight();
        if (!got || *got != w) throw ShapeError(name, std::string(name) + " is not of weight " + to_string(w));
        q.homogeneous_parity(name);
    };
    check(out.q1, w1, "Q1");
    check(out.q2, w2, "Q2");
    check(out.q1pi, w1, "Q1^Pi");
    check(out.q2pi, w2, "Q2^Pi");
    return out;
}

/// Reads the twelve tensors back from fields of the displayed form on Pi^2 D:
/// each entry is the iterated left derivative along the term's variables.
/// Throws a shape error when a field is not of that form.
inline DoubleStructureFunctions structure_from_fields(const DoubleShape& shape, const Derivation& q1,
                                                      const Derivation& q2,
                                                      std::optional<DoubleCharts> charts = std::nullopt) {
    DoubleStructureFunctions sf = charts ? DoubleStructureFunctions(shape, *charts) : DoubleStructureFunctions(shape);
    const auto& c = sf.charts();
    const auto layout = kind_layout(shape);
    std::vector<bool> fiber(c.pi2->size(), false);
    for (std::size_t v = shape.base.size(); v < fiber.size(); ++v) fiber[v] = true;
    auto on_pi2 = [&](const Derivation& q, const char* name) {
        if (q.chart() == c.pi2) return q;
        if (q.size() != c.pi2->size()) throw ShapeError(name, std::string(name) + " lives on a chart of the wrong size");
        Derivation out(c.pi2);
        for (std::size_t v = 0; v < q.size(); ++v) {
            if (q.chart()->var(v).name != c.pi2->var(v).name || q.chart()->parity(v) != c.pi2->parity(v))
                throw ShapeError(name, std::string(name) + " lives on a different chart");
            out.set(v, embed(q[v], c.pi2));
        }
        return out;
    };
    const Derivation f1 = on_pi2(q1, "Q1"), f2 = on_pi2(q2, "Q2");
    for (const auto& key : tensor_keys()) {
        const Derivation& q = key.field == 1 ? f1 : f2;
        Tensor& t = sf.tensor(key.name);
        for (std::size_t f = 0; f < t.size(); ++f) {
            const auto idx = t.unflatten(f);
            Poly e = q[layout.index(key.upper, idx.back())];
            for (std::size_t r = key.lower.size(); r-- > 0;) e = partial(e, layout.index(key.lower[r], idx[r]));
            e = e.truncate(fiber, 0);
            t.flat(f) = embed(e, c.base);
        }
    }
    const auto fields = build_fields(sf);
    if (!(fields.q1 == f1)) throw ShapeError("Q1", "field is not of the weight-(1,0) double form");
    if (!(fields.q2 == f2)) throw ShapeError("Q2", "field is not of the weight-(0,1) double form");
    return sf;
}

/// Graded-antisymmetric representative: the tensors that the assembled
/// fields actually see.
inline DoubleStructureFunctions normalized(const DoubleStructureFunctions& sf) {
    const auto f = build_fields(sf);
    return structure_from_fields(sf.shape(), f.q1, f.q2, sf.charts());
}

struct RandomStructureOptions {
    unsigned degree = 1;
    unsigned max_terms = 2;
    double density = 1.0; // probability that an entry is nonzero
    int coefficient_range = 3;
};

inline DoubleStructureFunctions random_structure(Rng& rng, const DoubleShape& shape, const RandomStructureOptions& opt = {}) {
    DoubleStructureFunctions sf(shape);
    const auto& base = sf.charts().base;
    RandomPolyOptions po;
    po.max_degree = opt.degree;
    po.max_terms = opt.max_terms;
    po.coefficient_range = opt.coefficient_range;
    std::bernoulli_distribution keep(opt.density);
    for (const auto& key : tensor_keys()) {
        Tensor& t = sf.tensor(key.name);
        for (std::size_t f = 0; f < t.size(); ++f) {
            Poly p = random_homogeneous(rng, base, sf.entry_parity(key, t.unflatten(f)), po);
            if (keep(rng)) t.flat(f) = p;
        }
    }
    return normalized(sf);
}

} // namespace gv
