#pragma once

#include "gv/algebroid/antialgebroid.hpp"
#include "gv/bundles/nfold.hpp"
#include "gv/doubleverify/nfold.hpp"
#include "gv/doubleverify/structure.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gv::cli {

using json = nlohmann::ordered_json;

struct SourcePos {
    std::size_t line = 1, column = 1;
};

inline SourcePos position_of(const std::string& text, std::size_t offset) {
    SourcePos p;
    for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++p.line;
            p.column = 1;
        } else {
            ++p.column;
        }
    }
    return p;
}

namespace detail {

// Offsets of the opening quote of every string token, in document order.
inline std::vector<std::size_t> string_tokens(const std::string& text) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < text.size(); ++k) {
        if (text[k] != '"') continue;
        out.push_back(k);
        for (++k; k < text.size() && text[k] != '"'; ++k)
            if (text[k] == '\\') ++k;
    }
    return out;
}

} // namespace detail

/// Parsed JSON input with the source position of every string value.
class Document {
  public:
    static Document parse(const std::string& text) {
        Document d;
        try {
            d.root_ = json::parse(text);
        } catch (const json::parse_error& e) {
            const SourcePos p = position_of(text, e.byte > 0 ? e.byte - 1 : 0);
            std::string what = e.what();
            if (auto at = what.find("syntax error"); at != std::string::npos) what = what.substr(at);
            throw ParseError("invalid JSON: " + what, p.line, p.column);
        }
        if (!d.root_.is_object()) throw ShapeError("document", "top-level JSON value must be an object");
        const auto tokens = detail::string_tokens(text);
        std::size_t next = 0;
        bool ok = true;
        d.locate(d.root_, "", tokens, next, text, ok);
        if (!ok || next != tokens.size()) d.positions_.clear();
        return d;
    }

    const json& root() const noexcept { return root_; }
    bool has(const std::string& key) const { return root_.contains(key); }

    /// Position of the first character inside a string value.
    std::optional<SourcePos> position(const std::string& pointer) const {
        auto it = positions_.find(pointer);
        if (it == positions_.end()) return std::nullopt;
        return it->second;
    }

    /// A polynomial entry: a string in the expression grammar or an integer.
    Poly poly(const json& v, const std::string& pointer, const ChartPtr& chart, const std::string& key) const {
        if (v.is_number_integer()) return Poly::constant(chart, Scalar(std::to_string(v.get<long long>())));
        if (!v.is_string()) throw ShapeError(key, "entry " + pointer + " of " + key + " must be a string or an integer");
        const auto pos = position(pointer).value_or(SourcePos{1, 1});
        return parse_poly(v.get<std::string>(), chart, pos.line, pos.column);
    }

  private:
    void locate(const json& v, const std::string& ptr, const std::vector<std::size_t>& tokens, std::size_t& next,
                const std::string& text, bool& ok) {
        if (v.is_object()) {
            for (const auto& [key, value] : v.items()) {
                if (next >= tokens.size()) {
                    ok = false;
                    return;
                }
                ++next;
                locate(value, ptr + "/" + escape(key), tokens, next, text, ok);
            }
        } else if (v.is_array()) {
            for (std::size_t k = 0; k < v.size(); ++k) locate(v[k], ptr + "/" + std::to_string(k), tokens, next, text, ok);
        } else if (v.is_string()) {
            if (next >= tokens.size()) {
                ok = false;
                return;
            }
            positions_[ptr] = position_of(text, tokens[next++] + 1);
        }
    }
    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~') out += "~0";
            else if (c == '/') out += "~1";
            else out += c;
        }
        return out;
    }

    json root_;
    std::map<std::string, SourcePos> positions_;
};

// ---------------------------------------------------------------- primitives

inline Parity parse_parity(const json& v, const std::string& key) {
    if (v.is_number_integer()) {
        const auto k = v.get<long long>();
        if (k == 0 || k == 1) return k ? Parity::odd : Parity::even;
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "even" || s == "e" || s == "0") return Parity::even;
        if (s == "odd" || s == "o" || s == "1") return Parity::odd;
    }
    throw ShapeError(key, "parity in " + key + " must be \"even\", \"odd\", 0 or 1");
}

/// A rank (all even) or an explicit parity list.
inline std::vector<Parity> parse_parities(const json& v, const std::string& key) {
    std::vector<Parity> out;
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
        out.assign(v.get<std::size_t>(), Parity::even);
        return out;
    }
    if (!v.is_array()) throw ShapeError(key, key + " must be a rank or a list of parities");
    for (const auto& p : v) out.push_back(parse_parity(p, key));
    return out;
}

inline std::vector<Variable> parse_base(const json& v, const std::string& key = "base") {
    std::vector<Variable> out;
    if (!v.is_array()) throw ShapeError(key, key + " must be a list of coordinates");
    for (const auto& e : v) {
        if (e.is_string()) {
            out.push_back({e.get<std::string>(), Parity::even, {}});
        } else if (e.is_object() && e.contains("name") && e["name"].is_string()) {
            out.push_back({e["name"].get<std::string>(), e.contains("parity") ? parse_parity(e["parity"], key) : Parity::even, {}});
        } else {
            throw ShapeError(key, "each coordinate in " + key + " is a name or {\"name\", \"parity\"}");
        }
    }
    return out;
}

inline std::vector<Variable> document_base(const Document& d) {
    return d.has("base") ? parse_base(d.root()["base"]) : std::vector<Variable>{};
}

inline std::string shape_string(const std::vector<std::size_t>& dims) {
    std::string s = "[";
    for (std::size_t k = 0; k < dims.size(); ++k) s += (k ? "x" : "") + std::to_string(dims[k]);
    return s + "]";
}

/// Reads a dense nested array or a sparse {"i,j,...": entry} object (1-based)
/// into a flat row-major list.
inline std::vector<Poly> parse_block(const Document& doc, const json& v, const std::string& pointer,
                                     const std::vector<std::size_t>& dims, const ChartPtr& chart, const std::string& key) {
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    std::vector<Poly> out(total, Poly(chart));
    auto flat = [&](const std::vector<std::size_t>& idx) {
        std::size_t k = 0;
        for (std::size_t r = 0; r < dims.size(); ++r) k = k * dims[r] + idx[r];
        return k;
    };
    if (v.is_object()) {
        for (const auto& [label, entry] : v.items()) {
            std::vector<std::size_t> idx;
            std::size_t at = 0;
            while (at <= label.size()) {
                const std::size_t comma = std::min(label.find(',', at), label.size());
                const std::string part = label.substr(at, comma - at);
                if (part.empty() || part.find_first_not_of("0123456789 ") != std::string::npos)
                    throw ShapeError(key, "sparse index '" + label + "' of " + key + " is not a comma-separated list of integers");
                idx.push_back(std::stoul(part));
                at = comma + 1;
            }
            if (idx.size() != dims.size())
                throw ShapeError(key, key + " entry '" + label + "' has " + std::to_string(idx.size()) + " indices, expected " +
                                          std::to_string(dims.size()) + " (shape " + shape_string(dims) + ")");
            for (std::size_t r = 0; r < dims.size(); ++r)
                if (idx[r] < 1 || idx[r] > dims[r])
                    throw ShapeError(key, key + " entry '" + label + "' is outside the shape " + shape_string(dims));
            for (auto& i : idx) --i;
            out[flat(idx)] = doc.poly(entry, pointer + "/" + label, chart, key);
        }
        return out;
    }
    std::vector<std::size_t> idx;
    auto walk = [&](auto&& self, const json& node, const std::string& ptr) -> void {
        const std::size_t depth = idx.size();
        if (depth == dims.size()) {
            out[flat(idx)] = doc.poly(node, ptr, chart, key);
            return;
        }
        if (!node.is_array() || node.size() != dims[depth])
            throw ShapeError(key, key + " has the wrong shape at " + (ptr.empty() ? std::string("/") : ptr) + ": expected " +
                                      shape_string(dims) + " (level " + std::to_string(depth + 1) + " has length " +
                                      std::to_string(dims[depth]) + ")");
        for (std::size_t k = 0; k < node.size(); ++k) {
            idx.push_back(k);
            self(self, node[k], ptr + "/" + std::to_string(k));
            idx.pop_back();
        }
    };
    walk(walk, v, pointer);
    return out;
}

// ---------------------------------------------------------------- doubles

inline std::vector<std::size_t> tensor_dims(const TensorKey& key, const DoubleShape& s) {
    std::vector<std::size_t> d;
    for (auto k : key.lower) d.push_back(s.range(k));
    d.push_back(s.range(key.upper));
    return d;
}

/// "Q[beta|alpha,i]": upper index, then the lower ones.
inline std::string tensor_display(const TensorKey& key) {
    const std::string sym = key.symbol;
    const auto under = sym.find('_'), hat = sym.find('^');
    std::string lower = sym.substr(under + 1, hat - under - 1), upper = sym.substr(hat + 1);
    if (lower.find(',') == std::string::npos && key.lower.size() > 1) {
        std::string split;
        for (std::size_t k = 0; k < lower.size(); ++k) split += (k ? "," : "") + lower.substr(k, 1);
        lower = split;
    }
    return "Q[" + upper + "|" + lower + "]";
}

inline DoubleShape parse_double_shape(const Document& d) {
    DoubleShape s;
    s.base = document_base(d);
    const json& r = d.root();
    for (const auto& [name, field] : {std::pair{"A", &s.a}, std::pair{"B", &s.b}, std::pair{"core", &s.k}}) {
        if (!r.contains(name)) throw ShapeError(name, std::string("missing side '") + name + "'");
        *field = parse_parities(r[name], name);
    }
    return s;
}

inline DoubleStructureFunctions parse_double(const Document& d) {
    DoubleStructureFunctions sf(parse_double_shape(d));
    const json& r = d.root();
    for (const auto& [group, field] : {std::pair{"Q1", 1}, std::pair{"Q2", 2}}) {
        if (!r.contains(group)) continue;
        if (!r[group].is_object()) throw ShapeError(group, std::string(group) + " must be an object of tensor blocks");
        for (const auto& [name, value] : r[group].items()) {
            const TensorKey& key = tensor_key(name);
            if (key.field != field)
                throw ShapeError(name, "tensor block " + name + " belongs to Q" + std::to_string(key.field) + ", not " + group);
            const auto dims = tensor_dims(key, sf.shape());
            const auto entries = parse_block(d, value, std::string("/") + group + "/" + name, dims, sf.charts().base, name);
            Tensor& t = sf.tensor(name);
            for (std::size_t f = 0; f < entries.size(); ++f) {
                const auto idx = t.unflatten(f);
                const Parity want = sf.entry_parity(key, idx);
                const auto got = entries[f].parity();
                if (!entries[f].is_zero() && (!got || *got != want))
                    throw ShapeError(name, name + DoubleStructureFunctions::label(idx) + " = " + entries[f].str() +
                                               " has the wrong parity (expected " + (is_odd(want) ? "odd" : "even") + ")");
                t.flat(f) = entries[f];
            }
        }
    }
    return normalized(sf);
}

// ---------------------------------------------------------------- algebroids

/// {"fiber": parities, "anchor": [rank][base] Q_i^a, "structure": [rank][rank][rank] Q_ji^k}.
inline AntialgebroidData parse_algebroid(const Document& d, const std::string& name) {
    const json& r = d.root();
    if (!r.contains(name)) throw ShapeError(name, "missing algebroid block '" + name + "'");
    const json& b = r[name];
    if (!b.is_object()) throw ShapeError(name, name + " must be an object");
    std::vector<Variable> base = b.contains("base") ? parse_base(b["base"], name + ".base") : document_base(d);
    if (!b.contains("fiber")) throw ShapeError(name + ".fiber", "missing " + name + ".fiber");
    AntialgebroidData q(base, parse_parities(b["fiber"], name + ".fiber"));
    const std::size_t n = q.base_size(), rk = q.rank();
    const std::string ptr = "/" + name;
    if (b.contains("anchor")) {
        const auto e = parse_block(d, b["anchor"], ptr + "/anchor", {rk, n}, q.base(), name + ".anchor");
        for (std::size_t i = 0; i < rk; ++i)
            for (std::size_t a = 0; a < n; ++a) q.set_anchor(i, a, e[i * n + a]);
    }
    if (b.contains("structure")) {
        const auto e = parse_block(d, b["structure"], ptr + "/structure", {rk, rk, rk}, q.base(), name + ".structure");
        for (std::size_t j = 0; j < rk; ++j)
            for (std::size_t i = 0; i < rk; ++i)
                for (std::size_t k = 0; k < rk; ++k) q.set_structure(j, i, k, e[(j * rk + i) * rk + k]);
    }
    for (const auto& [key, value] : b.items())
        if (key != "base" && key != "fiber" && key != "anchor" && key != "structure")
            throw ShapeError(name + "." + key, "unknown field '" + key + "' in " + name);
    const auto f = q.field();
    if (!f.parity() || *f.parity() != Parity::odd) {
        if (!f.is_zero()) throw ShapeError(name, name + " entries have the wrong parities for an odd field");
    }
    return q.normalized();
}

// ---------------------------------------------------------------- n-fold

inline FamilyMask parse_mask(const std::string& digits, std::size_t n, const std::string& key) {
    FamilyMask m = 0;
    for (char c : digits) {
        if (c < '1' || c > char('0' + n)) throw ShapeError(key, "'" + digits + "' is not a subset of 1.." + std::to_string(n));
        const FamilyMask bitm = FamilyMask(1) << (c - '1');
        if (m & bitm) throw ShapeError(key, "'" + digits + "' repeats a direction");
        m |= bitm;
    }
    if (!m) throw ShapeError(key, "empty direction set");
    return m;
}

struct NFoldInput {
    NFoldShape shape;
    ChartPtr chart;
    std::vector<Derivation> fields;
    std::optional<MultipleBundle> bundle;
};

/// {"n", "families": {"1": parities, "12": ...}, "fields": [{coordinate: entry}, ...],
///  "transition": {"1|23": flat entries, ...}}.
inline NFoldInput parse_nfold(const Document& d) {
    const json& r = d.root();
    if (!r.contains("nfold") || !r["nfold"].is_object()) throw ShapeError("nfold", "missing nfold block");
    const json& b = r["nfold"];
    if (!b.contains("n") || !b["n"].is_number_unsigned()) throw ShapeError("nfold.n", "nfold.n must be a positive integer");
    NFoldInput in;
    in.shape.n = b["n"].get<std::size_t>();
    if (in.shape.n < 1 || in.shape.n > 6) throw ShapeError("nfold.n", "nfold.n must be between 1 and 6");
    in.shape.base = document_base(d);
    in.shape.families.assign(std::size_t(1) << in.shape.n, {});
    if (b.contains("families")) {
        if (!b["families"].is_object()) throw ShapeError("nfold.families", "nfold.families must be an object");
        for (const auto& [digits, value] : b["families"].items())
            in.shape.families[parse_mask(digits, in.shape.n, "nfold.families")] = parse_parities(value, "nfold.families." + digits);
    }
    in.chart = nfold_chart(in.shape);
    const std::size_t n = in.shape.n;
    if (b.contains("fields")) {
        const json& fs = b["fields"];
        if (!fs.is_array() || fs.size() != n)
            throw ShapeError("nfold.fields", "nfold.fields must list exactly " + std::to_string(n) + " fields");
        for (std::size_t q = 0; q < n; ++q) {
            const std::string key = field_label(q);
            Derivation x(in.chart);
            if (!fs[q].is_object()) throw ShapeError(key, key + " must map coordinates to entries");
            for (const auto& [coord, entry] : fs[q].items()) {
                const auto v = in.chart->find(coord);
                if (!v) throw ShapeError(key, key + " names the unknown coordinate '" + coord + "'");
                x.set(*v, d.poly(entry, "/nfold/fields/" + std::to_string(q) + "/" + coord, in.chart, key));
            }
            in.fields.push_back(std::move(x));
        }
    }
    if (b.contains("transition")) {
        if (!b["transition"].is_object()) throw ShapeError("nfold.transition", "nfold.transition must be an object");
        MultipleBundle shell(n, in.shape.base, in.shape.families);
        BlockEntries blocks;
        for (const auto& [label, value] : b["transition"].items()) {
            const std::string key = "T[" + label + "]";
            Partition p;
            std::size_t at = 0;
            while (at <= label.size()) {
                const std::size_t bar = std::min(label.find('|', at), label.size());
                p.push_back(parse_mask(label.substr(at, bar - at), n, key));
                at = bar + 1;
            }
            std::sort(p.begin(), p.end(), block_less);
            auto it = shell.blocks().find(p);
            if (it == shell.blocks().end()) throw ShapeError(key, "no such partition block " + key);
            const auto& dims = it->second.dims;
            blocks[p] = parse_block(d, value, "/nfold/transition/" + label, dims, shell.base_chart(),
                                    "T[" + partition_label(p) + "]");
        }
        std::vector<std::vector<Parity>> fam = in.shape.families;
        in.bundle = nfold_bundle(n, in.shape.base, fam, blocks);
    }
    return in;
}

// ---------------------------------------------------------------- validation

struct BlockSummary {
    std::string key;
    std::string display;
    std::vector<std::string> indices;
    std::vector<std::size_t> shape;
};

inline std::string kind_name(IndexKind k) {
    switch (k) {
    case IndexKind::base: return "base";
    case IndexKind::a: return "A";
    case IndexKind::b: return "B";
    case IndexKind::k: return "core";
    }
    return "";
}

/// Every tensor block a double document may carry, with inferred index ranges.
inline std::vector<BlockSummary> tensor_blocks(const DoubleShape& s) {
    std::vector<BlockSummary> out;
    for (const auto& key : tensor_keys()) {
        BlockSummary b{key.name, tensor_display(key), {}, tensor_dims(key, s)};
        for (auto k : key.lower) b.indices.push_back(kind_name(k));
        b.indices.push_back(kind_name(key.upper));
        out.push_back(std::move(b));
    }
    return out;
}

} // namespace gv::cli
