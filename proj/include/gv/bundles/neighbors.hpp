#pragma once

#include "gv/bundles/double.hpp"

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gv {

enum class DoubleObject { original, dual_a, dual_b };

/// A neighbor: one of D, D^*A, D^*B with parity flags on its two sides, in
/// the orientations D = (A, B), D^*A = (A, K*), D^*B = (K*, B).
struct NeighborKey {
    DoubleObject object = DoubleObject::original;
    bool flip1 = false;
    bool flip2 = false;
    friend bool operator==(const NeighborKey&, const NeighborKey&) = default;
};

enum class NeighborOp { pi1, pi2, d1, d2 };

inline const char* op_name(NeighborOp op) {
    switch (op) {
    case NeighborOp::pi1: return "Pi1";
    case NeighborOp::pi2: return "Pi2";
    case NeighborOp::d1: return "D1";
    default: return "D2";
    }
}

inline NeighborKey apply_op(NeighborOp op, NeighborKey k) {
    const bool a = k.flip1, b = k.flip2;
    switch (op) {
    case NeighborOp::pi1: k.flip1 = !k.flip1; return k;
    case NeighborOp::pi2: k.flip2 = !k.flip2; return k;
    case NeighborOp::d1:
        switch (k.object) {
        case DoubleObject::original: return {DoubleObject::dual_a, a, a != b};
        case DoubleObject::dual_a: return {DoubleObject::original, a, a != b};
        default: return {DoubleObject::dual_a, a != b, a};
        }
    default:
        switch (k.object) {
        case DoubleObject::original: return {DoubleObject::dual_b, a != b, b};
        case DoubleObject::dual_a: return {DoubleObject::dual_b, b, a != b};
        default: return {DoubleObject::original, a != b, b};
        }
    }
}

inline std::string neighbor_label(const NeighborKey& k) {
    static const std::array<std::array<const char*, 4>, 3> labels{{
        {"D", "Pi_A D", "Pi_B D", "Pi^2 D"},
        {"D^*A", "Pi_A D^*A", "Pi_K* D^*A", "Pi^2 D^*A"},
        {"D^*B", "Pi_K* D^*B", "Pi_B D^*B", "Pi^2 D^*B"},
    }};
    return labels[static_cast<int>(k.object)][(k.flip1 ? 2 : 0) + (k.flip2 ? 1 : 0)];
}

inline std::array<std::string, 2> neighbor_sides(const NeighborKey& k) {
    std::array<std::string, 2> s;
    switch (k.object) {
    case DoubleObject::original: s = {"A", "B"}; break;
    case DoubleObject::dual_a: s = {"A", "K*"}; break;
    default: s = {"K*", "B"}; break;
    }
    if (k.flip1) s[0] = "Pi " + s[0];
    if (k.flip2) s[1] = "Pi " + s[1];
    return s;
}

inline std::string neighbor_structure(const NeighborKey& k) {
    if (k.object == DoubleObject::original && k.flip1 && k.flip2)
        return "two homological fields of weights (1,0) and (0,1); compatibility: commutativity";
    if (k.object == DoubleObject::dual_a && k.flip1 && !k.flip2)
        return "Schouten bracket of weight (-1,-1) and a homological field of weight (0,1); compatibility: derivation";
    if (k.object == DoubleObject::dual_b && !k.flip1 && k.flip2)
        return "Schouten bracket of weight (-1,-1) and a homological field of weight (1,0); compatibility: derivation";
    if (k.object == DoubleObject::dual_a && k.flip1 && k.flip2)
        return "Poisson bracket of weight (-1,-1) and a homological field of weight (0,1); compatibility: derivation";
    if (k.object == DoubleObject::dual_b && k.flip1 && k.flip2)
        return "Poisson bracket of weight (-1,-1) and a homological field of weight (1,0); compatibility: derivation";
    return {};
}

struct NeighborNode {
    NeighborKey key;
    std::string label;
    std::array<std::string, 2> sides;
    bool structure_bearing = false;
    std::string structure;
    std::array<std::size_t, 4> edges{}; // targets of Pi1, Pi2, D1, D2
    std::optional<MultipleBundle> bundle;
};

struct NeighborGraph {
    std::vector<NeighborNode> nodes;

    std::size_t index_of(const NeighborKey& k) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].key == k) return i;
        throw Error("neighbor not in graph");
    }
    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].label == label) return i;
        throw Error("unknown neighbor label '" + label + "'");
    }
    std::size_t degree(std::size_t i) const { return nodes.at(i).edges.size(); }
    // Every edge has a reverse edge of the same kind (parity or duality).
    bool undirected() const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t e = 0; e < 4; ++e) {
                const auto& back = nodes[nodes[i].edges[e]].edges;
                bool found = false;
                for (std::size_t f = (e < 2 ? 0 : 2); f < (e < 2 ? 2u : 4u); ++f)
                    if (back[f] == i) found = true;
                if (!found) return false;
            }
        return true;
    }
};

/// The twelve neighbors by closure of {Pi1, Pi2, D1, D2} from D, in breadth-first order.
inline NeighborGraph neighbor_graph() {
    NeighborGraph g;
    std::vector<NeighborKey> queue{NeighborKey{}};
    auto find = [&](const NeighborKey& k) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < queue.size(); ++i)
            if (queue[i] == k) return i;
        return std::nullopt;
    };
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (NeighborOp op : {NeighborOp::pi1, NeighborOp::pi2, NeighborOp::d1, NeighborOp::d2}) {
            auto next = apply_op(op, queue[head]);
            if (!find(next)) queue.push_back(next);
        }
    for (const auto& k : queue) {
        NeighborNode n;
        n.key = k;
        n.label = neighbor_label(k);
        n.sides = neighbor_sides(k);
        n.structure = neighbor_structure(k);
        n.structure_bearing = !n.structure.empty();
        std::size_t e = 0;
        for (NeighborOp op : {NeighborOp::pi1, NeighborOp::pi2, NeighborOp::d1, NeighborOp::d2})
            n.edges[e++] = *find(apply_op(op, k));
        g.nodes.push_back(std::move(n));
    }
    return g;
}

/// Attaches the transition data of every node, built from d by dualization
/// and reversion. Duals need an even bundle; otherwise only D's nodes get data.
inline NeighborGraph neighbors(const MultipleBundle& d, unsigned degree) {
    NeighborGraph g = neighbor_graph();
    std::optional<MultipleBundle> da, db;
    if (is_even_bundle(d)) {
        da = dualize(d, 1, degree);
        db = dualize(d, 2, degree);
    }
    for (auto& n : g.nodes) {
        const MultipleBundle* src = nullptr;
        if (n.key.object == DoubleObject::original) src = &d;
        if (n.key.object == DoubleObject::dual_a && da) src = &*da;
        if (n.key.object == DoubleObject::dual_b && db) src = &*db;
        if (!src) continue;
        MultipleBundle b = *src;
        if (n.key.flip1) b = b.reverse(1);
        if (n.key.flip2) b = b.reverse(2);
        n.bundle = std::move(b);
    }
    return g;
}

/// Applies a word such as "Pi1 Pi2 D1" right to left, starting from D.
inline std::string normalize_word(const std::string& word) {
    std::istringstream in(word);
    std::vector<std::string> ops;
    for (std::string t; in >> t;) ops.push_back(t);
    NeighborKey k;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (*it == "Pi1") k = apply_op(NeighborOp::pi1, k);
        else if (*it == "Pi2") k = apply_op(NeighborOp::pi2, k);
        else if (*it == "D1") k = apply_op(NeighborOp::d1, k);
        else if (*it == "D2") k = apply_op(NeighborOp::d2, k);
        else throw Error("unknown operation '" + *it + "' in word");
    }
    return neighbor_label(k);
}

} // namespace gv
