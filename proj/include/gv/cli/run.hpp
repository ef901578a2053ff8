#pragma once

#include "gv/bundles/neighbors.hpp"
#include "gv/cli/document.hpp"
#include "gv/doubleverify.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gv::cli {

inline constexpr const char* tool_version = "1.0.0";

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"check-antialgebroid", "check-double", "equivalence", "neighbors",
                                               "cotangent-double",    "nfold-check",  "validate"};
    return c;
}

struct Options {
    std::string command;
    std::string input;                  // path, echoed in the report
    std::vector<std::string> conditions; // check-double: subset of I, II, III, commute
    unsigned degree = 4;
    unsigned samples = 8;
    unsigned seed = 1;
};

struct Outcome {
    int exit_code = 0;
    json report;
};

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------- rendering

inline json residual_json(const std::string& family, const std::string& index, const Poly& value) {
    return json{{"family", family}, {"index", index}, {"value", value.str()}};
}

inline json printed_json(const PrintedStatus& p) {
    return json{{"family", p.family},
                {"printed", p.printed},
                {"factor", p.factor.get_str()},
                {"exact", p.exact},
                {"agrees", p.agrees},
                {"agrees_corrected", p.agrees_corrected},
                {"engine_zero", p.engine_zero},
                {"printed_zero", p.printed_zero},
                {"flipped_terms", p.flipped}};
}

inline json check_json(const ConditionReport& r) {
    json j{{"name", r.condition}, {"pass", r.pass()}, {"residuals", json::array()}, {"notes", r.notes}};
    for (const auto& x : r.residuals) j["residuals"].push_back(residual_json(x.family, x.index, x.value));
    if (!r.printed.empty()) {
        j["printed"] = json::array();
        for (const auto& p : r.printed) j["printed"].push_back(printed_json(p));
    }
    return j;
}

inline json correspondence_json() {
    json c = json::array();
    for (const auto& x : frozen_correspondences())
        c.push_back({{"engine", x.engine},
                     {"family", x.family},
                     {"printed", x.printed},
                     {"factor", x.factor.get_str()},
                     {"representable", x.representable},
                     {"flipped_terms", x.flipped}});
    json l = json::array();
    for (const auto& x : frozen_links())
        l.push_back({{"from", x.from_engine + ":" + x.from_family},
                     {"to", x.to_engine + ":" + x.to_family},
                     {"factor", x.factor.get_str()},
                     {"permutation", x.permutation}});
    return json{{"families", c}, {"links", l}};
}

inline json implication_json(const EquivalenceReport& e) {
    return json{{"I", e.I.pass()},
                {"II", e.II.pass()},
                {"III", e.III.pass()},
                {"commute", e.commute.pass()},
                {"homological", e.homological()},
                {"mixed_bracket_vanishes", e.mixed_bracket_vanishes()},
                {"III_implies_II", e.III_implies_II()},
                {"III_iff_mixed_bracket", e.III_iff_commute()},
                {"consistent", e.consistent()}};
}

inline ConditionReport algebroid_check(const AntialgebroidData& q, const std::string& name) {
    const auto r = check_algebroid(q);
    ConditionReport out{name, {}, {}, {}, {}};
    const auto& ch = q.chart();
    for (std::size_t v = 0; v < r.homological.residual.size(); ++v)
        if (!r.homological.residual[v].is_zero())
            out.residuals.push_back({"Q^2", ch->var(v).name, r.homological.residual[v]});
    for (const auto& x : r.jacobiators)
        for (std::size_t c = 0; c < x.residual.components.size(); ++c)
            if (!x.residual.components[c].is_zero())
                out.residuals.push_back({"jacobiator", "[" + std::to_string(x.i + 1) + "," + std::to_string(x.j + 1) + "," +
                                                           std::to_string(x.k + 1) + "|" + std::to_string(c + 1) + "]",
                                         x.residual.components[c]});
    for (const auto& x : r.anchors) {
        const auto& dch = x.residual.chart();
        for (std::size_t v = 0; v < x.residual.size(); ++v)
            if (!x.residual[v].is_zero())
                out.residuals.push_back({"anchor", "[" + std::to_string(x.i + 1) + "," + std::to_string(x.j + 1) + "|" +
                                                       dch->var(v).name + "]",
                                         x.residual[v]});
    }
    return out;
}

// ---------------------------------------------------------------- commands

namespace detail {

inline std::vector<std::string> selected_conditions(const std::vector<std::string>& in) {
    static const std::vector<std::string> all = {"I", "II", "III", "commute"};
    if (in.empty()) return all;
    std::set<std::string> want;
    for (const auto& raw : in) {
        std::string c = raw;
        if (c == "all") {
            want.insert(all.begin(), all.end());
            continue;
        }
        if (c == "commutativity") c = "commute";
        if (c == "1") c = "I";
        if (c == "2") c = "II";
        if (c == "3") c = "III";
        if (std::find(all.begin(), all.end(), c) == all.end()) throw UsageError("unknown condition '" + raw + "'");
        want.insert(c);
    }
    std::vector<std::string> out;
    for (const auto& c : all)
        if (want.count(c)) out.push_back(c);
    return out;
}

inline ConditionReport run_condition(const std::string& c, const DoubleStructureFunctions& sf) {
    if (c == "I") return condition_I(sf);
    if (c == "II") return condition_II(sf);
    if (c == "III") return condition_III(sf);
    return commutativity(sf);
}

inline void add_checks(json& rep, const std::vector<ConditionReport>& checks, bool& pass) {
    for (const auto& c : checks) {
        rep["checks"].push_back(check_json(c));
        pass = pass && c.pass();
    }
}

/// Verdicts of the four checks under seeded random frame changes.
inline json frame_invariance(const DoubleStructureFunctions& sf, const EquivalenceReport& e, const Options& o) {
    json j{{"samples", o.samples}, {"seed", o.seed}, {"invariant", true}, {"changed", json::array()}};
    if (!sf.shape().is_even()) {
        j["note"] = "frame changes are sampled for purely even data only";
        j["samples"] = 0;
        return j;
    }
    Rng rng(o.seed);
    for (unsigned k = 0; k < o.samples; ++k) {
        const auto moved = equivalence_report(transform(sf, random_frame_change(rng, sf.shape())));
        if (moved.I.pass() != e.I.pass() || moved.II.pass() != e.II.pass() || moved.III.pass() != e.III.pass() ||
            moved.commute.pass() != e.commute.pass()) {
            j["invariant"] = false;
            j["changed"].push_back(k);
        }
    }
    return j;
}

} // namespace detail

inline json report_header(const Options& o) {
    json h;
    h["tool"] = "gv";
    h["version"] = tool_version;
    h["index_convention"] =
        "tensors Q[upper|lower,...]; residual indices [lower,...|upper], 1-based; polynomials in the input grammar";
    h["config"] = {{"command", o.command}, {"input", o.input},     {"conditions", o.conditions},
                   {"degree", o.degree},   {"samples", o.samples}, {"seed", o.seed}};
    h["checks"] = json::array();
    return h;
}

inline Outcome run_document(const Options& o, const Document& doc) {
    json rep = report_header(o);
    bool pass = true;
    const std::string& cmd = o.command;
    if (cmd == "validate") {
        json blocks = json::array();
        const json& r = doc.root();
        bool any = false;
        if (r.contains("A") || r.contains("B") || r.contains("core") || r.contains("Q1") || r.contains("Q2")) {
            any = true;
            const auto sf = parse_double(doc);
            for (const auto& b : tensor_blocks(sf.shape())) {
                const std::string group = tensor_key(b.key).field == 1 ? "Q1" : "Q2";
                blocks.push_back({{"key", b.key},
                                  {"field", group},
                                  {"display", b.display},
                                  {"indices", b.indices},
                                  {"shape", b.shape},
                                  {"present", r.contains(group) && r[group].contains(b.key)}});
            }
        }
        for (const char* name : {"algebroid", "QE", "QEstar"}) {
            if (!r.contains(name)) continue;
            any = true;
            const auto q = parse_algebroid(doc, name);
            blocks.push_back({{"key", std::string(name) + ".anchor"}, {"display", "Q[a|i]"},
                              {"indices", {"fiber", "base"}}, {"shape", {q.rank(), q.base_size()}}, {"present", true}});
            blocks.push_back({{"key", std::string(name) + ".structure"}, {"display", "Q[k|j,i]"},
                              {"indices", {"fiber", "fiber", "fiber"}}, {"shape", {q.rank(), q.rank(), q.rank()}},
                              {"present", true}});
        }
        if (r.contains("nfold")) {
            any = true;
            const auto in = parse_nfold(doc);
            if (in.bundle)
                for (const auto& [p, b] : in.bundle->blocks())
                    blocks.push_back({{"key", "T[" + partition_label(p) + "]"}, {"shape", b.dims}, {"present", true}});
        }
        if (!any) throw ShapeError("document", "no recognized blocks (expected A/B/core, algebroid, QE/QEstar or nfold)");
        rep["blocks"] = blocks;
        rep["diagnostics"] = json::array();
    } else if (cmd == "check-antialgebroid") {
        const std::string name = doc.has("algebroid") ? "algebroid" : "QE";
        const auto q = parse_algebroid(doc, name);
        detail::add_checks(rep, {algebroid_check(q, name)}, pass);
    } else if (cmd == "check-double") {
        const auto sf = parse_double(doc);
        std::vector<ConditionReport> checks;
        for (const auto& c : detail::selected_conditions(o.conditions)) checks.push_back(detail::run_condition(c, sf));
        detail::add_checks(rep, checks, pass);
        rep["correspondence"] = correspondence_json();
    } else if (cmd == "equivalence") {
        const auto sf = parse_double(doc);
        const auto e = equivalence_report(sf);
        detail::add_checks(rep, {e.I, e.II, e.III, e.commute}, pass);
        rep["implications"] = implication_json(e);
        rep["frame_invariance"] = detail::frame_invariance(sf, e, o);
        rep["correspondence"] = correspondence_json();
        pass = pass && e.consistent() && rep["frame_invariance"]["invariant"].get<bool>();
    } else if (cmd == "neighbors") {
        std::optional<MultipleBundle> d;
        if (doc.has("nfold")) {
            auto in = parse_nfold(doc);
            if (in.shape.n != 2) throw ShapeError("nfold.n", "neighbors needs a double (n = 2)");
            d = std::move(in.bundle);
        }
        const NeighborGraph g = d ? neighbors(*d, o.degree) : neighbor_graph();
        json nodes = json::array();
        std::size_t bearing = 0;
        bool four_valent = true;
        for (const auto& n : g.nodes) {
            json e;
            const char* names[4] = {"Pi1", "Pi2", "D1", "D2"};
            for (std::size_t k = 0; k < 4; ++k) e[names[k]] = g.nodes[n.edges[k]].label;
            json node{{"label", n.label},
                      {"sides", n.sides},
                      {"structure_bearing", n.structure_bearing},
                      {"structure", n.structure},
                      {"edges", e}};
            if (n.bundle) {
                json law;
                const auto m = n.bundle->transition_map();
                for (FamilyMask s = 1; s <= n.bundle->full_mask(); ++s)
                    for (std::size_t i = 0; i < n.bundle->rank(s); ++i)
                        law[n.bundle->coordinate(s, i, false)] = m.image(n.bundle->var_index(s, i, false)).str();
                node["transition"] = law;
            }
            bearing += n.structure_bearing ? 1 : 0;
            four_valent = four_valent && g.degree(&n - g.nodes.data()) == 4;
            nodes.push_back(node);
        }
        rep["nodes"] = nodes;
        rep["summary"] = {{"nodes", g.nodes.size()},
                          {"structure_bearing", bearing},
                          {"four_valent", four_valent},
                          {"undirected", g.undirected()}};
        pass = g.nodes.size() == 12 && bearing == 5 && four_valent && g.undirected();
    } else if (cmd == "cotangent-double") {
        BialgebroidData b{parse_algebroid(doc, "QE"), parse_algebroid(doc, "QEstar")};
        const auto ce = algebroid_check(b.e, "QE"), cs = algebroid_check(b.estar, "QEstar");
        detail::add_checks(rep, {ce, cs}, pass);
        if (pass) {
            const auto cd = cotangent_double(b);
            const auto e = equivalence_report(cd.sf);
            detail::add_checks(rep, {e.I, e.II, e.III, e.commute}, pass);
            ConditionReport h{"hamiltonian", {}, {}, {}, {}};
            if (!cd.hamiltonian_bracket.is_zero()) h.residuals.push_back({"{H_E,H_E*}", "", cd.hamiltonian_bracket});
            if (!cd.weights_ok) h.notes.push_back("a Hamiltonian field has the wrong bi-weight");
            detail::add_checks(rep, {h}, pass);
            rep["hamiltonians"] = {{"H_E", cd.h_e.str()}, {"H_E*", cd.h_estar.str()}, {"weights_ok", cd.weights_ok}};
            rep["implications"] = implication_json(e);
            pass = pass && cd.weights_ok && e.consistent();
        }
    } else if (cmd == "nfold-check") {
        const auto in = parse_nfold(doc);
        if (in.fields.empty()) throw ShapeError("nfold.fields", "nfold-check needs nfold.fields");
        detail::add_checks(rep, {nfold_check(in.chart, in.fields)}, pass);
        if (in.bundle) {
            const auto t = nfold_transition(*in.bundle);
            rep["transition"] = {{"ok", t.ok},
                                 {"problems", t.problems},
                                 {"top_block_terms", in.bundle->law_term_count(in.bundle->full_mask())}};
            pass = pass && t.ok;
        }
    } else {
        throw UsageError("unknown command '" + cmd + "'");
    }
    rep["pass"] = pass;
    return {pass ? 0 : 1, rep};
}

/// Runs a command on document text; every failure becomes a report with an exit status.
inline Outcome run(const Options& o, const std::string& text) {
    json rep = report_header(o);
    auto fail = [&](int code, json error) {
        rep["error"] = std::move(error);
        rep["pass"] = false;
        return Outcome{code, rep};
    };
    try {
        return run_document(o, Document::parse(text));
    } catch (const ParseError& e) {
        return fail(2, {{"kind", "parse"}, {"message", e.what()}, {"line", e.line()}, {"column", e.column()}});
    } catch (const NormalizationError& e) {
        return fail(2, {{"kind", "normalization"}, {"message", e.what()}, {"expression", e.expression()}});
    } catch (const UsageError& e) {
        return fail(2, {{"kind", "usage"}, {"message", e.what()}});
    } catch (const ShapeError& e) {
        return fail(3, {{"kind", "shape"}, {"message", e.what()}, {"key", e.key()}});
    } catch (const Error& e) {
        return fail(3, {{"kind", "shape"}, {"message", e.what()}, {"key", "input"}});
    }
}

} // namespace gv::cli
