#ifndef KSGK_JSON_IO_HPP
#define KSGK_JSON_IO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "ksgk/binary_box.hpp"
#include "ksgk/coloring.hpp"
#include "ksgk/constructions.hpp"
#include "ksgk/graph.hpp"
#include "ksgk/vectors.hpp"
#include "ksgk/zero_error.hpp"

namespace ksgk {

using json = nlohmann::json;

// ---- Graph: {"vertices": [...], "edges": [["a","b"],...], "weights": {...}}

inline json graph_to_json(const Graph& g) {
    json j;
    j["vertices"] = g.vertices();
    json edges = json::array();
    for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
    j["edges"] = edges;
    if (g.weighted()) {
        json w = json::object();
        for (const auto& v : g.vertices()) w[v] = g.weight(v);
        j["weights"] = w;
    }
    return j;
}

inline Graph graph_from_json(const json& j) {
    std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0), e.at(1));
    std::map<std::string, double> weights;
    if (j.contains("weights"))
        for (auto it = j["weights"].begin(); it != j["weights"].end(); ++it)
            weights[it.key()] = it.value().get<double>();
    return Graph(vertices, edges, weights);
}

// ---- Vectors: {"dimension": d, "tolerance": eps,
//                "vectors": {"m1": [[re,im],...] or [re,...], ...}}

inline json vectors_to_json(const VectorSet& vs) {
    json j;
    j["dimension"] = vs.dimension();
    j["tolerance"] = vs.tolerance();
    json m = json::object();
    for (const auto& l : vs.labels()) {
        json arr = json::array();
        bool real = true;
        for (const auto& z : vs.at(l))
            if (z.imag() != 0.0) real = false;
        for (const auto& z : vs.at(l)) {
            if (real)
                arr.push_back(z.real());
            else
                arr.push_back({z.real(), z.imag()});
        }
        m[l] = arr;
    }
    j["vectors"] = m;
    return j;
}

inline VectorSet vectors_from_json(const json& j) {
    VectorSet vs(j.at("dimension").get<std::size_t>(),
                 j.value("tolerance", 1e-9));
    const auto& m = j.at("vectors");
    for (auto it = m.begin(); it != m.end(); ++it) {
        Vec v;
        for (const auto& entry : it.value()) {
            if (entry.is_array())
                v.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
            else
                v.emplace_back(entry.get<double>(), 0.0);
        }
        vs.add(it.key(), std::move(v));
    }
    return vs;
}

// ---- Colorings / certificates

inline json coloring_to_json(const Coloring& f) {
    json j = json::object();
    for (const auto& [v, b] : f.assignment) j[v] = b;
    return j;
}

inline json certificate_to_json(const GadgetCertificate& c) {
    json j;
    j["kind"] = c.kind == GadgetCertificate::Kind::Order ? "order" : "forbidden";
    j["distinguished"] = c.distinguished;
    j["m"] = c.order_m;
    if (c.kind == GadgetCertificate::Kind::Order) j["k"] = c.order_k;
    if (c.kind == GadgetCertificate::Kind::Forbidden)
        j["forbidden"] = std::vector<std::string>(c.forbidden.begin(), c.forbidden.end());
    j["achievable"] = std::vector<std::string>(c.achievable.begin(), c.achievable.end());
    json w = json::object();
    for (const auto& [pat, f] : c.witnesses) w[pat] = coloring_to_json(f);
    j["witnesses"] = w;
    j["pass"] = c.pass;
    if (!c.pass) j["offending_pattern"] = c.offending_pattern;
    j["dimension_note"] = c.dimension_note;
    return j;
}

inline json faithfulness_to_json(const FaithfulnessReport& r) {
    json j;
    j["faithful"] = r.faithful();
    json miss = json::array(), spur = json::array(), par = json::array();
    for (const auto& [a, b] : r.missing_edges) miss.push_back({a, b});
    for (const auto& s : r.spurious_edges) spur.push_back({{"pair", {s.a, s.b}}, {"residual", s.residual}});
    for (const auto& [a, b] : r.parallel_pairs) par.push_back({a, b});
    j["missing_edges"] = miss;
    j["spurious_edges"] = spur;
    j["parallel_pairs"] = par;
    return j;
}

inline json blueprint_to_json(const GadgetBlueprint& bp) {
    json j;
    j["vectors"] = vectors_to_json(bp.vectors);
    j["graph"] = graph_to_json(bp.graph);
    j["distinguished"] = bp.distinguished;
    j["parameters"] = bp.parameters;
    if (!bp.merged_labels.empty()) j["merged_labels"] = bp.merged_labels;
    if (!bp.parallel_warnings.empty()) {
        json par = json::array();
        for (const auto& [a, b] : bp.parallel_warnings) par.push_back({a, b});
        j["parallel_warnings"] = par;
    }
    if (!bp.notes.empty()) j["notes"] = bp.notes;
    return j;
}

inline json capacity_to_json(const CapacityReport& r) {
    json j;
    j["c_sr"] = r.c_sr;
    j["c_sr_formula"] = r.c_sr_formula;
    j["formula_matched"] = r.formula_matched;
    j["alpha"] = r.alpha;
    j["c_se"] = r.c_se;
    j["advantage"] = r.advantage;
    j["advantage_condition_vdist_gt_d"] = r.advantage_condition;
    j["optimal_code"] = r.optimal_code;
    j["weight_accounting_ok"] = r.weight_accounting_ok;
    return j;
}

inline json box_to_json(const ConsistentBox& box, const ContextSet& ctx) {
    json j = json::object();
    for (const auto& [key, val] : box.table(ctx)) {
        j[std::to_string(key.first) + ":" + key.second] = val.str();
    }
    return j;
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace ksgk

#endif
