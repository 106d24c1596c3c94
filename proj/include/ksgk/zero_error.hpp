#ifndef KSGK_ZERO_ERROR_HPP
#define KSGK_ZERO_ERROR_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ksgk/cliques.hpp"
#include "ksgk/coloring.hpp"
#include "ksgk/constructions.hpp"
#include "ksgk/graph.hpp"

namespace ksgk {

class CoverNotFound : public GraphError {
  public:
    explicit CoverNotFound(const std::string& what) : GraphError(what) {}
};

class WStarOutOfRange : public GraphError {
  public:
    explicit WStarOutOfRange(const std::string& what) : GraphError(what) {}
};

// Partition of the vertex set into cliques of exactly claimed_size vertices.
struct CliqueCover {
    std::vector<std::vector<std::string>> parts;
    std::size_t claimed_size = 0;

    void validate(const Graph& g) const {
        std::set<std::string> seen;
        for (const auto& part : parts) {
            if (part.size() != claimed_size)
                throw CoverNotFound("cover part has wrong size");
            std::vector<std::size_t> idx;
            for (const auto& v : part) {
                if (!seen.insert(v).second) throw CoverNotFound("cover parts overlap at " + v);
                idx.push_back(g.index_of(v));
            }
            if (!g.is_clique(idx)) throw CoverNotFound("cover part is not a clique");
        }
        if (seen.size() != g.size()) throw CoverNotFound("cover does not exhaust the vertex set");
    }
};

// Exact search for a partition of V into cliques of size d, drawn from the
// maximum cliques of the graph.  Deterministic: cliques tried in sorted
// order, always covering the lexicographically first uncovered vertex.
inline std::optional<CliqueCover> find_clique_cover(const Graph& g, std::size_t d) {
    if (g.size() % d != 0) return std::nullopt;
    auto cliques = max_cliques(g);
    if (cliques.empty() || cliques.front().size() != d) return std::nullopt;

    std::vector<std::string> order = g.vertices();
    std::sort(order.begin(), order.end());
    std::set<std::string> covered;
    std::vector<std::vector<std::string>> chosen;

    std::function<bool()> rec = [&]() -> bool {
        std::string pivot;
        bool found = false;
        for (const auto& v : order)
            if (!covered.count(v)) {
                pivot = v;
                found = true;
                break;
            }
        if (!found) return true;
        for (const auto& c : cliques) {
            bool has = false, clash = false;
            for (const auto& v : c) {
                if (v == pivot) has = true;
                if (covered.count(v)) clash = true;
            }
            if (!has || clash) continue;
            for (const auto& v : c) covered.insert(v);
            chosen.push_back(c);
            if (rec()) return true;
            chosen.pop_back();
            for (const auto& v : c) covered.erase(v);
        }
        return false;
    };
    if (!rec()) return std::nullopt;
    CliqueCover cover{chosen, d};
    cover.validate(g);
    return cover;
}

// Confusability channel: graph + clique cover + distinguished inputs,
// weighted w* on the distinguished and 1 elsewhere.
struct Channel {
    Graph graph;  // carries the weights
    CliqueCover cover;
    std::vector<std::string> v_dist;
    double w_star = 1.5;
    bool v_dist_independent = false;

    std::size_t q() const { return cover.parts.size(); }
    std::size_t d() const { return cover.claimed_size; }
};

inline Channel build_channel(const GadgetBlueprint& bp, double w_star) {
    if (!(w_star > 1.0 && w_star < 2.0))
        throw WStarOutOfRange("w* must lie strictly between 1 and 2");
    const Graph& g = bp.graph;
    std::size_t omega = clique_number(g);
    auto cover = find_clique_cover(g, omega);
    if (!cover)
        throw CoverNotFound("graph admits no partition into maximum cliques; complete bases first");
    std::map<std::string, double> w;
    for (const auto& v : g.vertices()) w[v] = 1.0;
    for (const auto& v : bp.distinguished) {
        if (!g.has_vertex(v)) throw GraphError("distinguished vertex missing: " + v);
        w[v] = w_star;
    }
    Channel ch;
    ch.graph = g.with_weights(w);
    ch.cover = *cover;
    ch.v_dist = bp.distinguished;
    ch.w_star = w_star;
    std::vector<std::size_t> idx;
    for (const auto& v : ch.v_dist) idx.push_back(g.index_of(v));
    ch.v_dist_independent = g.is_independent(idx);
    return ch;
}

struct CapacityReport {
    double c_sr = 0;            // exact weighted independence
    double c_sr_formula = 0;    // alpha - 1 + w*
    bool formula_matched = false;
    double alpha = 0;           // unweighted independence number
    double c_se = 0;            // q + (w*-1)|V_dist|/d
    bool advantage = false;     // c_se > c_sr (exact)
    bool advantage_condition = false;  // |V_dist| > d
    std::vector<std::string> optimal_code;
    bool weight_accounting_ok = false;
};

// Exact weighted one-shot zero-error capacity under shared randomness.
inline double capacity_sr(const Channel& ch, std::vector<std::string>* code = nullptr) {
    auto best = weighted_independence(ch.graph);
    if (code) *code = best.members;
    return best.weight;
}

// Closed-form entanglement-assisted value of the clique-measurement protocol
// on the maximally entangled state, plus the comparison data.
inline CapacityReport capacity_se(const Channel& ch) {
    CapacityReport rep;
    rep.c_sr = capacity_sr(ch, &rep.optimal_code);
    {
        // unweighted alpha on the same graph
        std::map<std::string, double> unit;
        for (const auto& v : ch.graph.vertices()) unit[v] = 1.0;
        rep.alpha = weighted_independence(ch.graph.with_weights(unit)).weight;
    }
    rep.c_sr_formula = rep.alpha - 1.0 + ch.w_star;
    rep.formula_matched = std::abs(rep.c_sr - rep.c_sr_formula) < 1e-9;
    const double q = static_cast<double>(ch.q());
    const double d = static_cast<double>(ch.d());
    const double nd = static_cast<double>(ch.v_dist.size());
    rep.c_se = q + (ch.w_star - 1.0) * nd / d;
    rep.advantage = rep.c_se > rep.c_sr + 1e-12;
    rep.advantage_condition = nd > d;
    // weight-mass accounting: q*d inputs, total weight (qd - |Vd|) + |Vd| w*
    double mass = 0;
    for (const auto& v : ch.graph.vertices()) mass += ch.graph.weight(v);
    double want = (q * d - nd) + nd * ch.w_star;
    rep.weight_accounting_ok =
        (ch.graph.size() == ch.q() * ch.d()) && std::abs(mass - want) < 1e-9;
    return rep;
}

// The state-independent inequality sum_{v in V_dist} f(v) <= 1, checked over
// all Def-1 colorings: no coloring may set two distinguished vertices to 1.
// Works for non-independent V_dist too (adjacent pairs are vacuous).
inline bool si_inequality_holds(const Graph& g, const std::vector<std::string>& v_dist,
                                std::uint64_t budget = detail::ColoringSearch::DEFAULT_BUDGET,
                                std::pair<std::string, std::string>* witness = nullptr) {
    for (std::size_t i = 0; i < v_dist.size(); ++i) {
        for (std::size_t j = i + 1; j < v_dist.size(); ++j) {
            if (g.adjacent(v_dist[i], v_dist[j])) continue;
            detail::ColoringSearch s(g, budget);
            if (s.colorable({{v_dist[i], 1}, {v_dist[j], 1}})) {
                if (witness) *witness = {v_dist[i], v_dist[j]};
                return false;
            }
        }
    }
    return true;
}

}  // namespace ksgk

#endif
