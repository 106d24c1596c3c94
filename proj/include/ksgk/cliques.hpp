#ifndef KSGK_CLIQUES_HPP
#define KSGK_CLIQUES_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ksgk/graph.hpp"

namespace ksgk {

namespace detail {

// Fixed-width bitset over vertex indices, sized at runtime.
struct Bits {
    std::vector<std::uint64_t> w;
    explicit Bits(std::size_t nwords = 0) : w(nwords, 0) {}
    void set(std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
    void reset(std::size_t i) { w[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    bool test(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1u; }
    bool empty() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w) c += static_cast<std::size_t>(__builtin_popcountll(x));
        return c;
    }
    Bits and_with(const Bits& o) const {
        Bits r(w.size());
        for (std::size_t k = 0; k < w.size(); ++k) r.w[k] = w[k] & o.w[k];
        return r;
    }
    int lowest() const {
        for (std::size_t k = 0; k < w.size(); ++k)
            if (w[k]) return static_cast<int>(k * 64 + __builtin_ctzll(w[k]));
        return -1;
    }
};

inline std::vector<Bits> adjacency_bits(const Graph& g) {
    const std::size_t n = g.size();
    const std::size_t nw = (n + 63) / 64;
    std::vector<Bits> adj(n, Bits(nw));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && g.adjacent(i, j)) adj[i].set(j);
    return adj;
}

// Bron-Kerbosch with pivoting; reports maximal cliques as index vectors.
inline void bron_kerbosch(const std::vector<Bits>& adj, Bits R, Bits P, Bits X,
                          std::vector<std::size_t>& cur,
                          const std::function<void(const std::vector<std::size_t>&)>& sink) {
    if (P.empty() && X.empty()) {
        sink(cur);
        return;
    }
    // pivot: vertex of P∪X with most neighbours in P
    int pivot = -1;
    std::size_t best = 0;
    for (std::size_t k = 0; k < P.w.size(); ++k) {
        std::uint64_t m = P.w[k] | X.w[k];
        while (m) {
            std::size_t v = k * 64 + static_cast<std::size_t>(__builtin_ctzll(m));
            m &= m - 1;
            std::size_t c = P.and_with(adj[v]).count();
            if (pivot < 0 || c > best) {
                pivot = static_cast<int>(v);
                best = c;
            }
        }
    }
    Bits cand = P;
    if (pivot >= 0)
        for (std::size_t k = 0; k < cand.w.size(); ++k) cand.w[k] &= ~adj[pivot].w[k];
    for (int v = cand.lowest(); v >= 0; v = cand.lowest()) {
        cand.reset(v);
        Bits R2 = R;
        R2.set(v);
        cur.push_back(static_cast<std::size_t>(v));
        bron_kerbosch(adj, R2, P.and_with(adj[v]), X.and_with(adj[v]), cur, sink);
        cur.pop_back();
        P.reset(v);
        X.set(v);
    }
}

}  // namespace detail

// All maximal cliques, as sorted label lists.
inline std::vector<std::vector<std::string>> maximal_cliques(const Graph& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<std::string>> out;
    if (n == 0) return out;
    auto adj = detail::adjacency_bits(g);
    const std::size_t nw = (n + 63) / 64;
    detail::Bits P(nw), R(nw), X(nw);
    for (std::size_t i = 0; i < n; ++i) P.set(i);
    std::vector<std::size_t> cur;
    detail::bron_kerbosch(adj, R, P, X, cur, [&](const std::vector<std::size_t>& c) {
        std::vector<std::string> labels;
        labels.reserve(c.size());
        for (auto i : c) labels.push_back(g.label(i));
        std::sort(labels.begin(), labels.end());
        out.push_back(std::move(labels));
    });
    std::sort(out.begin(), out.end());
    return out;
}

// All cliques of size omega(G), each sorted by label, list sorted.
// Empty graph yields an empty list (omega = 0 by convention).
inline std::vector<std::vector<std::string>> max_cliques(const Graph& g) {
    auto all = maximal_cliques(g);
    std::size_t omega = 0;
    for (const auto& c : all) omega = std::max(omega, c.size());
    std::vector<std::vector<std::string>> out;
    for (auto& c : all)
        if (c.size() == omega) out.push_back(std::move(c));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::size_t clique_number(const Graph& g) {
    auto mc = max_cliques(g);
    return mc.empty() ? 0 : mc.front().size();
}

struct WeightedIndependentSet {
    double weight = 0.0;
    std::vector<std::string> members;  // sorted by label
};

// Exact maximum-weight independent set by branch and bound.
// Deterministic: vertices are branched in label order, include-branch first,
// and ties between optima resolve to the first set found.
inline WeightedIndependentSet weighted_independence(const Graph& g) {
    const std::size_t n = g.size();
    WeightedIndependentSet best;
    if (n == 0) return best;

    // branch order: labels ascending
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return g.label(a) < g.label(b); });

    auto adj = detail::adjacency_bits(g);
    const std::size_t nw = (n + 63) / 64;

    // suffix weight sums for the bound
    std::vector<double> suffix(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + g.weight(order[k]);

    std::vector<std::size_t> cur;
    double curw = 0.0;
    detail::Bits blocked(nw);

    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (curw > best.weight + 1e-12) {
            best.weight = curw;
            best.members.clear();
            for (auto i : cur) best.members.push_back(g.label(i));
            std::sort(best.members.begin(), best.members.end());
        }
        if (k == n) return;
        if (curw + suffix[k] <= best.weight + 1e-12) return;  // bound
        std::size_t v = order[k];
        if (!blocked.test(v)) {
            std::vector<std::size_t> newly;
            for (std::size_t j = 0; j < n; ++j)
                if (adj[v].test(j) && !blocked.test(j)) {
                    blocked.set(j);
                    newly.push_back(j);
                }
            blocked.set(v);
            cur.push_back(v);
            curw += g.weight(v);
            rec(k + 1);
            curw -= g.weight(v);
            cur.pop_back();
            blocked.reset(v);
            for (auto j : newly) blocked.reset(j);
        }
        rec(k + 1);
    };
    rec(0);
    return best;
}

inline double independence_number(const Graph& g) { return weighted_independence(g).weight; }

class NotDominating : public GraphError {
  public:
    explicit NotDominating(const std::string& what) : GraphError(what) {}
};

// Minimal subset of d_set still dominating `clique`; greedy removal in label
// order, so the result is deterministic.
inline std::vector<std::string> minimal_dominating_subset(const Graph& g,
                                                          std::vector<std::string> d_set,
                                                          const std::vector<std::string>& clique) {
    auto dominates = [&](const std::vector<std::string>& ds) {
        for (const auto& c : clique) {
            bool hit = false;
            for (const auto& d : ds)
                if (g.adjacent(c, d)) {
                    hit = true;
                    break;
                }
            if (!hit) return false;
        }
        return true;
    };
    std::sort(d_set.begin(), d_set.end());
    if (!dominates(d_set)) throw NotDominating("d_set does not dominate the clique");
    for (std::size_t i = 0; i < d_set.size();) {
        std::vector<std::string> trial = d_set;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
        if (dominates(trial))
            d_set = std::move(trial);
        else
            ++i;
    }
    return d_set;
}

}  // namespace ksgk

#endif
