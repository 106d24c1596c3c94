#ifndef KSGK_COLORING_HPP
#define KSGK_COLORING_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ksgk/cliques.hpp"
#include "ksgk/graph.hpp"
#include "ksgk/vectors.hpp"

namespace ksgk {

class InvalidDistinguished : public GraphError {
  public:
    explicit InvalidDistinguished(const std::string& what) : GraphError(what) {}
};

class BudgetExceeded : public GraphError {
  public:
    explicit BudgetExceeded(const std::string& what) : GraphError(what) {}
};

class NotKS : public GraphError {
  public:
    explicit NotKS(const std::string& what) : GraphError(what) {}
};

// {0,1} assignment: at most one 1 per clique, exactly one 1 per maximum clique.
struct Coloring {
    std::map<std::string, int> assignment;

    int at(const std::string& v) const {
        auto it = assignment.find(v);
        return it == assignment.end() ? 0 : it->second;
    }
};

// Checks both Def-1 rules directly against the given graph.
inline bool coloring_valid(const Graph& g, const Coloring& f,
                           const std::vector<std::vector<std::string>>& maxcl) {
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            if (g.adjacent(i, j) && f.at(g.label(i)) == 1 && f.at(g.label(j)) == 1) return false;
    for (const auto& c : maxcl) {
        int ones = 0;
        for (const auto& v : c) ones += f.at(v);
        if (ones != 1) return false;
    }
    return true;
}

inline bool coloring_valid(const Graph& g, const Coloring& f) {
    return coloring_valid(g, f, max_cliques(g));
}

namespace detail {

// Greedy backtracking over maximum cliques (the colorability decision
// procedure).  Cliques are visited in lexicographic order (equivalently by
// smallest member label), vertices within a clique in label order, so runs
// are reproducible.
class ColoringSearch {
  public:
    ColoringSearch(const Graph& g, std::uint64_t budget = DEFAULT_BUDGET)
        : g_(g), budget_(budget) {
        cliques_ = max_cliques(g);
        clique_idx_.resize(cliques_.size());
        for (std::size_t c = 0; c < cliques_.size(); ++c)
            for (const auto& v : cliques_[c]) clique_idx_[c].push_back(g.index_of(v));
        state_.assign(g.size(), UNSET);
        adj_ = adjacency_bits(g);
    }

    static constexpr std::uint64_t DEFAULT_BUDGET = 200'000'000;

    // pins: forced values on some vertices.  Returns a full coloring if one
    // extends the pins, otherwise nullopt.
    std::optional<Coloring> solve(const std::map<std::string, int>& pins) {
        reset();
        if (!apply_pins(pins) || !propagate()) return std::nullopt;
        if (!rec(0)) return std::nullopt;
        return snapshot();
    }

    bool colorable(const std::map<std::string, int>& pins = {}) {
        reset();
        if (!apply_pins(pins) || !propagate()) return false;
        return rec(0);
    }

    // Runs the greedy search until the first clique with no assignable vertex
    // is met (the graph must be uncolorable for this to be meaningful).
    // Returns (stuck clique, set of 1-valued vertices at that moment).
    std::optional<std::pair<std::vector<std::string>, std::vector<std::string>>> first_stuck() {
        reset();
        stuck_.reset();
        record_stuck_ = true;
        rec(0);
        record_stuck_ = false;
        return stuck_;
    }

    std::uint64_t nodes() const { return nodes_; }
    const std::vector<std::vector<std::string>>& cliques() const { return cliques_; }

  private:
    enum : signed char { UNSET = -1, ZERO = 0, ONE = 1 };

    void reset() {
        std::fill(state_.begin(), state_.end(), UNSET);
        trail_.clear();
    }

    bool apply_pins(const std::map<std::string, int>& pins) {
        for (const auto& [v, b] : pins) {
            std::size_t i = g_.index_of(v);
            if (b == 1) {
                if (state_[i] == ZERO) return false;
                if (state_[i] == ONE) continue;
                if (!can_be_one(i)) return false;
                assign_one(i);
            } else {
                if (state_[i] == ONE) return false;
                state_[i] = ZERO;
            }
        }
        return true;
    }

    bool can_be_one(std::size_t v) const {
        for (std::size_t j = 0; j < g_.size(); ++j)
            if (adj_[v].test(j) && state_[j] == ONE) return false;
        return true;
    }

    void assign_one(std::size_t v) {
        state_[v] = ONE;
        trail_.push_back({v, true});
        for (std::size_t j = 0; j < g_.size(); ++j)
            if (adj_[v].test(j) && state_[j] == UNSET) {
                state_[j] = ZERO;
                trail_.push_back({j, false});
            }
    }

    // Forward checking with unit propagation over the maximum cliques:
    // an unsatisfied clique with no assignable vertex is a dead end, one
    // with a single assignable vertex forces it.  Skipped when recording the
    // stuck event, which is defined by the plain greedy execution.
    bool propagate() {
        bool again = true;
        while (again) {
            again = false;
            for (std::size_t c = 0; c < clique_idx_.size(); ++c) {
                bool has_one = false;
                std::size_t unset = 0, last = 0;
                for (auto v : clique_idx_[c]) {
                    if (state_[v] == ONE) {
                        has_one = true;
                        break;
                    }
                    if (state_[v] == UNSET) {
                        ++unset;
                        last = v;
                    }
                }
                if (has_one) continue;
                if (unset == 0) return false;
                if (unset == 1) {
                    assign_one(last);  // UNSET implies no ONE neighbour
                    again = true;
                }
            }
        }
        return true;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [v, was_one] = trail_.back();
            trail_.pop_back();
            state_[v] = UNSET;
            (void)was_one;
        }
    }

    bool rec(std::size_t ci) {
        if (++nodes_ > budget_) throw BudgetExceeded("coloring search budget exceeded");
        if (record_stuck_ && stuck_) return false;  // stuck event found; unwind
        if (ci == cliques_.size()) return true;
        const auto& C = clique_idx_[ci];
        for (auto v : C)
            if (state_[v] == ONE) return rec(ci + 1);
        bool any = false;
        for (auto v : C) {
            if (state_[v] != UNSET) continue;  // ZERO-forced vertices cannot take 1
            if (!can_be_one(v)) continue;      // pinned ONE neighbours
            any = true;
            std::size_t mark = trail_.size();
            assign_one(v);
            bool ok = record_stuck_ ? true : propagate();
            if (ok && rec(ci + 1)) return true;
            undo_to(mark);
            if (record_stuck_ && stuck_) return false;
        }
        if (!any && record_stuck_ && !stuck_) {
            std::vector<std::string> ones;
            for (std::size_t i = 0; i < g_.size(); ++i)
                if (state_[i] == ONE) ones.push_back(g_.label(i));
            std::sort(ones.begin(), ones.end());
            stuck_ = std::make_pair(cliques_[ci], ones);
        }
        return false;
    }

    Coloring snapshot() const {
        Coloring f;
        for (std::size_t i = 0; i < g_.size(); ++i)
            f.assignment[g_.label(i)] = (state_[i] == ONE) ? 1 : 0;
        return f;
    }

    const Graph& g_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<std::vector<std::string>> cliques_;
    std::vector<std::vector<std::size_t>> clique_idx_;
    std::vector<signed char> state_;
    std::vector<std::pair<std::size_t, bool>> trail_;
    std::vector<Bits> adj_;
    bool record_stuck_ = false;
    std::optional<std::pair<std::vector<std::string>, std::vector<std::string>>> stuck_;
};

}  // namespace detail

// SUCCESS -> a valid coloring (vertices not forced to 1 are 0);
// FAILURE -> nullopt (UNCOLORABLE).
inline std::optional<Coloring> find_coloring(
    const Graph& g, std::uint64_t budget = detail::ColoringSearch::DEFAULT_BUDGET) {
    detail::ColoringSearch s(g, budget);
    return s.solve({});
}

struct PatternSet {
    std::vector<std::string> distinguished;        // the ordered set I
    std::set<std::string> patterns;                // achievable bitstrings over I
    std::map<std::string, Coloring> witnesses;     // pattern -> one witness
};

// Exact set { f(I) : f a valid Def-1 coloring }, by backtracking over the
// 2^m pattern branches.  Raises BudgetExceeded instead of silently returning
// a partial answer.
inline PatternSet enumerate_patterns(
    const Graph& g, const std::vector<std::string>& distinguished,
    std::uint64_t budget = detail::ColoringSearch::DEFAULT_BUDGET) {
    for (const auto& v : distinguished) g.index_of(v);
    {
        std::vector<std::size_t> idx;
        for (const auto& v : distinguished) idx.push_back(g.index_of(v));
        std::set<std::size_t> uniq(idx.begin(), idx.end());
        if (uniq.size() != idx.size())
            throw InvalidDistinguished("distinguished vertices are not distinct");
        if (!g.is_independent(idx))
            throw InvalidDistinguished("distinguished set is not independent");
    }
    PatternSet out;
    out.distinguished = distinguished;
    const std::size_t m = distinguished.size();
    detail::ColoringSearch s(g, budget);
    std::uint64_t used = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::map<std::string, int> pins;
        std::string pat(m, '0');
        for (std::size_t k = 0; k < m; ++k) {
            int bit = (mask >> k) & 1;
            pins[distinguished[k]] = bit;
            pat[k] = static_cast<char>('0' + bit);
        }
        detail::ColoringSearch trial(g, budget - used);
        auto f = trial.solve(pins);
        used += trial.nodes();
        if (used > budget) throw BudgetExceeded("pattern enumeration budget exceeded");
        if (f) {
            out.patterns.insert(pat);
            out.witnesses.emplace(pat, *f);
        }
    }
    (void)s;
    return out;
}

struct GadgetCertificate {
    enum class Kind { Order, Forbidden };
    Kind kind = Kind::Order;
    std::vector<std::string> distinguished;
    std::size_t order_m = 0, order_k = 0;          // Order kind
    std::set<std::string> forbidden;               // Forbidden kind
    std::set<std::string> achievable;
    std::map<std::string, Coloring> witnesses;
    bool pass = false;
    std::string offending_pattern;                 // set when pass == false
    std::string dimension_note;                    // d*(G)=omega(G)=d status
};

namespace detail {
inline std::size_t pattern_ones(const std::string& p) {
    return static_cast<std::size_t>(std::count(p.begin(), p.end(), '1'));
}
}  // namespace detail

// Order-(m,k) gadget check per the graph definition: every subset of I with
// size <= k is simultaneously 1-colorable, and no coloring puts more than k
// ones on I.  The faithful-dimension condition is checked only when vectors
// accompany the graph.
inline GadgetCertificate verify_order_gadget(
    const Graph& g, const std::vector<std::string>& distinguished, std::size_t k,
    const VectorSet* vs = nullptr,
    std::uint64_t budget = detail::ColoringSearch::DEFAULT_BUDGET) {
    const std::size_t m = distinguished.size();
    if (k < 1 || k >= m) throw InvalidDistinguished("need 1 <= k < |distinguished|");
    auto ps = enumerate_patterns(g, distinguished, budget);

    GadgetCertificate cert;
    cert.kind = GadgetCertificate::Kind::Order;
    cert.distinguished = distinguished;
    cert.order_m = m;
    cert.order_k = k;
    cert.achievable = ps.patterns;
    cert.witnesses = ps.witnesses;
    cert.pass = true;

    for (const auto& p : ps.patterns) {
        if (detail::pattern_ones(p) > k) {
            cert.pass = false;
            cert.offending_pattern = p;
            break;
        }
    }
    if (cert.pass) {
        // every subset of size <= k must be extendable to all-ones on it
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            std::size_t ones = static_cast<std::size_t>(__builtin_popcount(mask));
            if (ones == 0 || ones > k) continue;
            bool witnessed = false;
            for (const auto& p : ps.patterns) {
                bool covers = true;
                for (std::size_t b = 0; b < m; ++b)
                    if ((mask >> b) & 1 && p[b] != '1') {
                        covers = false;
                        break;
                    }
                if (covers) {
                    witnessed = true;
                    break;
                }
            }
            if (!witnessed) {
                cert.pass = false;
                std::string want(m, '0');
                for (std::size_t b = 0; b < m; ++b)
                    if ((mask >> b) & 1) want[b] = '1';
                cert.offending_pattern = want;  // subset with no witness
                break;
            }
        }
    }
    if (vs) {
        auto rep = check_faithful(*vs, g);
        std::size_t omega = clique_number(g);
        if (rep.faithful() && omega == vs->dimension())
            cert.dimension_note = "verified: faithful representation in dimension " +
                                  std::to_string(vs->dimension()) + " with omega == d";
        else
            cert.dimension_note = "checked, not satisfied: faithful=" +
                                  std::string(rep.faithful() ? "yes" : "no") +
                                  ", omega=" + std::to_string(omega) + ", d=" +
                                  std::to_string(vs->dimension());
    } else {
        cert.dimension_note = "not verified (no vector set supplied)";
    }
    return cert;
}

// Forbidden-set gadget check: PASS iff achievable patterns avoid H entirely.
// H need not be exactly matched; unreachable non-forbidden patterns are
// simply reported absent from `achievable`.
inline GadgetCertificate verify_forbidden_gadget(
    const Graph& g, const std::vector<std::string>& distinguished,
    const std::set<std::string>& forbidden, const VectorSet* vs = nullptr,
    std::uint64_t budget = detail::ColoringSearch::DEFAULT_BUDGET) {
    const std::size_t m = distinguished.size();
    if (forbidden.empty()) throw InvalidDistinguished("forbidden set must be nonempty");
    for (const auto& p : forbidden)
        if (p.size() != m) throw InvalidDistinguished("pattern arity mismatch: " + p);
    auto ps = enumerate_patterns(g, distinguished, budget);

    GadgetCertificate cert;
    cert.kind = GadgetCertificate::Kind::Forbidden;
    cert.distinguished = distinguished;
    cert.order_m = m;
    cert.forbidden = forbidden;
    cert.achievable = ps.patterns;
    cert.witnesses = ps.witnesses;
    cert.pass = true;
    for (const auto& p : ps.patterns)
        if (forbidden.count(p)) {
            cert.pass = false;
            cert.offending_pattern = p;
            break;
        }
    if (vs) {
        auto rep = check_faithful(*vs, g);
        cert.dimension_note = rep.faithful() ? "faithful representation supplied"
                                             : "supplied representation not faithful";
    } else {
        cert.dimension_note = "not verified (no vector set supplied)";
    }
    return cert;
}

struct ExtractedGadget {
    Graph subgraph;                        // induced on distinguished + clique
    std::vector<std::string> distinguished;  // the minimal dominating set D'
    std::vector<std::string> dominated_clique;
    std::size_t order_k = 0;               // |D'|; gadget order (k, k-1)
};

// Runs the greedy coloring until it first gets stuck on a clique C_j, takes
// the 1-valued dominating set at that moment, minimizes it, and returns the
// induced subgraph on D' u C_j.
inline ExtractedGadget extract_gadget(
    const Graph& g, std::uint64_t budget = detail::ColoringSearch::DEFAULT_BUDGET) {
    detail::ColoringSearch s(g, budget);
    if (s.colorable()) throw NotKS("graph is {0,1}-colorable");
    detail::ColoringSearch s2(g, budget);
    auto stuck = s2.first_stuck();
    if (!stuck) throw NotKS("no stuck clique found");  // cannot happen when uncolorable
    const auto& [clique, ones] = *stuck;

    // keep only the 1-valued vertices adjacent to the stuck clique
    std::vector<std::string> dominating;
    for (const auto& w : ones) {
        bool touches = false;
        for (const auto& c : clique)
            if (g.adjacent(w, c)) {
                touches = true;
                break;
            }
        if (touches) dominating.push_back(w);
    }
    auto dmin = minimal_dominating_subset(g, dominating, clique);

    std::vector<std::string> keep = dmin;
    for (const auto& c : clique) keep.push_back(c);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

    ExtractedGadget out{g.induced(keep), dmin, clique, dmin.size()};
    return out;
}

}  // namespace ksgk

#endif
