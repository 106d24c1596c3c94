#ifndef KSGK_BINARY_BOX_HPP
#define KSGK_BINARY_BOX_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ksgk/cliques.hpp"
#include "ksgk/coloring.hpp"
#include "ksgk/graph.hpp"
#include "ksgk/rational.hpp"
#include "ksgk/vectors.hpp"

namespace ksgk {

// Contexts: maximum cliques of size omega(G), each playing the role of one
// measurement.
struct ContextSet {
    std::vector<std::vector<std::string>> contexts;

    static ContextSet all_max_cliques(const Graph& g) { return ContextSet{max_cliques(g)}; }

    void validate(const Graph& g) const {
        std::size_t omega = clique_number(g);
        for (const auto& c : contexts) {
            if (c.size() != omega) throw GraphError("context is not a maximum clique (size)");
            std::vector<std::size_t> idx;
            for (const auto& v : c) idx.push_back(g.index_of(v));
            if (!g.is_clique(idx)) throw GraphError("context is not a clique");
        }
    }
};

// A binary consistent assignment: one value per vertex (consistency across
// contexts is then automatic), each context summing to 1 with at most two
// nonzero entries.  Half-integral by the stable-set polytope theorem.
struct ConsistentBox {
    std::map<std::string, Rat> f;

    Rat at(const std::string& v) const {
        auto it = f.find(v);
        return it == f.end() ? Rat(0) : it->second;
    }

    // table keyed by (context index, vertex) as in the external format
    std::map<std::pair<std::size_t, std::string>, Rat> table(const ContextSet& ctx) const {
        std::map<std::pair<std::size_t, std::string>, Rat> t;
        for (std::size_t c = 0; c < ctx.contexts.size(); ++c)
            for (const auto& v : ctx.contexts[c]) t[{c, v}] = at(v);
        return t;
    }
};

// Enumerates all vertex-consistent f : V -> {0, 1/2, 1} with every context
// normalized on a support of at most two vertices.  These are exactly the
// candidate vertices of the binary consistent polytope.
inline std::vector<ConsistentBox> enumerate_binary_vertices(const Graph& g, const ContextSet& ctx,
                                                            std::size_t vertex_budget = 24) {
    if (g.size() > vertex_budget) throw BudgetExceeded("instance exceeds the enumeration budget");
    ctx.validate(g);
    const std::size_t n = g.size();
    std::vector<std::string> order = g.vertices();
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = g.index_of(order[i]);

    // context membership by sorted-order position
    std::vector<std::vector<std::size_t>> ctx_members(ctx.contexts.size());
    std::vector<std::size_t> order_rank(n);
    {
        std::map<std::string, std::size_t> rank;
        for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;
        for (std::size_t c = 0; c < ctx.contexts.size(); ++c)
            for (const auto& v : ctx.contexts[c]) ctx_members[c].push_back(rank[v]);
        for (auto& m : ctx_members) std::sort(m.begin(), m.end());
    }

    std::vector<int> val(n, -1);  // in halves: 0, 1, 2
    std::vector<ConsistentBox> out;

    auto context_ok = [&](std::size_t c, bool complete) {
        int sum = 0, nonzero = 0, unset = 0;
        for (auto m : ctx_members[c]) {
            if (val[m] < 0) {
                ++unset;
                continue;
            }
            sum += val[m];
            if (val[m] > 0) ++nonzero;
        }
        if (nonzero > 2) return false;
        if (sum > 2) return false;
        if (complete || unset == 0) return sum == 2 && nonzero <= 2;
        // partial: remaining vertices can still add up to 2 halves
        return sum + 2 * unset >= 2;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            for (std::size_t c = 0; c < ctx.contexts.size(); ++c)
                if (!context_ok(c, true)) return;
            ConsistentBox box;
            for (std::size_t k = 0; k < n; ++k) box.f[order[k]] = Rat(val[k], 2);
            out.push_back(std::move(box));
            return;
        }
        for (int v = 0; v <= 2; ++v) {
            val[i] = v;
            bool ok = true;
            for (std::size_t c = 0; c < ctx.contexts.size() && ok; ++c) {
                // only re-check contexts touching vertex i
                bool touches = std::binary_search(ctx_members[c].begin(), ctx_members[c].end(), i);
                if (touches) {
                    bool complete = ctx_members[c].back() <= i;
                    ok = context_ok(c, complete);
                }
            }
            if (ok) rec(i + 1);
        }
        val[i] = -1;
    };
    rec(0);
    return out;
}

struct BinaryMaxSum {
    bool feasible = false;  // false when no binary consistent box exists
    Rat value;
    std::optional<ConsistentBox> maximizer;
};

// Maximum of the targets' probability sum over the enumerated boxes
// (classical post-processing cannot raise it).
inline BinaryMaxSum binary_max_sum(const Graph& g, const ContextSet& ctx,
                                   const std::vector<std::string>& targets,
                                   std::size_t vertex_budget = 24) {
    {
        std::set<std::string> uniq(targets.begin(), targets.end());
        if (uniq.size() != targets.size()) throw GraphError("targets must be distinct");
        for (const auto& t : targets) {
            bool found = false;
            for (const auto& c : ctx.contexts)
                for (const auto& v : c)
                    if (v == t) found = true;
            if (!found) throw GraphError("target " + t + " lies in no context");
        }
    }
    auto boxes = enumerate_binary_vertices(g, ctx, vertex_budget);
    BinaryMaxSum out;
    for (const auto& box : boxes) {
        Rat s(0);
        for (const auto& t : targets) s = s + box.at(t);
        if (!out.feasible || s > out.value) {
            out.feasible = true;
            out.value = s;
            out.maximizer = box;
        }
    }
    return out;
}

// Value of P(v1) + P(v2) on the superposition state (|v1> + |v2>)/norm for
// distinguished overlap cos(theta).
inline double quantum_xgad_value(double theta) {
    if (theta < 0 || theta > 1.5707963267948966 + 1e-12)
        throw GraphError("theta must lie in [0, pi/2]");
    return 1.0 + std::cos(theta);
}

// Same value computed on an actual representation: projects the
// superposition of the two distinguished vectors onto each of them.
inline double quantum_xgad_value_on(const VectorSet& vs, const std::string& v1,
                                    const std::string& v2) {
    const Vec& a = vs.at(v1);
    const Vec& b = vs.at(v2);
    Vec sum(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) sum[k] = a[k] + b[k];
    sum = normalized(std::move(sum));
    double pa = std::norm(inner(sum, a));
    double pb = std::norm(inner(sum, b));
    return pa + pb;
}

struct CswGap {
    double alpha_w = 0;               // weighted independence, weights 1 on V_dist
    double classical_completeness = 0;  // max colorings' ones on V_dist
    double gap() const { return alpha_w - classical_completeness; }
};

// Observation: under Exclusivity and Completeness the classical value of the
// V_dist-indicator inequality reaches alpha(G, w) iff the graph is not of
// gadget type.
inline CswGap csw_gap(const Graph& g, const std::vector<std::string>& v_dist,
                      std::uint64_t budget = detail::ColoringSearch::DEFAULT_BUDGET) {
    CswGap out;
    std::map<std::string, double> w;
    for (const auto& v : g.vertices()) w[v] = 0.0;
    for (const auto& v : v_dist) w[v] = 1.0;
    out.alpha_w = weighted_independence(g.with_weights(w)).weight;
    auto ps = enumerate_patterns(g, v_dist, budget);
    std::size_t best = 0;
    for (const auto& p : ps.patterns)
        best = std::max(best, static_cast<std::size_t>(std::count(p.begin(), p.end(), '1')));
    out.classical_completeness = static_cast<double>(best);
    return out;
}

// ---------------------------------------------------------------------------
// Exact rational cross-check of the half-integrality shortcut
// ---------------------------------------------------------------------------
namespace detail {

// Solve A x = b over the rationals; returns nullopt when singular.
inline std::optional<std::vector<Rat>> solve_rational(std::vector<std::vector<Rat>> A,
                                                      std::vector<Rat> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col].is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col].is_zero()) continue;
            Rat factor = A[r][col] / A[col][col];
            for (std::size_t c2 = col; c2 < n; ++c2) A[r][c2] = A[r][c2] - factor * A[col][c2];
            b[r] = b[r] - factor * b[col];
        }
    }
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return x;
}

}  // namespace detail

namespace detail {

// Exact phase-1 simplex feasibility for { A x = b, x >= 0 } with Bland's
// rule.  Sized for the small cross-check instances only.
inline bool rational_lp_feasible(std::vector<std::vector<Rat>> A, std::vector<Rat> b) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    for (std::size_t r = 0; r < rows; ++r)
        if (b[r] < Rat(0)) {
            for (auto& x : A[r]) x = -x;
            b[r] = -b[r];
        }
    // tableau with artificial variables; objective = sum of artificials
    const std::size_t total = cols + rows;
    std::vector<std::vector<Rat>> T(rows, std::vector<Rat>(total + 1, Rat(0)));
    std::vector<std::size_t> basis(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) T[r][c] = A[r][c];
        T[r][cols + r] = Rat(1);
        T[r][total] = b[r];
        basis[r] = cols + r;
    }
    std::vector<Rat> obj(total + 1, Rat(0));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c <= total; ++c) obj[c] = obj[c] + T[r][c];
    for (std::size_t c = cols; c < total; ++c) obj[c] = Rat(0);

    for (int iter = 0; iter < 100000; ++iter) {
        // Bland: smallest index with positive reduced objective coefficient
        std::size_t pivot_col = total;
        for (std::size_t c = 0; c < total; ++c)
            if (obj[c] > Rat(0)) {
                pivot_col = c;
                break;
            }
        if (pivot_col == total) break;
        std::size_t pivot_row = rows;
        Rat best_ratio(0);
        for (std::size_t r = 0; r < rows; ++r) {
            if (!(T[r][pivot_col] > Rat(0))) continue;
            Rat ratio = T[r][total] / T[r][pivot_col];
            if (pivot_row == rows || ratio < best_ratio ||
                (ratio == best_ratio && basis[r] < basis[pivot_row])) {
                pivot_row = r;
                best_ratio = ratio;
            }
        }
        if (pivot_row == rows) break;  // unbounded; cannot happen here
        Rat pv = T[pivot_row][pivot_col];
        for (std::size_t c = 0; c <= total; ++c) T[pivot_row][c] = T[pivot_row][c] / pv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pivot_row || T[r][pivot_col].is_zero()) continue;
            Rat f = T[r][pivot_col];
            for (std::size_t c = 0; c <= total; ++c) T[r][c] = T[r][c] - f * T[pivot_row][c];
        }
        {
            Rat f = obj[pivot_col];
            for (std::size_t c = 0; c <= total; ++c) obj[c] = obj[c] - f * T[pivot_row][c];
        }
        basis[pivot_row] = pivot_col;
    }
    return obj[total].is_zero();
}

// Is p an extreme point of the finite set S?  Exactly: p not in
// conv(S minus p).
inline bool extreme_in(const std::vector<Rat>& p, const std::set<std::vector<Rat>>& S) {
    std::vector<const std::vector<Rat>*> others;
    for (const auto& s : S)
        if (s != p) others.push_back(&s);
    if (others.empty()) return true;
    const std::size_t n = p.size();
    std::vector<std::vector<Rat>> A(n + 1, std::vector<Rat>(others.size(), Rat(0)));
    std::vector<Rat> b(n + 1, Rat(0));
    for (std::size_t c = 0; c < others.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) A[r][c] = (*others[c])[r];
    for (std::size_t r = 0; r < n; ++r) b[r] = p[r];
    for (std::size_t c = 0; c < others.size(); ++c) A[n][c] = Rat(1);
    b[n] = Rat(1);
    return !rational_lp_feasible(std::move(A), std::move(b));
}

}  // namespace detail

// Vertices of the polytope { x >= 0, x_u + x_v <= 1 on edges,
// x_a + x_b = 1 for each context's designated pair, x = 0 on the rest of the
// context }, enumerated exactly over all designated-pair choices.  Every
// vertex is a face vertex of FSTAB(G), hence half-integral; the caller
// compares this set against enumerate_binary_vertices.
inline std::set<std::vector<Rat>> lp_vertex_enumeration(const Graph& g, const ContextSet& ctx) {
    const std::size_t n = g.size();
    if (n > 12) throw BudgetExceeded("rational vertex enumeration limited to 12 vertices");
    std::vector<std::string> order = g.vertices();
    std::sort(order.begin(), order.end());
    std::map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;

    // constraint rows: (coeffs, rhs, is_equality)
    struct Row {
        std::vector<Rat> a;
        Rat b;
        bool eq;
    };
    std::vector<Row> base;
    for (std::size_t i = 0; i < n; ++i) {
        Row r{std::vector<Rat>(n, Rat(0)), Rat(0), false};  // -x_i <= 0
        r.a[i] = Rat(-1);
        base.push_back(r);
    }
    for (const auto& [u, v] : g.edges()) {
        Row r{std::vector<Rat>(n, Rat(0)), Rat(1), false};
        r.a[rank[u]] = Rat(1);
        r.a[rank[v]] = Rat(1);
        base.push_back(r);
    }

    std::set<std::vector<Rat>> vertices;

    // iterate over designated pairs per context
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pair_choices;
    for (const auto& c : ctx.contexts) {
        std::vector<std::pair<std::size_t, std::size_t>> ps;
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = i + 1; j < c.size(); ++j) ps.emplace_back(rank[c[i]], rank[c[j]]);
        pair_choices.push_back(ps);
    }
    std::vector<std::size_t> pick(ctx.contexts.size(), 0);
    while (true) {
        std::vector<Row> rows = base;
        bool consistent = true;
        for (std::size_t c = 0; c < ctx.contexts.size() && consistent; ++c) {
            auto [i, j] = pair_choices[c][pick[c]];
            Row req{std::vector<Rat>(n, Rat(0)), Rat(1), true};
            req.a[i] = Rat(1);
            req.a[j] = Rat(1);
            rows.push_back(req);
            for (const auto& v : ctx.contexts[c]) {
                std::size_t k = rank[v];
                if (k == i || k == j) continue;
                Row zr{std::vector<Rat>(n, Rat(0)), Rat(0), true};
                zr.a[k] = Rat(1);
                rows.push_back(zr);
            }
        }
        if (consistent) {
            // enumerate candidate vertices: equalities always active, fill up
            // to n active constraints from the inequalities
            std::vector<std::size_t> eqs, ineqs;
            for (std::size_t r = 0; r < rows.size(); ++r)
                (rows[r].eq ? eqs : ineqs).push_back(r);
            std::size_t need = n > eqs.size() ? n - eqs.size() : 0;
            std::vector<std::size_t> comb(need);
            std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start,
                                                                       std::size_t k) {
                if (k == need) {
                    std::vector<std::vector<Rat>> A;
                    std::vector<Rat> b;
                    for (auto r : eqs) {
                        A.push_back(rows[r].a);
                        b.push_back(rows[r].b);
                    }
                    for (std::size_t t = 0; t < need; ++t) {
                        A.push_back(rows[comb[t]].a);
                        b.push_back(rows[comb[t]].b);
                    }
                    if (A.size() != n) return;
                    auto x = detail::solve_rational(A, b);
                    if (!x) return;
                    // feasibility against every constraint
                    for (const auto& row : rows) {
                        Rat lhs(0);
                        for (std::size_t t = 0; t < n; ++t) lhs = lhs + row.a[t] * (*x)[t];
                        if (row.eq ? (lhs != row.b) : (lhs > row.b)) return;
                    }
                    vertices.insert(*x);
                    return;
                }
                for (std::size_t r = start; r < ineqs.size(); ++r) {
                    comb[k] = ineqs[r];
                    choose(r + 1, k + 1);
                }
            };
            choose(0, 0);
        }
        std::size_t c = ctx.contexts.size();
        while (c > 0 && pick[c - 1] + 1 == pair_choices[c - 1].size()) pick[--c] = 0;
        if (c == 0) break;
        ++pick[c - 1];
    }
    return vertices;
}

// The Balinski / Nemhauser-Trotter check: every exact polytope vertex is
// half-integral, and the extreme points of the half-integral grid
// enumeration coincide with the LP vertices satisfying the support rule.
struct HalfIntegralityCheck {
    bool all_half_integral = false;
    bool grid_matches = false;
    std::size_t lp_vertices = 0;
    std::size_t lp_boxes = 0;    // LP vertices that satisfy the support rule
    std::size_t grid_boxes = 0;  // all binary consistent assignments
    std::size_t grid_extreme = 0;
};

inline HalfIntegralityCheck half_integrality_check(const Graph& g, const ContextSet& ctx) {
    HalfIntegralityCheck out;
    auto lp = lp_vertex_enumeration(g, ctx);
    out.lp_vertices = lp.size();
    out.all_half_integral = true;
    std::vector<std::string> order = g.vertices();
    std::sort(order.begin(), order.end());
    std::map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    std::set<std::vector<Rat>> lp_boxes;
    for (const auto& x : lp) {
        for (const auto& r : x)
            if (!(r == Rat(0) || r == Rat(1, 2) || r == Rat(1))) out.all_half_integral = false;
        // support rule per context: sum 1 with at most two nonzeros
        bool boxy = true;
        for (const auto& c : ctx.contexts) {
            Rat sum(0);
            int nz = 0;
            for (const auto& v : c) {
                sum = sum + x[rank[v]];
                if (!x[rank[v]].is_zero()) ++nz;
            }
            if (!(sum == Rat(1)) || nz > 2) boxy = false;
        }
        if (boxy) lp_boxes.insert(x);
    }
    out.lp_boxes = lp_boxes.size();

    std::set<std::vector<Rat>> grid;
    for (const auto& box : enumerate_binary_vertices(g, ctx)) {
        std::vector<Rat> x(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) x[i] = box.at(order[i]);
        grid.insert(x);
    }
    out.grid_boxes = grid.size();
    std::set<std::vector<Rat>> grid_extreme;
    for (const auto& x : grid)
        if (detail::extreme_in(x, grid)) grid_extreme.insert(x);
    out.grid_extreme = grid_extreme.size();
    out.grid_matches = (grid_extreme == lp_boxes);
    return out;
}

}  // namespace ksgk

#endif
