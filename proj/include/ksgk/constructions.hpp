#ifndef KSGK_CONSTRUCTIONS_HPP
#define KSGK_CONSTRUCTIONS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ksgk/coloring.hpp"
#include "ksgk/graph.hpp"
#include "ksgk/sat.hpp"
#include "ksgk/vectors.hpp"

namespace ksgk {

class ConstructionError : public std::runtime_error {
  public:
    explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

class SolveFailure : public ConstructionError {
  public:
    explicit SolveFailure(const std::string& what) : ConstructionError(what) {}
};

class DegenerateParams : public ConstructionError {
  public:
    explicit DegenerateParams(const std::string& what) : ConstructionError(what) {}
};

class InfeasibleAngles : public ConstructionError {
  public:
    explicit InfeasibleAngles(const std::string& what) : ConstructionError(what) {}
};

class UnsupportedDimension : public ConstructionError {
  public:
    explicit UnsupportedDimension(const std::string& what) : ConstructionError(what) {}
};

class BadBases : public ConstructionError {
  public:
    explicit BadBases(const std::string& what) : ConstructionError(what) {}
};

class RayCollapse : public ConstructionError {
  public:
    explicit RayCollapse(const std::string& what) : ConstructionError(what) {}
};

class BoundViolated : public ConstructionError {
  public:
    explicit BoundViolated(const std::string& what) : ConstructionError(what) {}
};

class PatternArityMismatch : public ConstructionError {
  public:
    explicit PatternArityMismatch(const std::string& what) : ConstructionError(what) {}
};

// A generated vector family together with its orthogonality graph, the
// distinguished labels, and the parameters that produced it.
struct GadgetBlueprint {
    VectorSet vectors;
    Graph graph;
    std::vector<std::string> distinguished;
    std::map<std::string, double> parameters;
    std::vector<std::pair<std::string, std::string>> parallel_warnings;
    std::map<std::string, std::string> merged_labels;  // dropped -> kept
    std::vector<std::string> notes;

    void finalize() {
        merged_labels = vectors.dedup_rays();
        for (auto& d : distinguished) {
            auto it = merged_labels.find(d);
            if (it != merged_labels.end()) d = it->second;
        }
        parallel_warnings.clear();
        graph = orthogonality_graph(vectors, DuplicatePolicy::Warn, &parallel_warnings);
    }
};

// ---------------------------------------------------------------------------
// Real 3-vector helpers for the chain constructions
// ---------------------------------------------------------------------------
namespace num {

using V3 = std::array<double, 3>;

inline double dot(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline V3 cross(const V3& a, const V3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline V3 unit(V3 a) {
    double n = std::sqrt(dot(a, a));
    return {a[0] / n, a[1] / n, a[2] / n};
}
inline V3 sub(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline V3 scale(const V3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

// Clifton-style frame between u = e1 and w = (c, s, 0):
//   v2,v3 _|_ u;  v6,v7 _|_ w;  <v2|v6> = <v3|v7> = 0;
//   v4 = v2 x v6, v5 = v3 x v7 give the next-level pair.
struct Frame {
    V3 v2, v3, v4, v5, v6, v7;
    double inner;  // <v4|v5>, the next-level overlap
};

inline Frame frame_at(double c, double a, double b) {
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double g = std::atan2(-c * std::cos(a), std::sin(a));
    const double h = std::atan2(-c * std::cos(b), std::sin(b));
    Frame f;
    f.v2 = {0, std::cos(a), std::sin(a)};
    f.v3 = {0, std::cos(b), std::sin(b)};
    f.v6 = {-s * std::cos(g), c * std::cos(g), std::sin(g)};
    f.v7 = {-s * std::cos(h), c * std::cos(h), std::sin(h)};
    f.v4 = unit(cross(f.v2, f.v6));
    f.v5 = unit(cross(f.v3, f.v7));
    f.inner = dot(f.v4, f.v5);
    return f;
}

// Nelder-Mead on (a, b) in (0, pi)^2; minimizes fn.
inline std::array<double, 2> nelder_mead_2d(const std::function<double(double, double)>& fn,
                                            std::array<double, 2> start, double step,
                                            int iters) {
    std::array<std::array<double, 2>, 3> S = {
        {start, {start[0] + step, start[1]}, {start[0], start[1] + step}}};
    std::array<double, 3> F;
    for (int i = 0; i < 3; ++i) F[i] = fn(S[i][0], S[i][1]);
    for (int it = 0; it < iters; ++it) {
        // order
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (F[j] < F[i]) {
                    std::swap(F[i], F[j]);
                    std::swap(S[i], S[j]);
                }
        if (std::abs(F[2] - F[0]) < 1e-30) break;
        std::array<double, 2> cen = {(S[0][0] + S[1][0]) / 2, (S[0][1] + S[1][1]) / 2};
        auto pt = [&](double t) -> std::array<double, 2> {
            return {cen[0] + t * (S[2][0] - cen[0]), cen[1] + t * (S[2][1] - cen[1])};
        };
        auto xr = pt(-1.0);
        double fr = fn(xr[0], xr[1]);
        if (fr < F[0]) {
            auto xe = pt(-2.0);
            double fe = fn(xe[0], xe[1]);
            if (fe < fr) {
                S[2] = xe;
                F[2] = fe;
            } else {
                S[2] = xr;
                F[2] = fr;
            }
        } else if (fr < F[1]) {
            S[2] = xr;
            F[2] = fr;
        } else {
            auto xc = pt(0.5);
            double fc = fn(xc[0], xc[1]);
            if (fc < F[2]) {
                S[2] = xc;
                F[2] = fc;
            } else {
                for (int i = 1; i < 3; ++i) {
                    S[i] = {(S[i][0] + S[0][0]) / 2, (S[i][1] + S[0][1]) / 2};
                    F[i] = fn(S[i][0], S[i][1]);
                }
            }
        }
    }
    for (int i = 1; i < 3; ++i)
        if (F[i] < F[0]) std::swap(S[0], S[i]);
    return S[0];
}

// True when some vector of the frame is parallel (as a ray) to an entry of
// the avoid list; such frames would later merge with existing vertices and
// lose exact orthogonalities.
inline bool frame_clashes(const Frame& f, const std::vector<V3>& avoid) {
    const V3* vs[6] = {&f.v2, &f.v3, &f.v4, &f.v5, &f.v6, &f.v7};
    for (const auto* v : vs)
        for (const auto& a : avoid)
            if (std::abs(std::abs(dot(*v, a)) - 1.0) < 1e-5) return true;
    return false;
}

// Finds the frame whose next-level overlap has minimal magnitude.  The
// attainable minimum follows the recursion c' = (3c-1)/(1+c).  For c below
// the Clifton bound the zero is transversal and a 1D root-find on b (at a
// fixed ladder of a-values) pins it exactly; above the bound the zero curve
// degenerates to a tangent minimum located by Nelder-Mead.
inline Frame solve_frame(double c, const std::vector<V3>& avoid = {}) {
    const double PI = 3.14159265358979323846;
    const double predicted = (3 * c - 1) / (1 + c);
    if (predicted < -0.02) {
        // transversal regime: scan b for a sign change of <v4|v5>
        static const double ladder[] = {0.9, 1.15, 0.65, 1.45, 0.45, 1.85, 2.2, 0.3, 2.6};
        for (double a : ladder) {
            double prev_b = 0.03, prev_f = frame_at(c, a, prev_b).inner;
            const int steps = 600;
            for (int i = 1; i <= steps; ++i) {
                double b = 0.03 + (PI - 0.06) * i / steps;
                if (std::abs(b - a) < 2e-3) continue;
                double f = frame_at(c, a, b).inner;
                if (prev_f == 0.0 || (prev_f < 0) != (f < 0)) {
                    double lo = prev_b, hi = b;
                    for (int it = 0; it < 200; ++it) {
                        double mid = 0.5 * (lo + hi);
                        double fm = frame_at(c, a, mid).inner;
                        if ((frame_at(c, a, lo).inner < 0) != (fm < 0))
                            hi = mid;
                        else
                            lo = mid;
                    }
                    Frame cand = frame_at(c, a, 0.5 * (lo + hi));
                    if (std::abs(cand.inner) < 1e-11 && !frame_clashes(cand, avoid)) return cand;
                }
                prev_b = b;
                prev_f = f;
            }
        }
        throw std::runtime_error("no clean transversal frame found");
    }
    // tangent regime
    auto fsq = [&](double a, double b) {
        if (a < 0.02 || a > PI - 0.02 || b < 0.02 || b > PI - 0.02) return 1e9;
        if (std::abs(a - b) < 1e-3) return 1e9;
        double v = frame_at(c, a, b).inner;
        return v * v;
    };
    const int N = 96;
    std::vector<std::pair<double, std::array<double, 2>>> cells;
    for (int i = 1; i < N; ++i)
        for (int j = 1; j < N; ++j) {
            double a = PI * i / N, b = PI * j / N;
            cells.push_back({fsq(a, b), {a, b}});
        }
    std::sort(cells.begin(), cells.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    Frame fallback = frame_at(c, cells[0].second[0], cells[0].second[1]);
    for (std::size_t trial = 0; trial < 48 && trial < cells.size(); ++trial) {
        auto r = nelder_mead_2d(fsq, cells[trial].second, 0.01, 4000);
        r = nelder_mead_2d(fsq, r, 1e-5, 4000);
        Frame cand = frame_at(c, r[0], r[1]);
        if (trial == 0) fallback = cand;
        if (!frame_clashes(cand, avoid)) return cand;
    }
    return fallback;
}

}  // namespace num

// ---------------------------------------------------------------------------
// True-implies-false chains (iterated 01-gadgets)
// ---------------------------------------------------------------------------
namespace detail {

// Orthonormal frame of R^d whose first two directions span {u, w}.
// Remaining directions come from Gram-Schmidt over the standard basis.
inline std::vector<std::vector<double>> pair_frame(const std::vector<double>& u,
                                                   const std::vector<double>& w) {
    const std::size_t d = u.size();
    std::vector<std::vector<double>> frame;
    auto push_orthonormal = [&](std::vector<double> v) {
        for (const auto& b : frame) {
            double c = 0;
            for (std::size_t k = 0; k < d; ++k) c += b[k] * v[k];
            for (std::size_t k = 0; k < d; ++k) v[k] -= c * b[k];
        }
        double n = 0;
        for (double x : v) n += x * x;
        n = std::sqrt(n);
        if (n < 1e-9) return false;
        for (auto& x : v) x /= n;
        frame.push_back(std::move(v));
        return true;
    };
    push_orthonormal(u);
    if (!push_orthonormal(w)) throw DegenerateParams("pair is parallel; no chain possible");
    for (std::size_t k = 0; k < d && frame.size() < d; ++k) {
        std::vector<double> e(d, 0.0);
        e[k] = 1.0;
        push_orthonormal(e);
    }
    return frame;
}

inline std::vector<double> from_local(const std::vector<std::vector<double>>& frame,
                                      const num::V3& local) {
    const std::size_t d = frame[0].size();
    std::vector<double> out(d, 0.0);
    for (int a = 0; a < 3; ++a)
        for (std::size_t k = 0; k < d; ++k) out[k] += local[a] * frame[a][k];
    return out;
}

}  // namespace detail

// Interior vectors of a true-implies-false gadget between two non-orthogonal
// unit vectors (real, any dimension >= 3).  The chain iterates Clifton
// frames; each level's (v4, v5) pair is the next level's distinguished pair,
// and the recursion bottoms out when that pair becomes orthogonal within
// eps.  Labels are `prefix` + "Lk:v2".."Lk:v7".
inline std::vector<std::pair<std::string, std::vector<double>>> tif_chain_vectors(
    const std::vector<double>& u, const std::vector<double>& w, const std::string& prefix,
    double eps = 1e-9, int max_levels = 64) {
    auto frame = detail::pair_frame(u, w);
    double c0 = 0;
    for (std::size_t k = 0; k < u.size(); ++k) c0 += u[k] * w[k];

    std::vector<std::pair<std::string, std::vector<double>>> out;
    // chain state in local 3D coordinates
    num::V3 cu = {1, 0, 0};
    num::V3 cw = {c0, std::sqrt(std::max(0.0, 1.0 - c0 * c0)), 0};
    std::vector<num::V3> seen = {cu, cw};

    for (int level = 0; level < max_levels; ++level) {
        double c = num::dot(cu, cw);
        if (c < 0) {  // same ray; the frame solver expects a positive overlap
            cw = num::scale(cw, -1.0);
            c = -c;
        }
        if (std::abs(c - 1.0) < 1e-12)
            throw DegenerateParams("chain pair became parallel");
        num::V3 r1 = cu;
        num::V3 r2 = num::unit(num::sub(cw, num::scale(cu, c)));
        num::V3 r3 = num::cross(r1, r2);
        // solve in the rotated coordinates where cu = e1; the avoid list is
        // rotated along so cross-level ray collisions are rejected up front
        std::vector<num::V3> avoid_local;
        for (const auto& v : seen)
            avoid_local.push_back({num::dot(v, r1), num::dot(v, r2), num::dot(v, r3)});
        auto solved = num::solve_frame(c, avoid_local);
        auto back = [&](const num::V3& v) -> num::V3 {
            return {v[0] * r1[0] + v[1] * r2[0] + v[2] * r3[0],
                    v[0] * r1[1] + v[1] * r2[1] + v[2] * r3[1],
                    v[0] * r1[2] + v[1] * r2[2] + v[2] * r3[2]};
        };
        const std::string lv = prefix + "L" + std::to_string(level) + ":";
        num::V3 locs[6] = {solved.v2, solved.v3, solved.v4, solved.v5, solved.v6, solved.v7};
        const char* names[6] = {"v2", "v3", "v4", "v5", "v6", "v7"};
        num::V3 glob[6];
        for (int i = 0; i < 6; ++i) glob[i] = back(locs[i]);
        for (int i = 0; i < 6; ++i) {
            out.emplace_back(lv + names[i], detail::from_local(frame, glob[i]));
            seen.push_back(glob[i]);
        }
        if (std::abs(solved.inner) <= eps) return out;
        cu = glob[2];
        cw = glob[3];
    }
    throw SolveFailure("TIF chain did not terminate");
}

// ---------------------------------------------------------------------------
// Supplementary-Note-1 order (3,2) gadget
// ---------------------------------------------------------------------------

// phi is solved from (1/2) sin 2phi = sin^(2s-2t+1)(theta) cos(theta), the
// exact-orthogonality condition <u_{4s+3}|m_3> = 0.
inline double solve_gadget32_phi(double theta, int t, int s) {
    double rhs = std::pow(std::sin(theta), 2 * s - 2 * t + 1) * std::cos(theta);
    if (std::abs(2 * rhs) > 1.0)
        throw SolveFailure("no phi solves (1/2) sin 2phi = sin^(2s-2t+1) theta cos theta");
    return 0.5 * std::asin(2 * rhs);
}

inline GadgetBlueprint build_gadget_32(double theta, int t, int s) {
    const double PI = 3.14159265358979323846;
    if (t < 1 || s < 1) throw ConstructionError("need t,s >= 1");
    if (theta <= 0 || theta >= PI || std::abs(theta - PI / 2) < 1e-9)
        throw DegenerateParams("theta must lie in (0,pi/2) u (pi/2,pi)");
    const double phi = solve_gadget32_phi(theta, t, s);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double s2t = 2 * st * ct, s2p = 2 * sp * cp;

    GadgetBlueprint bp;
    bp.vectors = VectorSet(3);
    auto add = [&](const std::string& l, double x, double y, double z) {
        bp.vectors.add_real(l, {x, y, z});
    };
    // distinguished first so ray merges keep these labels
    add("m1", 1, 0, 0);
    add("m2", st, ct, 0);
    add("m3", st, ct, -std::pow(st, 2 * t + 1) / (ct * ct));
    add("n1", 0, 1, 0);
    add("n2", -ct, st, 0);
    add("n3", 0, st, -ct);
    add("n4", -ct * ct, 0.5 * s2t, st * st);
    add("n5", st, ct * ct * ct, st * ct * ct);
    add("n6", 0, sp, -cp);
    add("n7", -ct * cp, st * cp, st * sp);
    add("n8", st, ct * cp * cp, 0.5 * s2p * ct);
    for (int tt = 1; tt <= t; ++tt) {
        add("v" + std::to_string(4 * tt), -ct * ct, 0, std::pow(st, 2 * tt));
        add("v" + std::to_string(4 * tt + 1), std::pow(st, 2 * tt), 0, ct * ct);
        add("v" + std::to_string(4 * tt + 2), st * ct * ct, ct * ct * ct,
            -std::pow(st, 2 * tt + 1));
        add("v" + std::to_string(4 * tt + 3), std::pow(st, 2 * tt + 2),
            std::pow(st, 2 * tt + 1) * ct, ct * ct);
    }
    for (int ss = 1; ss <= s; ++ss) {
        add("u" + std::to_string(4 * ss), -0.5 * s2p * ct, 0, std::pow(st, 2 * ss + 1));
        add("u" + std::to_string(4 * ss + 1), std::pow(st, 2 * ss + 1), 0, 0.5 * s2p * ct);
        add("u" + std::to_string(4 * ss + 2), 0.25 * s2t * s2p, 0.5 * s2p * ct * ct,
            -std::pow(st, 2 * ss + 2));
        add("u" + std::to_string(4 * ss + 3), std::pow(st, 2 * ss + 3),
            std::pow(st, 2 * ss + 2) * ct, 0.5 * s2p * ct);
    }
    bp.distinguished = {"m1", "m2", "m3"};
    bp.parameters = {{"theta", theta}, {"phi", phi}, {"t", double(t)}, {"s", double(s)}};
    bp.finalize();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (bp.distinguished[i] == bp.distinguished[j])
                throw DegenerateParams("distinguished vectors collapsed");
    if (t == s)
        bp.notes.push_back(
            "t == s forces (1/2)sin2phi = sin theta cos theta, which makes the u-chain "
            "coincide ray-by-ray with the v-chain; the merged graph is degenerate");
    return bp;
}

// ---------------------------------------------------------------------------
// Supplementary-Note-1 order (d,d-1) gadget, d >= 5
// ---------------------------------------------------------------------------
inline GadgetBlueprint build_gadget_dd1(int d, double theta, double phi, int t, int s) {
    if (d == 4)
        throw UnsupportedDimension("d = 4 coefficients are not published; use d >= 5");
    if (d < 5) throw UnsupportedDimension("construction needs d >= 5");
    if (t < 1 || s < 1) throw ConstructionError("need t,s >= 1");
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    (void)sp;
    const double Delta = st * st - 2.0 * (d - 4) * ct * ct;
    const double delta = st * st - (d - 4) * (ct * ct + cp * cp);
    if (Delta < 0) throw InfeasibleAngles("Delta = sin^2 th - 2(d-4)cos^2 th < 0");
    if (delta < 0) throw InfeasibleAngles("delta = sin^2 th - (d-4)(cos^2 th + cos^2 ph) < 0");
    const double sqD = std::sqrt(Delta), sqd = std::sqrt(delta);
    const double dm2 = d - 2, dm3 = d - 3, dm4 = d - 4;

    const double a = (-st + sqD) / dm4;
    const double b = (dm4 / dm3) * ct;
    const double c = st / dm3 - sqD;
    const double e = (dm3 / (dm2 * dm4)) * ct;
    const double qden = -st / dm3 + sqD;
    if (std::abs(qden) < 1e-12) throw DegenerateParams("q denominator vanishes");
    const double q = ct * ct / qden;
    const double p = (dm3 / (dm2 * dm4)) * st + q + (dm3 * dm3 / (dm2 * dm4 * dm4)) * (-st + sqD);
    const double ap = (-st + sqd) / dm4;
    const double bpp = (dm4 / dm3) * cp;
    const double cpp = st / dm3 - sqd;
    const double ep = (dm3 / (dm2 * dm4)) * cp;
    const double qpden = -st / dm3 + sqd;
    if (std::abs(qpden) < 1e-12) throw DegenerateParams("q' denominator vanishes");
    const double qp = cp * cp / qpden;
    const double ratio = cp / ct;
    const double pp = ((dm3 / (dm2 * dm4)) * st + qp + (dm3 * dm3 / (dm2 * dm4 * dm4)) * (-st + sqd)) * ratio;
    // note: paper writes p' with the cos(phi)/cos(theta) factor on every term
    const double pprime = (dm3 / (dm2 * dm4)) * st * ratio + qp * ratio +
                          (dm3 * dm3 / (dm2 * dm4 * dm4)) * (-st + sqd) * ratio;
    (void)pp;

    GadgetBlueprint bp;
    bp.vectors = VectorSet(static_cast<std::size_t>(d));
    auto addv = [&](const std::string& l, const std::vector<double>& v) {
        bp.vectors.add_real(l, v);
    };
    auto zeros = [&]() { return std::vector<double>(d, 0.0); };

    // distinguished m_1..m_d
    {
        auto v = zeros();
        v[0] = 1;
        addv("m1", v);
    }
    for (int j = 2; j <= d - 1; ++j) {
        auto v = zeros();
        v[0] = st;
        v[d - j] = ct;
        addv("m" + std::to_string(j), v);
    }
    {
        auto v = zeros();
        v[0] = st;
        v[1] = ct;
        v[d - 1] = -(p / q) * std::pow(st, 2 * t + 1);
        addv("m" + std::to_string(d), v);
    }
    // shared n_1..n_{d-1}
    {
        auto v = zeros();
        v[1] = 1;
        addv("n1", v);
        v = zeros();
        v[2] = 1;
        addv("n2", v);
    }
    for (int j = 3; j <= d - 2; ++j) {
        auto v = zeros();
        v[d + 1 - j] = 1;
        addv("n" + std::to_string(j), v);
    }
    {
        auto v = zeros();
        v[0] = -ct;
        v[1] = st;
        addv("n" + std::to_string(d - 1), v);
    }
    // x family
    {
        auto v = zeros();
        for (int k = 1; k <= d - 2; ++k) v[k] = b;
        v[d - 1] = c;
        addv("x1", v);
    }
    for (int j = 2; j <= d - 1; ++j) {
        auto v = zeros();
        v[0] = -ct;
        for (int k = 1; k <= d - 2; ++k) v[k] = a;
        v[d - j] = st;
        v[d - 1] = ct;
        addv("x" + std::to_string(j), v);
    }
    {
        auto v = zeros();
        v[0] = p;
        for (int k = 1; k <= d - 2; ++k) v[k] = e;
        v[d - 1] = q;
        addv("x" + std::to_string(d), v);
    }
    // y family (primed)
    {
        auto v = zeros();
        for (int k = 1; k <= d - 2; ++k) v[k] = bpp;
        v[d - 1] = cpp;
        addv("y1", v);
    }
    for (int j = 2; j <= d - 1; ++j) {
        auto v = zeros();
        v[0] = -ct;
        for (int k = 1; k <= d - 2; ++k) v[k] = ap;
        v[d - j] = st;
        v[d - 1] = cp;
        addv("y" + std::to_string(j), v);
    }
    {
        auto v = zeros();
        v[0] = pprime;
        for (int k = 1; k <= d - 2; ++k) v[k] = ep;
        v[d - 1] = qp;
        addv("y" + std::to_string(d), v);
    }
    // v / u repeating units
    for (int tt = 1; tt <= t; ++tt) {
        auto v = zeros();
        v[0] = -q;
        v[d - 1] = p * std::pow(st, 2 * tt);
        addv("v" + std::to_string(4 * tt), v);
        v = zeros();
        v[0] = p * std::pow(st, 2 * tt);
        v[d - 1] = q;
        addv("v" + std::to_string(4 * tt + 1), v);
        v = zeros();
        v[0] = q * st;
        v[1] = q * ct;
        v[d - 1] = -p * std::pow(st, 2 * tt + 1);
        addv("v" + std::to_string(4 * tt + 2), v);
        v = zeros();
        v[0] = p * std::pow(st, 2 * tt + 2);
        v[1] = p * std::pow(st, 2 * tt + 1) * ct;
        v[d - 1] = q;
        addv("v" + std::to_string(4 * tt + 3), v);
    }
    for (int ss = 1; ss <= s; ++ss) {
        auto v = zeros();
        v[0] = -qp;
        v[d - 1] = pprime * std::pow(st, 2 * ss);
        addv("u" + std::to_string(4 * ss), v);
        v = zeros();
        v[0] = pprime * std::pow(st, 2 * ss);
        v[d - 1] = qp;
        addv("u" + std::to_string(4 * ss + 1), v);
        v = zeros();
        v[0] = qp * st;
        v[1] = qp * ct;
        v[d - 1] = -pprime * std::pow(st, 2 * ss + 1);
        addv("u" + std::to_string(4 * ss + 2), v);
        v = zeros();
        v[0] = pprime * std::pow(st, 2 * ss + 2);
        v[1] = pprime * std::pow(st, 2 * ss + 1) * ct;
        v[d - 1] = qp;
        addv("u" + std::to_string(4 * ss + 3), v);
    }
    for (int j = 1; j <= d; ++j) bp.distinguished.push_back("m" + std::to_string(j));
    bp.parameters = {{"d", double(d)}, {"theta", theta}, {"phi", phi},
                     {"t", double(t)}, {"s", double(s)},  {"p", p},
                     {"q", q},         {"p_prime", pprime}, {"q_prime", qp}};
    // limiting-edge residuals, reported rather than forced to zero
    {
        const auto& u_last = bp.vectors.at("u" + std::to_string(4 * s + 3));
        const auto& md = bp.vectors.at("m" + std::to_string(d));
        bp.parameters["residual_u_m_d"] = std::abs(inner(u_last, md));
    }
    bp.finalize();
    return bp;
}

// ---------------------------------------------------------------------------
// AND nodes: derived vertex forced to 1 when two given vertices are both 1
// ---------------------------------------------------------------------------
namespace detail {

struct AndNode {
    std::vector<double> p, q, z;
};

// p _|_ t1, q = t2 x p, z = p x q: the triangle {p,q,z} forces z = 1 whenever
// t1 = t2 = 1 (both p and q are then excluded).  psi picks p inside t1^perp;
// the caller supplies a value avoiding degeneracies.
inline AndNode and_node(const std::vector<double>& t1v, const std::vector<double>& t2v,
                        double psi) {
    if (t1v.size() != 3) throw UnsupportedDimension("AND nodes need dimension 3");
    num::V3 t1 = {t1v[0], t1v[1], t1v[2]};
    num::V3 t2 = {t2v[0], t2v[1], t2v[2]};
    // orthonormal pair spanning t1^perp
    num::V3 ref = std::abs(t1[0]) < 0.9 ? num::V3{1, 0, 0} : num::V3{0, 1, 0};
    num::V3 b1 = num::unit(num::cross(t1, ref));
    num::V3 b2 = num::cross(t1, b1);
    num::V3 p = {std::cos(psi) * b1[0] + std::sin(psi) * b2[0],
                 std::cos(psi) * b1[1] + std::sin(psi) * b2[1],
                 std::cos(psi) * b1[2] + std::sin(psi) * b2[2]};
    num::V3 q = num::cross(t2, p);
    double qn = std::sqrt(num::dot(q, q));
    if (qn < 1e-9) throw DegenerateParams("AND node: p parallel to t2");
    q = num::scale(q, 1.0 / qn);
    num::V3 z = num::cross(p, q);
    AndNode node;
    node.p = {p[0], p[1], p[2]};
    node.q = {q[0], q[1], q[2]};
    node.z = {z[0], z[1], z[2]};
    return node;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Construction 1: KS proofs from order (k,k-1) gadgets
// ---------------------------------------------------------------------------

// Bases are lists of mutually orthonormal real vectors.  Validated per
// Step 1: across bases no two vectors may be identical or orthogonal.
inline GadgetBlueprint build_ks_proof(int d, int k,
                                      const std::vector<std::vector<std::vector<double>>>& bases) {
    if (k < 2 || k > d) throw BadBases("need 2 <= k <= d");
    if (static_cast<int>(bases.size()) != k) throw BadBases("need exactly k bases");
    if (k > 2 && d != 3)
        throw UnsupportedDimension("k >= 3 selections are built via dimension-3 AND chains");
    for (const auto& B : bases) {
        if (static_cast<int>(B.size()) != d) throw BadBases("each basis needs d vectors");
        for (std::size_t i = 0; i < B.size(); ++i)
            for (std::size_t j = i + 1; j < B.size(); ++j) {
                double dp = 0;
                for (int c = 0; c < d; ++c) dp += B[i][c] * B[j][c];
                if (std::abs(dp) > 1e-9) throw BadBases("basis vectors not orthogonal");
            }
    }
    for (std::size_t p = 0; p < bases.size(); ++p)
        for (std::size_t pq = p + 1; pq < bases.size(); ++pq)
            for (const auto& v : bases[p])
                for (const auto& w : bases[pq]) {
                    double dp = 0;
                    for (int c = 0; c < d; ++c) dp += v[c] * w[c];
                    if (std::abs(dp) < 1e-9)
                        throw BadBases("cross-basis vectors orthogonal (Step 1 violated)");
                    if (std::abs(std::abs(dp) - 1.0) < 1e-9)
                        throw BadBases("cross-basis vectors identical (Step 1 violated)");
                }

    GadgetBlueprint bp;
    bp.vectors = VectorSet(static_cast<std::size_t>(d));
    std::vector<std::vector<std::string>> basis_labels(bases.size());
    for (std::size_t p = 0; p < bases.size(); ++p)
        for (std::size_t qi = 0; qi < bases[p].size(); ++qi) {
            std::string l = "B" + std::to_string(p + 1) + ":" + std::to_string(qi + 1);
            bp.vectors.add_real(l, bases[p][qi]);
            basis_labels[p].push_back(l);
            bp.distinguished.push_back(l);
        }

    // all d^k selections, one gadget each
    std::vector<std::size_t> sel(static_cast<std::size_t>(k), 0);
    int gadget_id = 0;
    while (true) {
        std::vector<std::vector<double>> vs;
        for (int p = 0; p < k; ++p) vs.push_back(bases[static_cast<std::size_t>(p)][sel[static_cast<std::size_t>(p)]]);
        const std::string prefix = "g" + std::to_string(gadget_id++) + ":";
        if (k == 2) {
            for (auto& [l, v] : tif_chain_vectors(vs[0], vs[1], prefix)) bp.vectors.add_real(l, v);
        } else {
            // AND-reduce v_1..v_{k-1}, then a TIF chain onto v_k
            std::vector<double> acc = vs[0];
            int node_id = 0;
            for (int p = 1; p < k - 1; ++p) {
                auto nd = detail::and_node(acc, vs[static_cast<std::size_t>(p)], 0.7 + 0.13 * node_id);
                const std::string np = prefix + "a" + std::to_string(node_id++) + ":";
                bp.vectors.add_real(np + "p", nd.p);
                bp.vectors.add_real(np + "q", nd.q);
                bp.vectors.add_real(np + "z", nd.z);
                acc = nd.z;
            }
            for (auto& [l, v] : tif_chain_vectors(acc, vs[static_cast<std::size_t>(k - 1)], prefix))
                bp.vectors.add_real(l, v);
        }
        int p = k - 1;
        while (p >= 0 && sel[static_cast<std::size_t>(p)] + 1 == static_cast<std::size_t>(d)) {
            sel[static_cast<std::size_t>(p)] = 0;
            --p;
        }
        if (p < 0) break;
        ++sel[static_cast<std::size_t>(p)];
    }
    bp.parameters = {{"d", double(d)}, {"k", double(k)}};
    bp.finalize();
    return bp;
}

// Convenience: B_1 = computational basis, B_j = R^(j-1) B_1 for a fixed
// generic rotation R (d = 3 only).
inline GadgetBlueprint build_ks_proof_rotated(int d, int k, double angle1 = 0.45,
                                              double angle2 = 0.62, double angle3 = 0.85) {
    if (d != 3) throw UnsupportedDimension("rotated-bases helper is dimension 3");
    auto rotate = [&](const std::vector<double>& v) {
        // Rz(a3) * Ry(a2) * Rx(a1) * v: generically no zero matrix entries
        double x = v[0], y = v[1], z = v[2];
        double y1 = std::cos(angle1) * y - std::sin(angle1) * z;
        double z1 = std::sin(angle1) * y + std::cos(angle1) * z;
        double x2 = std::cos(angle2) * x + std::sin(angle2) * z1;
        double z2 = -std::sin(angle2) * x + std::cos(angle2) * z1;
        double x3 = std::cos(angle3) * x2 - std::sin(angle3) * y1;
        double y3 = std::sin(angle3) * x2 + std::cos(angle3) * y1;
        return std::vector<double>{x3, y3, z2};
    };
    std::vector<std::vector<std::vector<double>>> bases;
    std::vector<std::vector<double>> B1 = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    bases.push_back(B1);
    for (int j = 1; j < k; ++j) {
        std::vector<std::vector<double>> Bj;
        for (const auto& v : bases.back()) Bj.push_back(rotate(v));
        bases.push_back(Bj);
    }
    return build_ks_proof(d, k, bases);
}

// ---------------------------------------------------------------------------
// Construction 2 ingredients: SI-C frames and proofs
// ---------------------------------------------------------------------------

struct SicFrame {
    VectorSet vectors;
    int r = 0, n = 0, d = 0;
    double q = 0, p = 0;
    bool antipodal_collapse = false;
    std::vector<std::pair<std::string, std::string>> collapsed_pairs;
};

inline int sic_hadamard_exponent(int d) {
    auto clog2 = [](double x) { return static_cast<int>(std::ceil(std::log2(x))); };
    if (d % 2 == 1) return std::max(0, clog2((d - 1) / 2.0));
    return std::max(0, clog2((d - 2) / 2.0));
}

// r * 2^n unit vectors with sum of projectors = (r 2^n / d) Id; the
// cos/sin block template with Sylvester-Hadamard sign rows and q = sqrt(2/d).
inline SicFrame build_sic_vectors(int d, int r) {
    if (d < 3) throw UnsupportedDimension("need d >= 3");
    if (r < 4 || r % 2 != 0) throw ConstructionError("r must be an even integer >= 4");
    SicFrame out;
    out.d = d;
    out.r = r;
    out.n = sic_hadamard_exponent(d);
    const int N = 1 << out.n;
    const int half = (d % 2 == 1) ? (d - 1) / 2 : (d - 2) / 2;
    out.q = std::sqrt(2.0 / d);
    out.p = (d % 2 == 1) ? std::sqrt(1.0 - out.q * out.q * (d - 1) / 2.0)
                         : std::sqrt(0.5 - out.q * out.q * (d - 2) / 4.0);
    // Sylvester Hadamard H_N: H[i][j] = (-1)^popcount(i & j)
    std::vector<std::vector<int>> H(N, std::vector<int>(N, 1));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            H[i][j] = (__builtin_popcount(i & j) % 2 == 0) ? 1 : -1;

    out.vectors = VectorSet(static_cast<std::size_t>(d));
    const double TWO_PI = 6.28318530717958647692;
    for (int i = 1; i <= N; ++i) {
        for (int j = 1; j <= r; ++j) {
            std::vector<double> v(static_cast<std::size_t>(d), 0.0);
            double cosv = out.q * std::cos(TWO_PI * j / r);
            double sinv = out.q * std::sin(TWO_PI * j / r);
            for (int kk = 0; kk < half; ++kk) {
                int sgn = H[kk][i - 1];
                v[static_cast<std::size_t>(kk)] = sgn * cosv;
                v[static_cast<std::size_t>(kk + half)] = sgn * sinv;
            }
            if (d % 2 == 1) {
                v[static_cast<std::size_t>(d - 1)] = ((j % 2 == 0) ? 1.0 : -1.0) * out.p;
            } else {
                v[static_cast<std::size_t>(d - 2)] = out.p;
                v[static_cast<std::size_t>(d - 1)] = ((j % 2 == 0) ? 1.0 : -1.0) * out.p;
            }
            out.vectors.add("u" + std::to_string((i - 1) * r + j),
                            [&] {
                                Vec c(v.size());
                                for (std::size_t z = 0; z < v.size(); ++z) c[z] = Complex(v[z], 0);
                                return c;
                            }(),
                            false);
        }
    }
    for (std::size_t i = 0; i < out.vectors.size(); ++i)
        for (std::size_t j = i + 1; j < out.vectors.size(); ++j)
            if (std::abs(std::abs(inner(out.vectors.at(i), out.vectors.at(j))) - 1.0) < 1e-9) {
                out.antipodal_collapse = true;
                out.collapsed_pairs.emplace_back(out.vectors.label(i), out.vectors.label(j));
            }
    return out;
}

struct SicProof {
    GadgetBlueprint blueprint;
    double classical_bound = 0;  // k - 1
    double quantum_value = 0;    // r 2^n / d
    std::vector<std::pair<std::string, std::string>> gadget_pairs;  // k = 2 case
    std::vector<std::vector<std::string>> gadget_members;  // interiors, merge-mapped

    // vertex set of one attached gadget: its distinguished pair plus its
    // (merge-mapped) interior labels
    std::vector<std::string> gadget_subgraph_labels(std::size_t i) const {
        std::set<std::string> keep = {gadget_pairs[i].first, gadget_pairs[i].second};
        for (const auto& l : gadget_members[i]) keep.insert(l);
        return {keep.begin(), keep.end()};
    }
};

// Construction 2 for k = 2: a TIF gadget on every non-orthogonal frame pair
// (orthogonal pairs are excluded by Exclusivity and get no gadget).
inline SicProof build_sic_proof(int d, int k, int r) {
    if (k != 2) throw UnsupportedDimension("proof assembly implemented for k = 2");
    const int n = sic_hadamard_exponent(d);
    const double bound = std::max(static_cast<double>(d) * (k - 1) / (1 << n), 4.0);
    if (!(r > bound)) throw BoundViolated("need r > max{d(k-1)/2^n, 4}");
    auto frame = build_sic_vectors(d, r);
    if (frame.antipodal_collapse)
        throw RayCollapse("frame contains antipodal ray pairs; distinct rays required");

    SicProof out;
    out.blueprint.vectors = frame.vectors;
    for (const auto& l : frame.vectors.labels()) out.blueprint.distinguished.push_back(l);
    const std::size_t N = frame.vectors.size();
    int gid = 0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i + 1; j < N; ++j) {
            double ov = std::abs(inner(frame.vectors.at(i), frame.vectors.at(j)));
            if (ov <= 1e-9) continue;  // orthogonal pair: Exclusivity already forbids 11
            std::vector<double> a, b;
            for (const auto& z : frame.vectors.at(i)) a.push_back(z.real());
            for (const auto& z : frame.vectors.at(j)) b.push_back(z.real());
            const std::string prefix = "g" + std::to_string(gid++) + ":";
            std::vector<std::string> members;
            for (auto& [l, v] : tif_chain_vectors(a, b, prefix)) {
                out.blueprint.vectors.add_real(l, v);
                members.push_back(l);
            }
            // in d > 3 each chain lives in a 3D slice; add the missing
            // directions so its triangles extend to maximum cliques
            if (d > 3) {
                auto pf = detail::pair_frame(a, b);
                for (std::size_t extra = 3; extra < pf.size(); ++extra) {
                    out.blueprint.vectors.add_real(prefix + "w" + std::to_string(extra), pf[extra]);
                    members.push_back(prefix + "w" + std::to_string(extra));
                }
            }
            out.gadget_pairs.emplace_back(frame.vectors.label(i), frame.vectors.label(j));
            out.gadget_members.push_back(std::move(members));
        }
    }
    out.blueprint.parameters = {{"d", double(d)}, {"k", double(k)}, {"r", double(r)},
                                {"n", double(n)}};
    out.blueprint.finalize();
    for (auto& members : out.gadget_members)
        for (auto& l : members) {
            auto it = out.blueprint.merged_labels.find(l);
            if (it != out.blueprint.merged_labels.end()) l = it->second;
        }
    out.classical_bound = k - 1;
    out.quantum_value = static_cast<double>(r * (1 << n)) / d;
    return out;
}

// ---------------------------------------------------------------------------
// Randomness gadgets (d = 4 overlap 1/2, d = 5 overlap 1/sqrt 5)
// ---------------------------------------------------------------------------
inline GadgetBlueprint build_randomness_gadget(int d) {
    GadgetBlueprint bp;
    if (d == 4) {
        // two-iteration gadget-within-gadget from the k/(k+2) recursion at
        // k = 2: distinguished overlap exactly 1/2
        bp.vectors = VectorSet(4);
        std::vector<double> D1 = {1, 0, 0, 0};
        std::vector<double> D2 = {0.5, std::sqrt(3.0) / 2.0, 0, 0};
        bp.vectors.add_real("d1", D1);
        bp.vectors.add_real("d2", D2);
        for (auto& [l, v] : tif_chain_vectors(D1, D2, "c:")) bp.vectors.add_real(l, v);
        bp.vectors.add_real("w4", {0, 0, 0, 1});
        bp.distinguished = {"d1", "d2"};
        bp.parameters = {{"d", 4}, {"k", 2}, {"overlap", 0.5}};
        bp.finalize();
        return bp;
    }
    if (d == 5) {
        // Fig. 2 parametric family at the optimum theta1 = pi/4, theta2 = 0,
        // theta3 = -pi/4, x = 1/2.  The second u13 entry of the published
        // chain is stored as u12; u14, u15 complete the 5th and 4th
        // directions.  At the optimum u6 || u8 and u7 || u9; the merged
        // labels are recorded on the blueprint.
        const double PI = 3.14159265358979323846;
        const double t1 = PI / 4, t2 = 0.0, t3 = -PI / 4, x = 0.5;
        auto C = [](double v) { return std::cos(v); };
        auto S = [](double v) { return std::sin(v); };
        bp.vectors = VectorSet(5);
        auto add5 = [&](const std::string& l, double a, double b, double c) {
            bp.vectors.add_real(l, {a, b, c, 0, 0});
        };
        add5("u1", 1, 0, 0);
        add5("u13", x, 1, 0);
        add5("u2", 0, C(t1), S(t1));
        add5("u3", 0, C(t2), S(t2));
        add5("u4", 0, C(t3), S(t3));
        add5("u5", -x, -S(t1) * S(t1), 0.5 * S(2 * t1));
        add5("u6", -C(t1 - t2) * S(t1), x * S(t2), -x * C(t2));
        add5("u7", -x, -C(t1 - t2) * S(t1) * S(t2), C(t1 - t2) * S(t1) * C(t2));
        add5("u8", x, C(t2 - t3) * S(t2) * S(t3), -C(t2 - t3) * C(t2) * S(t3));
        add5("u9", C(t2 - t3) * S(t3), -x * S(t2), x * C(t2));
        add5("u10", -x, -S(t3) * S(t3), 0.5 * S(2 * t3));
        add5("u11", -S(t1), x * S(t1), -x * C(t1));
        add5("u12", -S(t3), x * S(t3), -x * C(t3));
        bp.vectors.add_real("u14", {0, 0, 0, 1, 0});
        bp.vectors.add_real("u15", {0, 0, 0, 0, 1});
        bp.distinguished = {"u1", "u13"};
        bp.parameters = {{"d", 5},
                         {"x", x},
                         {"theta1", t1},
                         {"theta2", t2},
                         {"theta3", t3},
                         {"overlap", 1.0 / std::sqrt(5.0)}};
        // keep all 15 published labels: record parallels as warnings only
        bp.graph = orthogonality_graph(bp.vectors, DuplicatePolicy::Warn, &bp.parallel_warnings);
        bp.notes.push_back(
            "u6 || u8 and u7 || u9 at the optimal parameters; labels kept distinct, "
            "collision flagged");
        return bp;
    }
    throw UnsupportedDimension("randomness gadgets are built for d in {4, 5}");
}

// ---------------------------------------------------------------------------
// Forbidden-set gadgets (Supplementary Note 4)
// ---------------------------------------------------------------------------
namespace detail {

struct ForbiddenSeed {
    std::vector<std::vector<double>> v;  // v_1..v_{m-1}
    std::vector<double> u;
    std::vector<std::vector<std::vector<double>>> bases;  // C_1..C_{m-1}
};

// Deterministic seed geometry in R^3: bases C_i are small rotations of the
// computational basis, v_i is the first vector of C_i, u is chosen
// non-orthogonal to everything.
inline ForbiddenSeed forbidden_seed(std::size_t m) {
    ForbiddenSeed seed;
    auto rot = [](const std::vector<double>& v, double ax, double az) {
        double x = v[0], y = v[1], z = v[2];
        double y1 = std::cos(ax) * y - std::sin(ax) * z;
        double z1 = std::sin(ax) * y + std::cos(ax) * z;
        double x2 = std::cos(az) * x - std::sin(az) * y1;
        double y2 = std::sin(az) * x + std::cos(az) * y1;
        return std::vector<double>{x2, y2, z1};
    };
    std::vector<std::vector<double>> B = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (std::size_t i = 0; i + 1 < m; ++i) {
        std::vector<std::vector<double>> Ci;
        for (const auto& b : B) Ci.push_back(rot(b, 0.31 + 0.17 * double(i), 0.57 + 0.23 * double(i)));
        seed.bases.push_back(Ci);
        seed.v.push_back(Ci[0]);
    }
    seed.u = num::unit(num::V3{0.62, 0.52, 0.59}).data()[0] == 0
                 ? std::vector<double>{1, 0, 0}
                 : std::vector<double>{0, 0, 0};
    {
        auto un = num::unit(num::V3{0.62, 0.52, 0.59});
        seed.u = {un[0], un[1], un[2]};
    }
    return seed;
}

// TIT(z, u): z = 1 forces u = 1.  Built as two TIF gadgets from z onto an
// orthogonal pair u', u'' spanning u^perp, plus the triangle {u', u'', u}.
inline void add_tit(GadgetBlueprint& bp, const std::vector<double>& z,
                    const std::vector<double>& u, const std::string& prefix, double rot) {
    num::V3 uz = {u[0], u[1], u[2]};
    num::V3 ref = std::abs(uz[0]) < 0.9 ? num::V3{1, 0, 0} : num::V3{0, 1, 0};
    num::V3 b1 = num::unit(num::cross(uz, ref));
    num::V3 b2 = num::cross(uz, b1);
    num::V3 up = {std::cos(rot) * b1[0] + std::sin(rot) * b2[0],
                  std::cos(rot) * b1[1] + std::sin(rot) * b2[1],
                  std::cos(rot) * b1[2] + std::sin(rot) * b2[2]};
    num::V3 upp = num::cross(uz, up);
    std::vector<double> u1 = {up[0], up[1], up[2]};
    std::vector<double> u2 = {upp[0], upp[1], upp[2]};
    // u', u'' must not be orthogonal to z (else the TIF pair is degenerate)
    num::V3 zz = {z[0], z[1], z[2]};
    if (std::abs(num::dot(up, zz)) < 1e-6 || std::abs(num::dot(upp, zz)) < 1e-6)
        return add_tit(bp, z, u, prefix, rot + 0.37);
    bp.vectors.add_real(prefix + "t1", u1);
    bp.vectors.add_real(prefix + "t2", u2);
    for (auto& [l, v] : tif_chain_vectors(z, u1, prefix + "f1:")) bp.vectors.add_real(l, v);
    for (auto& [l, v] : tif_chain_vectors(z, u2, prefix + "f2:")) bp.vectors.add_real(l, v);
}

// Gadget forbidding exactly the pattern (1,...,1, f_last) on (t_1..t_j, u):
// AND-chain the t's down to one derived vertex z, then TIF (f_last = 1) or
// TIT (f_last = 0) from z onto u.
inline void add_all_ones_gadget(GadgetBlueprint& bp, std::vector<std::vector<double>> ts,
                                const std::vector<double>& u, int f_last,
                                const std::string& prefix) {
    std::vector<double> acc = ts[0];
    for (std::size_t i = 1; i < ts.size(); ++i) {
        auto nd = and_node(acc, ts[i], 0.83 + 0.19 * double(i));
        const std::string np = prefix + "a" + std::to_string(i) + ":";
        bp.vectors.add_real(np + "p", nd.p);
        bp.vectors.add_real(np + "q", nd.q);
        bp.vectors.add_real(np + "z", nd.z);
        acc = nd.z;
    }
    if (f_last == 1) {
        for (auto& [l, v] : tif_chain_vectors(acc, u, prefix + "f:")) bp.vectors.add_real(l, v);
    } else {
        add_tit(bp, acc, u, prefix + "t:", 0.41);
    }
}

}  // namespace detail

// Gadget for an arbitrary forbidden set H (bitstrings of length m) over a
// distinguished set I = (v_1, ..., v_{m-1}, u), per the singleton recipes and
// the union lemma.  Optional seed vectors override the default v_i / u.
inline GadgetBlueprint build_forbidden_gadget(
    const std::set<std::string>& H, std::size_t m,
    const std::optional<std::vector<std::vector<double>>>& seed_vectors = std::nullopt) {
    if (H.empty()) throw PatternArityMismatch("forbidden set must be nonempty");
    if (m < 2) throw PatternArityMismatch("need m >= 2");
    if (m > 6) throw UnsupportedDimension("forbidden-set builder supports m <= 6");
    for (const auto& p : H) {
        if (p.size() != m) throw PatternArityMismatch("pattern " + p + " has arity != m");
        for (char c : p)
            if (c != '0' && c != '1') throw PatternArityMismatch("pattern " + p + " not binary");
    }
    auto seed = detail::forbidden_seed(m);
    if (seed_vectors) {
        if (seed_vectors->size() != m)
            throw PatternArityMismatch("seed must supply m vectors (v_1..v_{m-1}, u)");
        // prescribed v_i replace the default picks; bases are rebuilt around them
        for (std::size_t i = 0; i + 1 < m; ++i) {
            auto vi = (*seed_vectors)[i];
            num::V3 v = num::unit({vi[0], vi[1], vi[2]});
            num::V3 ref = std::abs(v[0]) < 0.9 ? num::V3{1, 0, 0} : num::V3{0, 1, 0};
            num::V3 b1 = num::unit(num::cross(v, ref));
            num::V3 b2 = num::cross(v, b1);
            seed.v[i] = {v[0], v[1], v[2]};
            seed.bases[i] = {{v[0], v[1], v[2]}, {b1[0], b1[1], b1[2]}, {b2[0], b2[1], b2[2]}};
        }
        seed.u = (*seed_vectors)[m - 1];
    }

    GadgetBlueprint bp;
    bp.vectors = VectorSet(3);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        bp.vectors.add_real("v" + std::to_string(i + 1), seed.v[i]);
        bp.distinguished.push_back("v" + std::to_string(i + 1));
    }
    bp.vectors.add_real("u", seed.u);
    bp.distinguished.push_back("u");
    // the full bases C_i participate whenever some singleton has a 0-bit
    bool need_bases = false;
    for (const auto& pat : H)
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (pat[i] == '0') need_bases = true;
    if (need_bases)
        for (std::size_t i = 0; i + 1 < m; ++i)
            for (std::size_t j = 1; j < 3; ++j)
                bp.vectors.add_real("C" + std::to_string(i + 1) + ":" + std::to_string(j),
                                    seed.bases[i][j]);

    int sg = 0;
    for (const auto& pat : H) {
        const std::string hp = "H" + std::to_string(sg++) + ":";
        // T_j sets: t_i = v_i when pat[i] = 1, else each other member of C_i
        std::vector<std::vector<std::vector<double>>> choices;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            if (pat[i] == '1')
                choices.push_back({seed.v[i]});
            else
                choices.push_back({seed.bases[i][1], seed.bases[i][2]});
        }
        std::vector<std::size_t> pick(choices.size(), 0);
        int tj = 0;
        while (true) {
            std::vector<std::vector<double>> T;
            for (std::size_t i = 0; i < choices.size(); ++i) T.push_back(choices[i][pick[i]]);
            detail::add_all_ones_gadget(bp, T, seed.u, pat[m - 1] == '1' ? 1 : 0,
                                        hp + "T" + std::to_string(tj++) + ":");
            std::size_t ii = choices.size();
            while (ii > 0 && pick[ii - 1] + 1 == choices[ii - 1].size()) pick[--ii] = 0;
            if (ii == 0) break;
            ++pick[ii - 1];
        }
    }
    bp.parameters = {{"m", double(m)}, {"patterns", double(H.size())}};
    bp.finalize();
    return bp;
}

// ---------------------------------------------------------------------------
// Extended-gadget and channel material
// ---------------------------------------------------------------------------

// The Clifton eight-ray bug: the basic extended 01-gadget; overlap of the
// distinguished pair is 1/3.
inline GadgetBlueprint build_bug() {
    GadgetBlueprint bp;
    bp.vectors = VectorSet(3);
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
    bp.vectors.add_real("b1", {1, 0, 0});
    bp.vectors.add_real("b2", {0, -s3 / 2, 0.5});
    bp.vectors.add_real("b3", {0, s3 / 2, 0.5});
    bp.vectors.add_real("b4", {-1, -s2 / 2, -s6 / 2});
    bp.vectors.add_real("b5", {-1, -s2 / 2, s6 / 2});
    bp.vectors.add_real("b6", {s2 / 3, -1.0 / 6, -s3 / 6});
    bp.vectors.add_real("b7", {s2 / 3, -1.0 / 6, s3 / 6});
    bp.vectors.add_real("b8", {1.0 / 3, 2 * s2 / 3, 0});
    bp.distinguished = {"b1", "b8"};
    bp.parameters = {{"overlap", 1.0 / 3.0}};
    bp.finalize();
    return bp;
}

// Base-completed bug in d = 3: the extended-gadget test bed for the binary
// box polytopes (every edge lies in a triangle).
inline GadgetBlueprint build_extended_gadget() {
    GadgetBlueprint bug = build_bug();
    GadgetBlueprint bp;
    bp.vectors = complete_bases(bug.vectors);
    bp.distinguished = bug.distinguished;
    bp.parameters = bug.parameters;
    bp.finalize();
    return bp;
}

// 24-ray channel material in d = 4: the bug (distinguished set, w* weights)
// completed into six disjoint maximum cliques.  Four bases pair the bug's
// internal edges with their orthocomplements; two more bases pad the count.
inline GadgetBlueprint build_zec_gadget24() {
    GadgetBlueprint bug = build_bug();
    GadgetBlueprint bp;
    bp.vectors = VectorSet(4);
    for (const auto& l : bug.vectors.labels()) {
        std::vector<double> v;
        for (const auto& z : bug.vectors.at(l)) v.push_back(z.real());
        v.push_back(0.0);
        bp.vectors.add_real(l, v);
        bp.distinguished.push_back(l);
    }
    // orthopair completions of the bug edges (b1,b2), (b3,b5), (b4,b6), (b7,b8)
    const std::array<std::pair<const char*, const char*>, 4> pairs = {
        {{"b1", "b2"}, {"b3", "b5"}, {"b4", "b6"}, {"b7", "b8"}}};
    const std::array<double, 4> phis = {0.37, 0.93, 1.41, 0.19};
    auto orthopair = [&](const std::string& la, const std::string& lb, double phi, int id) {
        const Vec& a4 = bp.vectors.at(la);
        const Vec& b4 = bp.vectors.at(lb);
        // two-dimensional orthocomplement of span(a, b) in R^4 via Gram-Schmidt
        std::vector<std::vector<double>> basis;
        auto push = [&](std::vector<double> v) {
            for (const auto& w : basis) {
                double c = 0;
                for (int k = 0; k < 4; ++k) c += w[k] * v[k];
                for (int k = 0; k < 4; ++k) v[k] -= c * w[k];
            }
            double n = 0;
            for (double x : v) n += x * x;
            if (std::sqrt(n) < 1e-9) return;
            for (auto& x : v) x /= std::sqrt(n);
            basis.push_back(v);
        };
        push({a4[0].real(), a4[1].real(), a4[2].real(), a4[3].real()});
        push({b4[0].real(), b4[1].real(), b4[2].real(), b4[3].real()});
        for (int k = 0; k < 4 && basis.size() < 4; ++k) {
            std::vector<double> e(4, 0.0);
            e[k] = 1;
            push(e);
        }
        const auto& c1 = basis[2];
        const auto& c2 = basis[3];
        std::vector<double> x(4), y(4);
        for (int k = 0; k < 4; ++k) {
            x[k] = std::cos(phi) * c1[k] + std::sin(phi) * c2[k];
            y[k] = -std::sin(phi) * c1[k] + std::cos(phi) * c2[k];
        }
        bp.vectors.add_real("p" + std::to_string(id) + "a", x);
        bp.vectors.add_real("p" + std::to_string(id) + "b", y);
    };
    for (int i = 0; i < 4; ++i) orthopair(pairs[i].first, pairs[i].second, phis[i], i);
    // two padding bases, rotated so no ray collides with the rest
    auto rot4 = [&](double ax, double ay, double az) {
        std::vector<std::vector<double>> B = {
            {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
        auto apply = [&](int i, int j, double ang) {
            for (auto& v : B) {
                double vi = v[i], vj = v[j];
                v[i] = std::cos(ang) * vi - std::sin(ang) * vj;
                v[j] = std::sin(ang) * vi + std::cos(ang) * vj;
            }
        };
        apply(0, 1, ax);
        apply(1, 2, ay);
        apply(2, 3, az);
        apply(0, 3, ax * 0.5 + 0.11);
        return B;
    };
    int id = 0;
    for (const auto& B : {rot4(0.61, 1.13, 0.29), rot4(1.07, 0.41, 0.83)}) {
        ++id;
        int j = 0;
        for (const auto& v : B)
            bp.vectors.add_real("q" + std::to_string(id) + std::to_string(++j), v);
    }
    bp.parameters = {{"d", 4}, {"q", 6}, {"v_dist", 8}};
    bp.finalize();
    return bp;
}

}  // namespace ksgk

#endif
