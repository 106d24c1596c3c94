#ifndef KSGK_SAT_HPP
#define KSGK_SAT_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ksgk/cliques.hpp"
#include "ksgk/coloring.hpp"
#include "ksgk/graph.hpp"
#include "ksgk/vectors.hpp"

namespace ksgk {

class SatError : public std::runtime_error {
  public:
    explicit SatError(const std::string& what) : std::runtime_error(what) {}
};

class NotDimensionThree : public SatError {
  public:
    NotDimensionThree() : SatError("operation requires dimension 3") {}
};

class CompletionRequired : public SatError {
  public:
    explicit CompletionRequired(const std::string& what) : SatError(what) {}
};

struct CnfInstance {
    std::map<std::string, int> variable_map;  // label -> 1..n, contiguous
    std::vector<std::vector<int>> clauses;    // DIMACS convention
    bool one_in_three = false;                // exactly-one semantics marker

    int var(const std::string& label) const {
        auto it = variable_map.find(label);
        if (it == variable_map.end()) throw SatError("no variable for label " + label);
        return it->second;
    }

    std::string to_dimacs() const {
        std::ostringstream os;
        for (const auto& [label, v] : variable_map) os << "c map " << label << " " << v << "\n";
        if (one_in_three) os << "c semantics exactly-one-per-clause\n";
        os << "p cnf " << variable_map.size() << " " << clauses.size() << "\n";
        for (const auto& cl : clauses) {
            for (int lit : cl) os << lit << " ";
            os << "0\n";
        }
        return os.str();
    }
};

// Edge clauses (~u | ~v) plus one positive clause per maximum clique.
// Satisfiable iff the graph is Def-1 colorable.
inline CnfInstance export_cnf(const Graph& g) {
    if (g.size() == 0) throw SatError("empty graph");
    CnfInstance cnf;
    std::vector<std::string> labels = g.vertices();
    std::sort(labels.begin(), labels.end());
    int next = 1;
    for (const auto& l : labels) cnf.variable_map[l] = next++;
    for (const auto& [a, b] : g.edges())
        cnf.clauses.push_back({-cnf.var(a), -cnf.var(b)});
    for (const auto& c : max_cliques(g)) {
        std::vector<int> cl;
        for (const auto& v : c) cl.push_back(cnf.var(v));
        cnf.clauses.push_back(cl);
    }
    return cnf;
}

// Adds unit clauses on top of an instance (used e.g. to pin distinguished
// vertices to value 1 and obtain the gadget's unsatisfiable variant).
inline CnfInstance with_units(CnfInstance cnf, const std::map<std::string, int>& pins) {
    for (const auto& [label, bit] : pins)
        cnf.clauses.push_back({bit ? cnf.var(label) : -cnf.var(label)});
    return cnf;
}

struct OneInThreeExport {
    CnfInstance exactly_one;  // triangle clauses, 1-in-3 semantics
    CnfInstance plain;        // reduction with pairwise exclusions
};

inline OneInThreeExport export_one_in_three(const Graph& g, const VectorSet& vs) {
    if (vs.dimension() != 3) throw NotDimensionThree();
    auto triangles = max_cliques(g);
    if (triangles.empty() || triangles.front().size() != 3)
        throw CompletionRequired("graph has no triangle cliques; complete bases first");
    // every edge must lie in some triangle
    for (const auto& [a, b] : g.edges()) {
        bool inside = false;
        for (const auto& t : triangles) {
            bool ha = false, hb = false;
            for (const auto& v : t) {
                ha |= (v == a);
                hb |= (v == b);
            }
            if (ha && hb) {
                inside = true;
                break;
            }
        }
        if (!inside)
            throw CompletionRequired("edge (" + a + "," + b + ") lies in no triangle");
    }
    OneInThreeExport out;
    std::vector<std::string> labels = g.vertices();
    std::sort(labels.begin(), labels.end());
    int next = 1;
    for (const auto& l : labels) out.exactly_one.variable_map[l] = next++;
    out.exactly_one.one_in_three = true;
    for (const auto& t : triangles) {
        std::vector<int> cl;
        for (const auto& v : t) cl.push_back(out.exactly_one.var(v));
        out.exactly_one.clauses.push_back(cl);
    }
    out.plain.variable_map = out.exactly_one.variable_map;
    for (const auto& cl : out.exactly_one.clauses) {
        out.plain.clauses.push_back(cl);
        for (std::size_t i = 0; i < cl.size(); ++i)
            for (std::size_t j = i + 1; j < cl.size(); ++j)
                out.plain.clauses.push_back({-cl[i], -cl[j]});
    }
    return out;
}

namespace detail {

inline Vec cross3(const Vec& a, const Vec& b) {
    // real cross product; imaginary parts must vanish for the d=3 path
    auto re = [](const Complex& z) { return z.real(); };
    Vec c(3);
    c[0] = Complex(re(a[1]) * re(b[2]) - re(a[2]) * re(b[1]), 0);
    c[1] = Complex(re(a[2]) * re(b[0]) - re(a[0]) * re(b[2]), 0);
    c[2] = Complex(re(a[0]) * re(b[1]) - re(a[1]) * re(b[0]), 0);
    return c;
}

inline bool is_real(const VectorSet& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (const auto& z : vs.at(i))
            if (std::abs(z.imag()) > vs.tolerance()) return false;
    return true;
}

// Orthonormal extension of a mutually orthogonal family to a full basis,
// by Gram-Schmidt over the standard basis (deterministic).
inline std::vector<Vec> complement_basis(const std::vector<Vec>& span, std::size_t d,
                                         double eps) {
    std::vector<Vec> basis = span;
    std::vector<Vec> added;
    for (std::size_t k = 0; k < d && basis.size() < d; ++k) {
        Vec e(d, Complex{0, 0});
        e[k] = Complex{1, 0};
        for (const auto& b : basis) {
            Complex c = inner(b, e);
            for (std::size_t t = 0; t < d; ++t) e[t] -= c * b[t];
        }
        double n = norm(e);
        if (n > std::max(eps, 1e-12) * 10) {
            for (auto& z : e) z /= n;
            basis.push_back(e);
            added.push_back(e);
        }
    }
    return added;
}

}  // namespace detail

// Adds the missing basis vectors so that every maximal clique of the
// orthogonality graph reaches size d (in d=3: every edge gains its third
// ray via the cross product).  Original vectors are kept; added vectors get
// the reserved "aux:" prefix; parallel duplicates are merged away.
inline VectorSet complete_bases(const VectorSet& vs) {
    VectorSet cur = vs;
    const std::size_t d = vs.dimension();
    int counter = 0;
    for (int round = 0; round < 64; ++round) {
        Graph g = orthogonality_graph(cur, DuplicatePolicy::Warn);
        auto cliques = maximal_cliques(g);
        bool changed = false;
        VectorSet next = cur;
        for (const auto& c : cliques) {
            if (c.size() >= d) continue;
            if (d == 3 && c.size() == 2 && detail::is_real(cur)) {
                Vec third = detail::cross3(cur.at(c[0]), cur.at(c[1]));
                if (norm(third) < 1e-12) continue;
                third = normalized(std::move(third));
                bool dup = false;
                for (std::size_t i = 0; i < next.size(); ++i)
                    if (std::abs(std::abs(inner(next.at(i), third)) - 1.0) <= cur.tolerance() * 1e3) {
                        dup = true;
                        break;
                    }
                if (!dup) {
                    next.add("aux:" + std::to_string(counter++), third, false);
                    changed = true;
                }
            } else {
                std::vector<Vec> span;
                for (const auto& l : c) span.push_back(cur.at(l));
                for (const auto& v : detail::complement_basis(span, d, cur.tolerance())) {
                    bool dup = false;
                    for (std::size_t i = 0; i < next.size(); ++i)
                        if (std::abs(std::abs(inner(next.at(i), v)) - 1.0) <= cur.tolerance() * 1e3) {
                            dup = true;
                            break;
                        }
                    if (!dup) {
                        next.add("aux:" + std::to_string(counter++), v, false);
                        changed = true;
                    }
                }
            }
        }
        if (!changed) return cur;
        cur = std::move(next);
    }
    throw SatError("base completion did not converge");
}

struct SolverVerdict {
    bool satisfiable = false;
    std::optional<std::map<std::string, int>> model;
};

// Runs an external DIMACS solver as a subprocess.  The solver must print
// SAT/SATISFIABLE or UNSAT/UNSATISFIABLE, optionally followed by a model
// line of integer literals.  Path resolution: explicit argument, then the
// KSGK_SAT_SOLVER environment variable.
inline SolverVerdict run_external_solver(const CnfInstance& cnf,
                                         const std::string& solver_path = "") {
    std::string path = solver_path;
    if (path.empty()) {
        const char* env = std::getenv("KSGK_SAT_SOLVER");
        if (env) path = env;
    }
    if (path.empty()) throw SatError("no external solver configured (set KSGK_SAT_SOLVER)");

    char tmpl[] = "/tmp/ksgk_cnf_XXXXXX";
    int fd = mkstemp(tmpl);
    if (fd < 0) throw SatError("cannot create temporary CNF file");
    {
        std::string text = cnf.to_dimacs();
        FILE* f = fdopen(fd, "w");
        fwrite(text.data(), 1, text.size(), f);
        fclose(f);
    }
    std::string cmd = path + " " + tmpl + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        std::remove(tmpl);
        throw SatError("cannot run external solver: " + path);
    }
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
    pclose(pipe);
    std::remove(tmpl);

    SolverVerdict v;
    if (output.find("UNSAT") != std::string::npos) {
        v.satisfiable = false;
    } else if (output.find("SAT") != std::string::npos) {
        v.satisfiable = true;
        std::map<int, std::string> rev;
        for (const auto& [label, var] : cnf.variable_map) rev[var] = label;
        std::map<std::string, int> model;
        std::istringstream is(output);
        std::string tok;
        while (is >> tok) {
            try {
                int lit = std::stoi(tok);
                if (lit == 0) continue;
                int var = std::abs(lit);
                auto it = rev.find(var);
                if (it != rev.end()) model[it->second] = lit > 0 ? 1 : 0;
            } catch (...) {
                continue;
            }
        }
        if (!model.empty()) v.model = model;
    } else {
        throw SatError("unrecognized solver output: " + output.substr(0, 200));
    }
    return v;
}

}  // namespace ksgk

#endif
