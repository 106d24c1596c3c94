#ifndef KSGK_VECTORS_HPP
#define KSGK_VECTORS_HPP

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksgk/graph.hpp"

namespace ksgk {

using Complex = std::complex<double>;
using Vec = std::vector<Complex>;

class VectorError : public std::runtime_error {
  public:
    explicit VectorError(const std::string& what) : std::runtime_error(what) {}
};

class DuplicateRay : public VectorError {
  public:
    DuplicateRay(const std::string& a, const std::string& b)
        : VectorError("parallel rays: " + a + " and " + b), first(a), second(b) {}
    std::string first, second;
};

class LabelMismatch : public VectorError {
  public:
    explicit LabelMismatch(const std::string& what) : VectorError(what) {}
};

inline Complex inner(const Vec& a, const Vec& b) {
    Complex s{0, 0};
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(std::abs(inner(a, a))); }

inline Vec normalized(Vec a) {
    double n = norm(a);
    if (n == 0) throw VectorError("cannot normalize zero vector");
    for (auto& x : a) x /= n;
    return a;
}

// Labeled unit vectors in C^d with an explicit tolerance.  All orthogonality
// and parallelism decisions in the toolkit go through this epsilon.
class VectorSet {
  public:
    VectorSet() = default;
    VectorSet(std::size_t dimension, double tolerance = 1e-9)
        : d_(dimension), eps_(tolerance) {
        if (dimension == 0) throw VectorError("dimension must be positive");
        if (tolerance < 0) throw VectorError("tolerance must be nonnegative");
    }

    std::size_t dimension() const { return d_; }
    double tolerance() const { return eps_; }
    void set_tolerance(double eps) { eps_ = eps; }

    void add(const std::string& label, Vec v, bool normalize = true) {
        if (index_.count(label)) throw VectorError("duplicate vector label: " + label);
        if (v.size() != d_) throw VectorError("vector " + label + " has wrong dimension");
        if (normalize)
            v = normalized(std::move(v));
        else if (std::abs(norm(v) - 1.0) > eps_)
            throw VectorError("vector " + label + " is not unit norm");
        index_[label] = labels_.size();
        labels_.push_back(label);
        vecs_.push_back(std::move(v));
    }

    // Real shorthand
    void add_real(const std::string& label, const std::vector<double>& v, bool normalize = true) {
        Vec c(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) c[k] = Complex(v[k], 0);
        add(label, std::move(c), normalize);
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    bool has(const std::string& label) const { return index_.count(label) != 0; }
    const Vec& at(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) throw VectorError("unknown vector label: " + label);
        return vecs_[it->second];
    }
    const Vec& at(std::size_t i) const { return vecs_[i]; }
    const std::string& label(std::size_t i) const { return labels_[i]; }

    std::vector<std::vector<Complex>> gram() const {
        const std::size_t n = size();
        std::vector<std::vector<Complex>> G(n, std::vector<Complex>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) G[i][j] = inner(vecs_[i], vecs_[j]);
        return G;
    }

    // Merge labels whose rays coincide within eps; keeps the first label seen.
    // Returns the merge map (dropped label -> kept label).
    std::map<std::string, std::string> dedup_rays() {
        std::map<std::string, std::string> merged;
        std::vector<std::string> keep_labels;
        std::vector<Vec> keep_vecs;
        for (std::size_t i = 0; i < size(); ++i) {
            bool dup = false;
            for (std::size_t k = 0; k < keep_vecs.size(); ++k) {
                if (std::abs(std::abs(inner(keep_vecs[k], vecs_[i])) - 1.0) <= eps_ * 1e3) {
                    merged[labels_[i]] = keep_labels[k];
                    dup = true;
                    break;
                }
            }
            if (!dup) {
                keep_labels.push_back(labels_[i]);
                keep_vecs.push_back(vecs_[i]);
            }
        }
        labels_ = std::move(keep_labels);
        vecs_ = std::move(keep_vecs);
        index_.clear();
        for (std::size_t i = 0; i < labels_.size(); ++i) index_[labels_[i]] = i;
        return merged;
    }

  private:
    std::size_t d_ = 0;
    double eps_ = 1e-9;
    std::vector<std::string> labels_;
    std::vector<Vec> vecs_;
    std::map<std::string, std::size_t> index_;
};

struct SpuriousEdge {
    std::string a, b;
    double residual;  // |<a|b>| for an adjacent but non-orthogonal pair
};

struct FaithfulnessReport {
    std::vector<std::pair<std::string, std::string>> missing_edges;
    std::vector<SpuriousEdge> spurious_edges;
    std::vector<std::pair<std::string, std::string>> parallel_pairs;
    bool faithful() const {
        return missing_edges.empty() && spurious_edges.empty() && parallel_pairs.empty();
    }
};

enum class DuplicatePolicy { Error, Warn };

// Edge iff |<v_i|v_j>| <= eps.  Parallel label pairs raise DuplicateRay unless
// the caller downgrades to a warning list.
inline Graph orthogonality_graph(const VectorSet& vs,
                                 DuplicatePolicy policy = DuplicatePolicy::Error,
                                 std::vector<std::pair<std::string, std::string>>* warnings = nullptr) {
    const std::size_t n = vs.size();
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double ov = std::abs(inner(vs.at(i), vs.at(j)));
            if (ov <= vs.tolerance()) edges.emplace_back(vs.label(i), vs.label(j));
            if (std::abs(ov - 1.0) <= vs.tolerance() * 1e3) {
                if (policy == DuplicatePolicy::Error) throw DuplicateRay(vs.label(i), vs.label(j));
                if (warnings) warnings->emplace_back(vs.label(i), vs.label(j));
            }
        }
    }
    return Graph(vs.labels(), edges);
}

inline FaithfulnessReport check_faithful(const VectorSet& vs, const Graph& g) {
    if (vs.size() != g.size()) throw LabelMismatch("vector set and graph differ in size");
    for (const auto& l : vs.labels())
        if (!g.has_vertex(l)) throw LabelMismatch("graph lacks vertex " + l);
    FaithfulnessReport rep;
    const std::size_t n = vs.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double ov = std::abs(inner(vs.at(i), vs.at(j)));
            bool orth = ov <= vs.tolerance();
            bool adj = g.adjacent(vs.label(i), vs.label(j));
            if (orth && !adj) rep.missing_edges.emplace_back(vs.label(i), vs.label(j));
            if (!orth && adj) rep.spurious_edges.push_back({vs.label(i), vs.label(j), ov});
            if (std::abs(ov - 1.0) <= vs.tolerance() * 1e3)
                rep.parallel_pairs.emplace_back(vs.label(i), vs.label(j));
        }
    }
    return rep;
}

// Max-entry norm of  sum_i |u_i><u_i|  -  (N/d) Id.
inline double frame_residual(const VectorSet& vs) {
    const std::size_t d = vs.dimension();
    const std::size_t n = vs.size();
    std::vector<std::vector<Complex>> S(d, std::vector<Complex>(d, Complex{0, 0}));
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& u = vs.at(i);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) S[r][c] += u[r] * std::conj(u[c]);
    }
    const double scale = static_cast<double>(n) / static_cast<double>(d);
    double worst = 0.0;
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            Complex want = (r == c) ? Complex(scale, 0) : Complex(0, 0);
            worst = std::max(worst, std::abs(S[r][c] - want));
        }
    return worst;
}

}  // namespace ksgk

#endif
