#ifndef KSGK_GRAPH_HPP
#define KSGK_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ksgk {

class GraphError : public std::runtime_error {
  public:
    explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

// Labeled simple undirected graph with optional nonnegative vertex weights.
// Vertices are strings so constructions can name rays (m_1, v_4t+3, ...)
// without a translation layer.  Immutable after construction.
class Graph {
  public:
    Graph() = default;

    Graph(std::vector<std::string> vertices,
          std::vector<std::pair<std::string, std::string>> edges,
          std::map<std::string, double> weights = {}) {
        for (const auto& v : vertices) {
            if (index_.count(v)) throw GraphError("duplicate vertex label: " + v);
            index_[v] = labels_.size();
            labels_.push_back(v);
        }
        const std::size_t n = labels_.size();
        words_ = (n + 63) / 64;
        adj_.assign(n * words_, 0);
        for (const auto& [a, b] : edges) {
            if (a == b) throw GraphError("self-loop on vertex: " + a);
            add_edge_checked(a, b);
        }
        if (!weights.empty()) {
            for (const auto& [v, w] : weights) {
                if (!index_.count(v)) throw GraphError("weight for unknown vertex: " + v);
                if (w < 0) throw GraphError("negative weight on vertex: " + v);
            }
            weights_ = std::vector<double>(n, 1.0);
            for (const auto& [v, w] : weights) (*weights_)[index_.at(v)] = w;
        }
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& vertices() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_[i]; }

    bool has_vertex(const std::string& v) const { return index_.count(v) != 0; }

    std::size_t index_of(const std::string& v) const {
        auto it = index_.find(v);
        if (it == index_.end()) throw GraphError("unknown vertex: " + v);
        return it->second;
    }

    bool adjacent(std::size_t i, std::size_t j) const {
        return (adj_[i * words_ + j / 64] >> (j % 64)) & 1u;
    }
    bool adjacent(const std::string& a, const std::string& b) const {
        return adjacent(index_of(a), index_of(b));
    }

    std::size_t edge_count() const {
        std::size_t m = 0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (adjacent(i, j)) ++m;
        return m;
    }

    // Edges as label pairs, each pair and the list sorted lexicographically.
    std::vector<std::pair<std::string, std::string>> edges() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (adjacent(i, j)) {
                    auto a = labels_[i], b = labels_[j];
                    if (b < a) std::swap(a, b);
                    out.emplace_back(a, b);
                }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool weighted() const { return weights_.has_value(); }
    double weight(std::size_t i) const { return weights_ ? (*weights_)[i] : 1.0; }
    double weight(const std::string& v) const { return weight(index_of(v)); }

    bool is_clique(const std::vector<std::size_t>& vs) const {
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                if (!adjacent(vs[i], vs[j])) return false;
        return true;
    }

    bool is_independent(const std::vector<std::size_t>& vs) const {
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                if (adjacent(vs[i], vs[j])) return false;
        return true;
    }

    std::vector<std::size_t> neighbors(std::size_t v) const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < size(); ++j)
            if (adjacent(v, j)) out.push_back(j);
        return out;
    }

    // Subgraph induced on the given labels; vertex order follows `keep`.
    Graph induced(const std::vector<std::string>& keep) const {
        std::vector<std::pair<std::string, std::string>> es;
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t j = i + 1; j < keep.size(); ++j)
                if (adjacent(keep[i], keep[j])) es.emplace_back(keep[i], keep[j]);
        std::map<std::string, double> ws;
        if (weights_)
            for (const auto& v : keep) ws[v] = weight(v);
        return Graph(keep, es, ws);
    }

    Graph with_weights(std::map<std::string, double> ws) const {
        std::vector<std::pair<std::string, std::string>> es = edges();
        for (const auto& v : labels_)
            if (!ws.count(v)) ws[v] = 1.0;
        return Graph(labels_, es, ws);
    }

    const std::vector<std::uint64_t>& adjacency_row(std::size_t i, std::size_t& words) const {
        words = words_;
        return adj_;
    }

  private:
    void add_edge_checked(const std::string& a, const std::string& b) {
        auto ia = index_.find(a), ib = index_.find(b);
        if (ia == index_.end()) throw GraphError("edge endpoint not declared: " + a);
        if (ib == index_.end()) throw GraphError("edge endpoint not declared: " + b);
        std::size_t i = ia->second, j = ib->second;
        adj_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
        adj_[j * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
    }

    std::vector<std::string> labels_;
    std::map<std::string, std::size_t> index_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> adj_;
    std::optional<std::vector<double>> weights_;
};

}  // namespace ksgk

#endif
