// Copyright 2026 The ftperc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ftperc/circuit.hpp"

namespace ftperc {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

struct Vertex {
    VertexId id = 0;
    std::string kind;
    std::uint32_t time = 1;
    std::vector<std::uint32_t> qubits;

    bool operator==(const Vertex &) const = default;
};

/// Simple undirected graph over gate locations. Edges are stored with the
/// smaller endpoint first and in lexicographic order; adjacency lists are
/// sorted.
class InteractionGraph {
   public:
    InteractionGraph() = default;

    /// Builds from explicit vertices (ids must be 0..n-1 in order) and an
    /// edge list. Duplicate edges are merged; self-loops are rejected.
    InteractionGraph(std::vector<Vertex> vertices, std::vector<Edge> edges) : vertices_(std::move(vertices)) {
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (vertices_[i].id != i) {
                throw std::invalid_argument("vertex ids must be 0..n-1 in order");
            }
        }
        for (auto &e : edges) {
            if (e.first == e.second) {
                throw std::invalid_argument("self-loop on vertex " + std::to_string(e.first));
            }
            if (e.first >= vertices_.size() || e.second >= vertices_.size()) {
                throw std::invalid_argument("edge endpoint out of range");
            }
            if (e.first > e.second) {
                std::swap(e.first, e.second);
            }
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        edges_ = std::move(edges);
        adjacency_.assign(vertices_.size(), {});
        for (const auto &[u, v] : edges_) {
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (auto &a : adjacency_) {
            std::sort(a.begin(), a.end());
        }
    }

    std::size_t n_vertices() const {
        return vertices_.size();
    }
    std::size_t n_edges() const {
        return edges_.size();
    }
    const std::vector<Vertex> &vertices() const {
        return vertices_;
    }
    const Vertex &vertex(VertexId v) const {
        return vertices_.at(v);
    }
    const std::vector<Edge> &edges() const {
        return edges_;
    }
    const std::vector<VertexId> &neighbors(VertexId v) const {
        return adjacency_.at(v);
    }
    std::size_t degree(VertexId v) const {
        return adjacency_.at(v).size();
    }
    bool has_edge(VertexId u, VertexId v) const {
        if (u > v) {
            std::swap(u, v);
        }
        return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
    }

    bool operator==(const InteractionGraph &other) const {
        return vertices_ == other.vertices_ && edges_ == other.edges_;
    }

   private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<VertexId>> adjacency_;
};

/// One vertex per gate (identities included); an edge joins gates at
/// consecutive timesteps that share at least one qubit wire. Parallel wires
/// between the same pair of gates collapse to a single edge.
inline InteractionGraph build_interaction_graph(const Circuit &circuit) {
    std::vector<Vertex> vertices;
    vertices.reserve(circuit.gates().size());
    for (const auto &g : circuit.gates()) {
        vertices.push_back(Vertex{g.id, g.kind, g.time, g.qubits});
    }
    std::vector<Edge> edges;
    for (std::size_t t = 1; t < circuit.n_steps(); ++t) {
        for (std::size_t q = 0; q < circuit.n_qubits(); ++q) {
            edges.emplace_back(circuit.gate_id_at(q, t), circuit.gate_id_at(q, t + 1));
        }
    }
    return InteractionGraph(std::move(vertices), std::move(edges));
}

struct GraphStats {
    std::size_t n_vertices = 0;
    std::size_t n_edges = 0;
    std::size_t max_degree = 0;
    std::size_t n_components = 0;
    /// ball_sizes[n] = number of vertices within path length n of the root.
    std::vector<std::size_t> ball_sizes;
};

/// Number of connected components (isolated vertices count as components).
inline std::size_t count_components(const InteractionGraph &graph) {
    std::vector<bool> seen(graph.n_vertices(), false);
    std::vector<VertexId> stack;
    std::size_t components = 0;
    for (VertexId s = 0; s < graph.n_vertices(); ++s) {
        if (seen[s]) {
            continue;
        }
        ++components;
        seen[s] = true;
        stack.push_back(s);
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            for (VertexId w : graph.neighbors(v)) {
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
    }
    return components;
}

inline GraphStats graph_stats(const InteractionGraph &graph, VertexId root, std::size_t n_max) {
    if (root >= graph.n_vertices()) {
        throw std::out_of_range("root vertex " + std::to_string(root) + " out of range");
    }
    GraphStats st;
    st.n_vertices = graph.n_vertices();
    st.n_edges = graph.n_edges();
    for (VertexId v = 0; v < graph.n_vertices(); ++v) {
        st.max_degree = std::max(st.max_degree, graph.degree(v));
    }
    st.n_components = count_components(graph);

    // Breadth-first layers from the root.
    std::vector<std::size_t> dist(graph.n_vertices(), SIZE_MAX);
    std::vector<std::size_t> layer_count(n_max + 1, 0);
    std::deque<VertexId> queue{root};
    dist[root] = 0;
    while (!queue.empty()) {
        const VertexId v = queue.front();
        queue.pop_front();
        layer_count[dist[v]]++;
        if (dist[v] == n_max) {
            continue;
        }
        for (VertexId w : graph.neighbors(v)) {
            if (dist[w] == SIZE_MAX) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    st.ball_sizes.resize(n_max + 1);
    std::size_t acc = 0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        acc += layer_count[n];
        st.ball_sizes[n] = acc;
    }
    return st;
}

}  // namespace ftperc
