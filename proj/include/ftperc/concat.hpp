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
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ftperc/interaction_graph.hpp"
#include "ftperc/parallel.hpp"
#include "ftperc/percolation.hpp"
#include "ftperc/rg_map.hpp"

namespace ftperc {

/// Structural stand-in for the procedure simulating one gate: A locations,
/// the first `recovery_size` of which form the recovery stage.
struct GadgetTemplate {
    int A = 0;
    int recovery_size = 0;
    std::vector<std::pair<int, int>> internal_edges;
    std::vector<int> input_ports;
    std::vector<int> output_ports;

    bool operator==(const GadgetTemplate &) const = default;

    /// Recovery stage is a path of ceil(A/2) locations, followed by the gate
    /// stage path; wires enter at local 0 and leave at local A-1.
    static GadgetTemplate path(int A) {
        if (A < 2) {
            throw std::invalid_argument("default gadget needs A >= 2");
        }
        GadgetTemplate t;
        t.A = A;
        t.recovery_size = (A + 1) / 2;
        for (int i = 0; i + 1 < A; ++i) {
            t.internal_edges.emplace_back(i, i + 1);
        }
        t.input_ports = {0};
        t.output_ports = {A - 1};
        return t;
    }

    void validate() const {
        if (A < 1) {
            throw std::invalid_argument("gadget must have A >= 1 locations");
        }
        if (recovery_size < 0 || recovery_size > A) {
            throw std::invalid_argument("recovery_size must lie in [0, A]");
        }
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(A));
        for (const auto &[a, b] : internal_edges) {
            if (a < 0 || a >= A || b < 0 || b >= A) {
                throw std::invalid_argument("internal edge endpoint out of range");
            }
            if (a == b) {
                throw std::invalid_argument("internal edge is a self-loop");
            }
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        for (const auto &ports : {input_ports, output_ports}) {
            for (int p : ports) {
                if (p < 0 || p >= A) {
                    throw std::invalid_argument("port index out of range");
                }
            }
        }
        std::vector<bool> seen(static_cast<std::size_t>(A), false);
        std::vector<int> stack{0};
        seen[0] = true;
        int reached = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : adj[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        if (reached != A) {
            throw std::invalid_argument("gadget graph must be connected");
        }
    }
};

/// A graph obtained by r rounds of gadget expansion, with the block
/// membership of every round. partitions[0] maps level-r vertices to
/// level-(r-1) vertices, partitions[1] level-(r-1) to level-(r-2), etc.
struct ExpandedGraph {
    InteractionGraph graph;
    std::vector<std::vector<VertexId>> partitions;
    std::vector<std::size_t> level_sizes;  // vertex count at levels r-1, r-2, ..., 0
    int level = 0;

    /// Outermost partition: fine vertex -> procedure (coarse vertex).
    const std::vector<VertexId> &partition() const {
        return partitions.front();
    }
    std::size_t n_coarse() const {
        return level_sizes.front();
    }
};

namespace detail {

inline InteractionGraph expand_once(const InteractionGraph &base, const GadgetTemplate &t, std::vector<VertexId> &partition) {
    const auto A = static_cast<std::size_t>(t.A);
    if (base.n_edges() > 0 && (t.input_ports.empty() || t.output_ports.empty())) {
        throw std::invalid_argument("cannot route wires: gadget has no input or output ports");
    }
    std::vector<Vertex> vertices;
    vertices.reserve(base.n_vertices() * A);
    partition.assign(base.n_vertices() * A, 0);
    for (const auto &bv : base.vertices()) {
        for (std::size_t j = 0; j < A; ++j) {
            const auto id = static_cast<VertexId>(bv.id * A + j);
            const bool recovery = j < static_cast<std::size_t>(t.recovery_size);
            vertices.push_back(Vertex{id, recovery ? "rec" : "proc", bv.time, bv.qubits});
            partition[id] = bv.id;
        }
    }
    std::vector<Edge> edges;
    edges.reserve(base.n_vertices() * t.internal_edges.size() + base.n_edges());
    for (VertexId v = 0; v < base.n_vertices(); ++v) {
        for (const auto &[a, b] : t.internal_edges) {
            edges.emplace_back(static_cast<VertexId>(v * A + a), static_cast<VertexId>(v * A + b));
        }
    }
    // Wires run from the smaller-id gadget's output ports to the larger-id
    // gadget's input ports, chosen round-robin per gadget in edge order.
    std::vector<std::size_t> next_out(base.n_vertices(), 0);
    std::vector<std::size_t> next_in(base.n_vertices(), 0);
    for (const auto &[u, w] : base.edges()) {
        const int out_port = t.output_ports[next_out[u]++ % t.output_ports.size()];
        const int in_port = t.input_ports[next_in[w]++ % t.input_ports.size()];
        edges.emplace_back(static_cast<VertexId>(u * A + out_port), static_cast<VertexId>(w * A + in_port));
    }
    return InteractionGraph(std::move(vertices), std::move(edges));
}

}  // namespace detail

/// Replaces every vertex by a fresh gadget copy and every edge by one wire
/// between gadget ports, `levels` times.
inline ExpandedGraph expand_graph(const InteractionGraph &base, const GadgetTemplate &t, int levels) {
    t.validate();
    if (levels < 1) {
        throw std::invalid_argument("expansion needs levels >= 1");
    }
    ExpandedGraph out;
    out.level = levels;
    InteractionGraph current = base;
    std::vector<std::vector<VertexId>> inner_first;
    std::vector<std::size_t> sizes;
    for (int r = 0; r < levels; ++r) {
        std::vector<VertexId> part;
        sizes.push_back(current.n_vertices());
        current = detail::expand_once(current, t, part);
        inner_first.push_back(std::move(part));
    }
    out.graph = std::move(current);
    out.partitions.assign(inner_first.rbegin(), inner_first.rend());
    out.level_sizes.assign(sizes.rbegin(), sizes.rend());
    return out;
}

/// Contracts each partition block to one vertex; coarse (u, v) is an edge iff
/// some fine edge crosses between the two blocks. Coarse vertex attributes
/// come from the lowest-id fine vertex of the block.
inline InteractionGraph contract(const InteractionGraph &fine, const std::vector<VertexId> &partition, std::size_t n_coarse) {
    if (partition.size() != fine.n_vertices()) {
        throw std::invalid_argument("partition size does not match graph");
    }
    std::vector<Vertex> vertices(n_coarse);
    std::vector<bool> filled(n_coarse, false);
    for (VertexId v = 0; v < fine.n_vertices(); ++v) {
        const VertexId c = partition[v];
        if (c >= n_coarse) {
            throw std::invalid_argument("partition label out of range");
        }
        if (!filled[c]) {
            const auto &fv = fine.vertex(v);
            vertices[c] = Vertex{c, "block", fv.time, fv.qubits};
            filled[c] = true;
        }
    }
    for (VertexId c = 0; c < n_coarse; ++c) {
        if (!filled[c]) {
            throw std::invalid_argument("partition block " + std::to_string(c) + " is empty");
        }
    }
    std::vector<Edge> edges;
    for (const auto &[u, v] : fine.edges()) {
        if (partition[u] != partition[v]) {
            edges.emplace_back(partition[u], partition[v]);
        }
    }
    return InteractionGraph(std::move(vertices), std::move(edges));
}

struct CoarseGrained {
    InteractionGraph graph;
    Configuration configuration;
};

/// Coarse vertex occupied iff at least k+1 fine vertices of its block are.
inline Configuration coarse_configuration(
    const std::vector<VertexId> &partition, std::size_t n_coarse, const Configuration &fine, int k) {
    if (fine.size() != partition.size()) {
        throw std::invalid_argument("configuration size does not match expanded graph");
    }
    if (k < 1) {
        throw std::invalid_argument("k must be >= 1");
    }
    std::vector<int> count(n_coarse, 0);
    for (std::size_t v = 0; v < partition.size(); ++v) {
        count[partition[v]] += fine.occupied[v] ? 1 : 0;
    }
    Configuration out;
    out.seed = fine.seed;
    out.occupied.resize(n_coarse);
    for (std::size_t c = 0; c < n_coarse; ++c) {
        out.occupied[c] = count[c] >= k + 1;
    }
    return out;
}

inline CoarseGrained coarse_grain(const ExpandedGraph &expanded, const Configuration &fine, int k) {
    if (fine.size() != expanded.graph.n_vertices()) {
        throw std::invalid_argument("configuration size does not match expanded graph");
    }
    CoarseGrained out;
    out.graph = contract(expanded.graph, expanded.partition(), expanded.n_coarse());
    out.configuration = coarse_configuration(expanded.partition(), expanded.n_coarse(), fine, k);
    const int block = static_cast<int>(expanded.graph.n_vertices() / std::max<std::size_t>(1, expanded.n_coarse()));
    out.configuration.eta = r_exact(fine.eta, RGParams{block, k, block});
    return out;
}

struct SelfSimilarityResult {
    bool ok = false;
    /// mapping[c] = base vertex matched by fully contracted vertex c.
    std::vector<VertexId> mapping;
    std::optional<Edge> divergent_edge;
    std::string message;
};

/// Contracts `expanded` level by level down to level 0 and compares the
/// result with `base` under the identity correspondence of block labels.
inline SelfSimilarityResult verify_self_similarity(const InteractionGraph &base, const ExpandedGraph &expanded) {
    SelfSimilarityResult res;
    InteractionGraph g = expanded.graph;
    for (std::size_t i = 0; i < expanded.partitions.size(); ++i) {
        g = contract(g, expanded.partitions[i], expanded.level_sizes[i]);
    }
    if (g.n_vertices() != base.n_vertices()) {
        res.message = "contracted graph has " + std::to_string(g.n_vertices()) + " vertices, base has " +
                      std::to_string(base.n_vertices());
        return res;
    }
    const auto &got = g.edges();
    const auto &want = base.edges();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < got.size() || j < want.size()) {
        if (j < want.size() && (i == got.size() || want[j] < got[i])) {
            res.divergent_edge = want[j];
            res.message = "missing coarse edge (" + std::to_string(want[j].first) + ", " +
                          std::to_string(want[j].second) + ")";
            return res;
        }
        if (j == want.size() || got[i] < want[j]) {
            res.divergent_edge = got[i];
            res.message = "unexpected coarse edge (" + std::to_string(got[i].first) + ", " +
                          std::to_string(got[i].second) + ")";
            return res;
        }
        ++i;
        ++j;
    }
    res.ok = true;
    res.mapping.resize(base.n_vertices());
    for (VertexId v = 0; v < base.n_vertices(); ++v) {
        res.mapping[v] = v;
    }
    res.message = "contracted graph matches base";
    return res;
}

struct RenormEstimate {
    double eta = 0.0;
    int k = 0;
    std::size_t trials = 0;
    std::size_t n_coarse = 0;
    double density = 0.0;
    double se = 0.0;
    double expected = 0.0;  // r_exact(eta) for blocks of size A
    /// Over pairs among the first kMaxCorrelationVertices coarse vertices.
    double max_abs_correlation = 0.0;
};

inline constexpr std::size_t kMaxCorrelationVertices = 512;

/// Monte Carlo check of the renormalized process: expands `base` once,
/// samples Bernoulli(eta) fine configurations (trial t keyed by
/// trial_seed(seed, t)), coarse-grains each and measures the coarse
/// occupation density and the largest pairwise Pearson correlation between
/// coarse occupancies. Counts are integers summed per chunk, so the result
/// is independent of `threads`.
inline RenormEstimate empirical_renormalized_density(
    const InteractionGraph &base, const GadgetTemplate &t, double eta, int k, std::size_t trials, std::uint64_t seed,
    std::size_t threads = 1) {
    check_density(eta);
    if (trials < 100) {
        throw std::invalid_argument("trials must be >= 100");
    }
    if (k < 1) {
        throw std::invalid_argument("k must be >= 1");
    }
    const auto expanded = expand_graph(base, t, 1);
    const std::size_t nc = expanded.n_coarse();
    const auto &part = expanded.partition();
    const std::size_t nf = expanded.graph.n_vertices();
    const std::size_t ncorr = std::min(nc, kMaxCorrelationVertices);

    struct Counts {
        std::vector<std::uint64_t> single;
        std::vector<std::uint64_t> joint;  // upper triangle, row-major
    };
    const std::size_t n_chunks = std::max<std::size_t>(1, std::min(threads, trials));
    std::vector<Counts> partial(n_chunks);
    parallel_chunks(trials, threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        Counts c{std::vector<std::uint64_t>(nc, 0), std::vector<std::uint64_t>(ncorr * ncorr, 0)};
        std::vector<int> hits(nc);
        std::vector<std::uint8_t> occ(nc);
        for (std::size_t tr = begin; tr < end; ++tr) {
            const std::uint64_t key = trial_seed(seed, tr);
            std::fill(hits.begin(), hits.end(), 0);
            for (std::size_t v = 0; v < nf; ++v) {
                hits[part[v]] += bernoulli(draw(key, v), eta) ? 1 : 0;
            }
            for (std::size_t i = 0; i < nc; ++i) {
                occ[i] = hits[i] >= k + 1;
                c.single[i] += occ[i];
            }
            for (std::size_t i = 0; i < ncorr; ++i) {
                if (!occ[i]) {
                    continue;
                }
                for (std::size_t j = i + 1; j < ncorr; ++j) {
                    c.joint[i * ncorr + j] += occ[j];
                }
            }
        }
        partial[chunk] = std::move(c);
    });
    std::vector<std::uint64_t> single(nc, 0);
    std::vector<std::uint64_t> joint(ncorr * ncorr, 0);
    for (const auto &c : partial) {
        for (std::size_t i = 0; i < nc; ++i) {
            single[i] += c.single[i];
        }
        for (std::size_t i = 0; i < ncorr * ncorr; ++i) {
            joint[i] += c.joint[i];
        }
    }

    RenormEstimate est;
    est.eta = eta;
    est.k = k;
    est.trials = trials;
    est.n_coarse = nc;
    est.expected = r_exact(eta, RGParams{t.A, k, t.A});
    std::uint64_t total = 0;
    for (auto s : single) {
        total += s;
    }
    const double samples = static_cast<double>(trials) * static_cast<double>(nc);
    est.density = static_cast<double>(total) / samples;
    est.se = std::sqrt(est.density * (1.0 - est.density) / samples);
    const double n = static_cast<double>(trials);
    for (std::size_t i = 0; i < ncorr; ++i) {
        const double pi = single[i] / n;
        for (std::size_t j = i + 1; j < ncorr; ++j) {
            const double pj = single[j] / n;
            const double var = pi * (1.0 - pi) * pj * (1.0 - pj);
            if (var <= 0.0) {
                continue;
            }
            const double corr = (joint[i * ncorr + j] / n - pi * pj) / std::sqrt(var);
            est.max_abs_correlation = std::max(est.max_abs_correlation, std::abs(corr));
        }
    }
    return est;
}

}  // namespace ftperc
