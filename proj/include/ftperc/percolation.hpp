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
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ftperc/circuit.hpp"
#include "ftperc/disjoint_set.hpp"
#include "ftperc/errors.hpp"
#include "ftperc/interaction_graph.hpp"
#include "ftperc/parallel.hpp"
#include "ftperc/rng.hpp"

namespace ftperc {

/// One occupied/vacant assignment over the vertices of a graph.
struct Configuration {
    std::vector<bool> occupied;
    double eta = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const {
        return occupied.size();
    }
    std::size_t count_occupied() const {
        return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), true));
    }
};

inline void check_density(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("occupation density must lie in [0, 1]");
    }
}

/// Vertex v is occupied iff draw v of the stream keyed by `seed` falls
/// below eta, so every vertex has its own counter-addressed variate.
inline Configuration sample_configuration(std::size_t n_vertices, double eta, std::uint64_t seed) {
    check_density(eta);
    Configuration c;
    c.eta = eta;
    c.seed = seed;
    c.occupied.resize(n_vertices);
    for (std::size_t v = 0; v < n_vertices; ++v) {
        c.occupied[v] = bernoulli(draw(seed, v), eta);
    }
    return c;
}

inline Configuration sample_configuration(const InteractionGraph &graph, double eta, std::uint64_t seed) {
    return sample_configuration(graph.n_vertices(), eta, seed);
}

/// Seed of the configuration used by Monte Carlo trial `trial`.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
    return substream(seed, trial);
}

struct ClusterDecomposition {
    static constexpr VertexId kNone = std::numeric_limits<VertexId>::max();

    /// Canonical label (smallest vertex id in the cluster) or kNone if vacant.
    std::vector<VertexId> cluster_id;
    /// Labels in ascending order, with the matching cluster sizes.
    std::vector<VertexId> labels;
    std::vector<std::size_t> cluster_sizes;

    std::size_t n_clusters() const {
        return labels.size();
    }
    std::size_t largest() const {
        return cluster_sizes.empty() ? 0 : *std::max_element(cluster_sizes.begin(), cluster_sizes.end());
    }
};

inline ClusterDecomposition find_clusters(const InteractionGraph &graph, const Configuration &config) {
    if (config.size() != graph.n_vertices()) {
        throw std::invalid_argument(
            "configuration has " + std::to_string(config.size()) + " sites but graph has " +
            std::to_string(graph.n_vertices()) + " vertices");
    }
    const std::size_t n = graph.n_vertices();
    DisjointSet<VertexId> forest(n);
    for (const auto &[u, v] : graph.edges()) {
        if (config.occupied[u] && config.occupied[v]) {
            forest.unite(u, v);
        }
    }
    ClusterDecomposition out;
    out.cluster_id.assign(n, ClusterDecomposition::kNone);
    std::vector<VertexId> root_label(n, ClusterDecomposition::kNone);
    std::vector<std::size_t> root_slot(n, 0);
    for (VertexId v = 0; v < n; ++v) {
        if (!config.occupied[v]) {
            continue;
        }
        const VertexId r = forest.find(v);
        if (root_label[r] == ClusterDecomposition::kNone) {
            root_label[r] = v;
            root_slot[r] = out.labels.size();
            out.labels.push_back(v);
            out.cluster_sizes.push_back(0);
        }
        out.cluster_id[v] = root_label[r];
        out.cluster_sizes[root_slot[r]]++;
    }
    return out;
}

struct PercObservables {
    double eta = 0.0;
    std::size_t trials = 0;
    double mean_cluster_size = 0.0;
    double se_mean_cluster_size = 0.0;
    double largest_fraction = 0.0;
    double se_largest_fraction = 0.0;
    double crossing_prob = 0.0;
    double se_crossing_prob = 0.0;
};

namespace detail {

struct TrialResult {
    double mean_cluster_size;
    double largest_fraction;
    double crossing;
};

/// Reusable per-worker buffers for cluster analysis of one trial.
class TrialAnalyzer {
   public:
    explicit TrialAnalyzer(const InteractionGraph &graph)
        : graph_(graph), forest_(graph.n_vertices()), occupied_(graph.n_vertices()),
          touches_first_(graph.n_vertices()), touches_last_(graph.n_vertices()) {
        if (graph.n_vertices() > 0) {
            first_time_ = last_time_ = graph.vertex(0).time;
            for (const auto &v : graph.vertices()) {
                first_time_ = std::min(first_time_, v.time);
                last_time_ = std::max(last_time_, v.time);
            }
        }
    }

    TrialResult run(double eta, std::uint64_t seed) {
        const std::size_t n = graph_.n_vertices();
        forest_.reset();
        std::size_t n_occupied = 0;
        for (std::size_t v = 0; v < n; ++v) {
            occupied_[v] = bernoulli(draw(seed, v), eta) ? 1 : 0;
            n_occupied += occupied_[v];
        }
        for (const auto &[u, v] : graph_.edges()) {
            if (occupied_[u] && occupied_[v]) {
                forest_.unite(u, v);
            }
        }
        std::fill(touches_first_.begin(), touches_first_.end(), 0);
        std::fill(touches_last_.begin(), touches_last_.end(), 0);
        double sum_sq = 0.0;
        std::size_t largest = 0;
        bool crossing = false;
        for (VertexId v = 0; v < n; ++v) {
            if (!occupied_[v]) {
                continue;
            }
            const VertexId r = forest_.find(v);
            const auto t = graph_.vertex(v).time;
            touches_first_[r] |= (t == first_time_);
            touches_last_[r] |= (t == last_time_);
        }
        for (VertexId v = 0; v < n; ++v) {
            if (occupied_[v] && forest_.find(v) == v) {
                const double s = static_cast<double>(forest_.set_size(v));
                sum_sq += s * s;
                largest = std::max<std::size_t>(largest, forest_.set_size(v));
                crossing = crossing || (touches_first_[v] && touches_last_[v]);
            }
        }
        TrialResult res;
        res.mean_cluster_size = n_occupied == 0 ? 0.0 : sum_sq / static_cast<double>(n_occupied);
        res.largest_fraction = n == 0 ? 0.0 : static_cast<double>(largest) / static_cast<double>(n);
        res.crossing = crossing ? 1.0 : 0.0;
        return res;
    }

   private:
    const InteractionGraph &graph_;
    DisjointSet<VertexId> forest_;
    std::vector<std::uint8_t> occupied_;
    std::vector<std::uint8_t> touches_first_;
    std::vector<std::uint8_t> touches_last_;
    std::uint32_t first_time_ = 0;
    std::uint32_t last_time_ = 0;
};

/// Sample mean and standard error of the mean, summed in index order.
inline std::pair<double, double> mean_and_se(const std::vector<double> &xs) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
    }
    const double mean = sum / n;
    if (xs.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace detail

/// Monte Carlo cluster statistics at density eta. Trial t samples the
/// configuration keyed by trial_seed(seed, t); per-trial values are reduced
/// in trial order, so the result does not depend on `threads`.
///
/// crossing_prob is the probability that one cluster touches both the
/// earliest and the latest time layer of the graph.
inline PercObservables percolation_observables(
    const InteractionGraph &graph, double eta, std::size_t trials, std::uint64_t seed, std::size_t threads = 1) {
    check_density(eta);
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    std::vector<double> mcs(trials), lf(trials), cp(trials);
    parallel_chunks(trials, threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        detail::TrialAnalyzer analyzer(graph);
        for (std::size_t t = begin; t < end; ++t) {
            const auto r = analyzer.run(eta, trial_seed(seed, t));
            mcs[t] = r.mean_cluster_size;
            lf[t] = r.largest_fraction;
            cp[t] = r.crossing;
        }
    });
    PercObservables obs;
    obs.eta = eta;
    obs.trials = trials;
    std::tie(obs.mean_cluster_size, obs.se_mean_cluster_size) = detail::mean_and_se(mcs);
    std::tie(obs.largest_fraction, obs.se_largest_fraction) = detail::mean_and_se(lf);
    std::tie(obs.crossing_prob, obs.se_crossing_prob) = detail::mean_and_se(cp);
    return obs;
}

struct CrossingPoint {
    std::size_t size = 0;
    double eta = 0.0;
    double crossing_prob = 0.0;
    double se = 0.0;
};

struct EtaStarEstimate {
    double eta_star = 0.0;
    std::vector<CrossingPoint> curve;
    std::string method;
};

/// Builds the circuit of linear size `size`; `seed` drives any randomness.
using CircuitFamily = std::function<Circuit(std::size_t size, std::uint64_t seed)>;

/// Built-in families: "lattice" (L x L nearest-neighbour circuit), "chain"
/// (one qubit, L steps) and "random" (L x L, arity up to min(3, L)).
inline CircuitFamily circuit_family(const std::string &name) {
    if (name == "lattice") {
        return [](std::size_t L, std::uint64_t seed) { return generate_lattice_circuit(L, L, seed); };
    }
    if (name == "chain") {
        return [](std::size_t L, std::uint64_t) {
            return Circuit::from_steps(1, std::vector<std::vector<GateSpec>>(L));
        };
    }
    if (name == "random") {
        return [](std::size_t L, std::uint64_t seed) {
            return generate_random_circuit(L, L, std::min<std::size_t>(3, L), seed);
        };
    }
    throw std::invalid_argument("unknown circuit family '" + name + "'");
}

/// Locates the first upward crossing of `level` by linear interpolation.
inline double interpolate_crossing(const std::vector<double> &etas, const std::vector<double> &values, double level) {
    for (std::size_t i = 0; i + 1 < etas.size(); ++i) {
        if (values[i] < level && values[i + 1] >= level) {
            const double w = (level - values[i]) / (values[i + 1] - values[i]);
            return etas[i] + w * (etas[i + 1] - etas[i]);
        }
    }
    throw AnalysisError("grid too narrow: crossing curve never crosses 0.5 on the grid");
}

/// Finite-size threshold sweep: crossing probability versus eta for every
/// size; the estimate is the 0.5 intercept of the largest size's curve.
inline EtaStarEstimate estimate_eta_star(
    const CircuitFamily &family, const std::vector<std::size_t> &sizes, const std::vector<double> &eta_grid,
    std::size_t trials, std::uint64_t seed, std::size_t threads = 1) {
    if (sizes.empty()) {
        throw std::invalid_argument("need at least one system size");
    }
    if (eta_grid.size() < 2) {
        throw std::invalid_argument("eta grid needs at least two points");
    }
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        if (!(eta_grid[i] > 0.0 && eta_grid[i] < 1.0)) {
            throw std::invalid_argument("eta grid must lie inside (0, 1)");
        }
        if (i > 0 && !(eta_grid[i] > eta_grid[i - 1])) {
            throw std::invalid_argument("eta grid must be strictly increasing");
        }
    }
    EtaStarEstimate est;
    const std::size_t largest_index =
        static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<double> largest_curve;
    const std::uint64_t circuit_key = substream(seed, 0);
    const std::uint64_t trial_key = substream(seed, 1);
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const auto graph = build_interaction_graph(family(sizes[si], substream(circuit_key, si)));
        const std::uint64_t size_key = substream(trial_key, si);
        for (std::size_t ei = 0; ei < eta_grid.size(); ++ei) {
            const auto obs = percolation_observables(graph, eta_grid[ei], trials, substream(size_key, ei), threads);
            est.curve.push_back(CrossingPoint{sizes[si], eta_grid[ei], obs.crossing_prob, obs.se_crossing_prob});
            if (si == largest_index) {
                largest_curve.push_back(obs.crossing_prob);
            }
        }
    }
    est.eta_star = interpolate_crossing(eta_grid, largest_curve, 0.5);
    est.method = "crossing_prob = 0.5 intercept of size " + std::to_string(sizes[largest_index]) +
                 " by linear interpolation; crossing = one cluster joining first and last time layer";
    return est;
}

}  // namespace ftperc
