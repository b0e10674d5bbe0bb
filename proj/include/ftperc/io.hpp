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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ftperc/concat.hpp"
#include "ftperc/interaction_graph.hpp"
#include "ftperc/percolation.hpp"
#include "ftperc/rg_map.hpp"

namespace ftperc {

using ordered_json = nlohmann::ordered_json;

/// Fixed 12-significant-digit formatting used by every text output.
inline std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// x rounded to 12 significant digits, for JSON output.
inline double round12(double x) {
    return std::stod(fmt12(x));
}

// --- interaction graph --------------------------------------------------

inline ordered_json graph_to_json(const InteractionGraph &g) {
    ordered_json vertices = ordered_json::array();
    for (const auto &v : g.vertices()) {
        vertices.push_back({{"id", v.id}, {"kind", v.kind}, {"time", v.time}, {"qubits", v.qubits}});
    }
    ordered_json edges = ordered_json::array();
    for (const auto &[a, b] : g.edges()) {
        edges.push_back({a, b});
    }
    return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

inline InteractionGraph graph_from_json(const nlohmann::json &j) {
    std::vector<Vertex> vertices;
    for (const auto &jv : j.at("vertices")) {
        Vertex v;
        v.id = jv.at("id").get<VertexId>();
        v.kind = jv.value("kind", std::string("I"));
        v.time = jv.value("time", 1u);
        v.qubits = jv.value("qubits", std::vector<std::uint32_t>{});
        vertices.push_back(std::move(v));
    }
    std::vector<Edge> edges;
    for (const auto &je : j.at("edges")) {
        if (!je.is_array() || je.size() != 2) {
            throw std::invalid_argument("edge must be a two-element array");
        }
        edges.emplace_back(je[0].get<VertexId>(), je[1].get<VertexId>());
    }
    return InteractionGraph(std::move(vertices), std::move(edges));
}

inline std::string dump_json(const ordered_json &j) {
    return j.dump(2) + "\n";
}

// --- gadget templates and expanded graphs -------------------------------

inline ordered_json template_to_json(const GadgetTemplate &t) {
    ordered_json edges = ordered_json::array();
    for (const auto &[a, b] : t.internal_edges) {
        edges.push_back({a, b});
    }
    return {{"A", t.A},
            {"recovery_size", t.recovery_size},
            {"internal_edges", std::move(edges)},
            {"input_ports", t.input_ports},
            {"output_ports", t.output_ports}};
}

inline GadgetTemplate template_from_json(const nlohmann::json &j) {
    GadgetTemplate t;
    t.A = j.at("A").get<int>();
    t.recovery_size = j.at("recovery_size").get<int>();
    for (const auto &je : j.at("internal_edges")) {
        if (!je.is_array() || je.size() != 2) {
            throw std::invalid_argument("internal edge must be a two-element array");
        }
        t.internal_edges.emplace_back(je[0].get<int>(), je[1].get<int>());
    }
    t.input_ports = j.at("input_ports").get<std::vector<int>>();
    t.output_ports = j.at("output_ports").get<std::vector<int>>();
    t.validate();
    return t;
}

inline ordered_json expanded_to_json(const ExpandedGraph &e) {
    ordered_json j = graph_to_json(e.graph);
    j["level"] = e.level;
    j["partition"] = e.partition();
    return j;
}

// --- rg_map reports -----------------------------------------------------

inline ordered_json threshold_to_json(const ThresholdReport &r) {
    return {{"A", r.params.A},
            {"k", r.params.k},
            {"alpha", r.params.alpha},
            {"eta_c", round12(r.eta_c)},
            {"lambda", round12(r.lambda)},
            {"bound_eta_c", round12(r.bound_eta_c)},
            {"residual", round12(r.residual)}};
}

inline std::string curve_csv(const RGParams &p, const std::vector<double> &grid) {
    std::ostringstream out;
    out << "eta,R_exact,R_bound,R_prime,lower_bound_eq1,upper_bound_eq1\n";
    for (double eta : grid) {
        const auto pt = inequality_point(eta, p);
        out << fmt12(eta) << ',' << fmt12(pt.r) << ',' << fmt12(r_bound(eta, p)) << ',' << fmt12(pt.r_prime)
            << ',' << fmt12(pt.lower) << ',' << fmt12(pt.upper) << '\n';
    }
    return out.str();
}

// --- percolation --------------------------------------------------------

inline constexpr const char *kObservablesHeader =
    "eta,trials,mean_cluster_size,se_mcs,largest_fraction,se_lf,crossing_prob,se_cp";

inline std::string observables_csv(const std::vector<PercObservables> &rows) {
    std::ostringstream out;
    out << kObservablesHeader << '\n';
    for (const auto &o : rows) {
        out << fmt12(o.eta) << ',' << o.trials << ',' << fmt12(o.mean_cluster_size) << ','
            << fmt12(o.se_mean_cluster_size) << ',' << fmt12(o.largest_fraction) << ','
            << fmt12(o.se_largest_fraction) << ',' << fmt12(o.crossing_prob) << ',' << fmt12(o.se_crossing_prob)
            << '\n';
    }
    return out.str();
}

inline std::string sweep_csv(const EtaStarEstimate &est) {
    std::ostringstream out;
    out << "size,eta,crossing_prob,se\n";
    for (const auto &p : est.curve) {
        out << p.size << ',' << fmt12(p.eta) << ',' << fmt12(p.crossing_prob) << ',' << fmt12(p.se) << '\n';
    }
    return out.str();
}

// --- files --------------------------------------------------------------

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file '" + path + "'");
    }
    out << contents;
}

}  // namespace ftperc
