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

// Command-line frontend. Every subcommand parses flags, calls library
// operations and writes their outputs plus a run manifest.

#include <openssl/evp.h>

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftperc/ftperc.hpp"

namespace {

using namespace ftperc;

constexpr const char *kVersion = "ftperc 1.0.0";

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

/// Collects outputs of one run and writes them with the manifest.
class RunOutput {
   public:
    RunOutput(std::string subcommand, const CLI::App *app, std::uint64_t seed)
        : subcommand_(std::move(subcommand)), seed_(seed) {
        for (const CLI::Option *opt : app->get_options()) {
            if (opt->get_name() == "--help" || opt->get_name().empty()) {
                continue;
            }
            std::string value;
            if (!opt->results().empty()) {
                for (std::size_t i = 0; i < opt->results().size(); ++i) {
                    value += (i ? "," : "") + opt->results()[i];
                }
            } else {
                value = opt->get_default_str();
            }
            params_[opt->get_name()] = value;
        }
    }

    void emit(const std::string &path, const std::string &contents) {
        if (path == "-") {
            std::cout << contents;
        } else {
            write_file(path, contents);
            if (!manifest_path_) {
                manifest_path_ = path + ".manifest.json";
            }
        }
        outputs_.push_back({{"path", path}, {"sha256", sha256_hex(contents)}});
    }

    void set_manifest_path(const std::string &p) {
        if (!p.empty()) {
            manifest_path_ = p;
        }
    }

    void finish() const {
        if (!manifest_path_) {
            return;
        }
        ordered_json m = {{"subcommand", subcommand_},
                          {"version", kVersion},
                          {"seed", seed_},
                          {"parameters", params_},
                          {"outputs", outputs_}};
        write_file(*manifest_path_, dump_json(m));
    }

   private:
    std::string subcommand_;
    std::uint64_t seed_;
    ordered_json params_ = ordered_json::object();
    ordered_json outputs_ = ordered_json::array();
    std::optional<std::string> manifest_path_;
};

InteractionGraph load_graph(const std::string &circuit_path, const std::string &graph_path, std::size_t max_arity) {
    if (!circuit_path.empty() == !graph_path.empty()) {
        throw UsageError("give exactly one of --circuit or --graph");
    }
    if (!circuit_path.empty()) {
        return build_interaction_graph(parse_circuit(read_file(circuit_path), max_arity));
    }
    return graph_from_json(nlohmann::json::parse(read_file(graph_path)));
}

GadgetTemplate load_template(const std::string &path, int A) {
    if (!path.empty()) {
        return template_from_json(nlohmann::json::parse(read_file(path)));
    }
    return GadgetTemplate::path(A);
}

std::vector<double> eta_values(const std::vector<double> &explicit_etas, double lo, double hi, std::size_t steps) {
    if (!explicit_etas.empty()) {
        return explicit_etas;
    }
    if (steps < 1) {
        throw UsageError("--eta-steps must be >= 1");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < steps; ++i) {
        out.push_back(steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    return out;
}

RGParams rg_params(int A, std::optional<int> k, std::optional<int> alpha, std::optional<int> d, std::optional<int> s) {
    if (!k) {
        if (!d || !s) {
            throw UsageError("give --k, or --d and --s to derive it");
        }
        k = block_threshold(CodeParameters{std::max(A, *d), *d, *s});
    }
    return RGParams::make(A, *k, alpha);
}

struct Common {
    std::string circuit;
    std::string graph;
    std::size_t max_arity = kDefaultMaxArity;
    std::string out = "-";
    std::string manifest;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

void add_input(CLI::App *sub, Common &c) {
    sub->add_option("--circuit", c.circuit, "Circuit text file");
    sub->add_option("--graph", c.graph, "Interaction graph JSON file");
    sub->add_option("--max-arity", c.max_arity, "Maximum gate arity accepted by the parser");
}

void add_mc(CLI::App *sub, Common &c) {
    sub->add_option("--seed", c.seed, "Master seed");
    sub->add_option("--threads", c.threads, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);
}

void add_out(CLI::App *sub, Common &c, bool required = false) {
    auto *o = sub->add_option("--out", c.out, "Output file, '-' for standard output");
    if (required) {
        o->required();
    }
    sub->add_option("--manifest", c.manifest, "Manifest path (default: <out>.manifest.json)");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Percolation and renormalization analysis of fault-tolerant circuits"};
    app.option_defaults()->always_capture_default();
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::function<void()> action;
    Common c;

    // graph -----------------------------------------------------------------
    auto *graph = app.add_subcommand("graph", "Interaction graph construction and statistics");
    graph->require_subcommand(1);

    auto *graph_build = graph->add_subcommand("build", "Build the interaction graph of a circuit");
    add_input(graph_build, c);
    add_out(graph_build, c, true);
    graph_build->callback([&] {
        action = [&] {
            RunOutput run("graph build", graph_build, c.seed);
            run.set_manifest_path(c.manifest);
            run.emit(c.out, dump_json(graph_to_json(load_graph(c.circuit, c.graph, c.max_arity))));
            run.finish();
        };
    });

    VertexId root = 0;
    std::size_t n_max = 10;
    auto *graph_stats_cmd = graph->add_subcommand("stats", "Degree, component and ball-growth statistics");
    add_input(graph_stats_cmd, c);
    add_out(graph_stats_cmd, c);
    graph_stats_cmd->add_option("--root", root, "Root vertex for ball sizes");
    graph_stats_cmd->add_option("--n-max", n_max, "Largest ball radius");
    graph_stats_cmd->callback([&] {
        action = [&] {
            RunOutput run("graph stats", graph_stats_cmd, c.seed);
            run.set_manifest_path(c.manifest);
            const auto st = graph_stats(load_graph(c.circuit, c.graph, c.max_arity), root, n_max);
            ordered_json j = {{"n_vertices", st.n_vertices},
                              {"n_edges", st.n_edges},
                              {"max_degree", st.max_degree},
                              {"n_components", st.n_components},
                              {"root", root},
                              {"ball_sizes", st.ball_sizes}};
            run.emit(c.out, dump_json(j));
            run.finish();
        };
    });

    // perc ------------------------------------------------------------------
    auto *perc = app.add_subcommand("perc", "Site percolation Monte Carlo");
    perc->require_subcommand(1);

    std::vector<double> etas;
    double eta_min = 0.05;
    double eta_max = 0.95;
    std::size_t eta_steps = 19;
    std::size_t trials = 1000;

    auto *perc_run = perc->add_subcommand("run", "Cluster observables over a range of densities");
    add_input(perc_run, c);
    add_mc(perc_run, c);
    add_out(perc_run, c);
    perc_run->add_option("--eta", etas, "Explicit densities, comma-separated (overrides the range)")->delimiter(',');
    perc_run->add_option("--eta-min", eta_min, "Smallest density");
    perc_run->add_option("--eta-max", eta_max, "Largest density");
    perc_run->add_option("--eta-steps", eta_steps, "Number of densities");
    perc_run->add_option("--trials", trials, "Trials per density");
    perc_run->callback([&] {
        action = [&] {
            RunOutput run("perc run", perc_run, c.seed);
            run.set_manifest_path(c.manifest);
            const auto g = load_graph(c.circuit, c.graph, c.max_arity);
            const auto grid = eta_values(etas, eta_min, eta_max, eta_steps);
            std::vector<PercObservables> rows;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                rows.push_back(percolation_observables(g, grid[i], trials, substream(c.seed, i), c.threads));
            }
            run.emit(c.out, observables_csv(rows));
            run.finish();
        };
    });

    std::string family = "lattice";
    std::vector<std::size_t> sizes{8, 16, 32};
    std::string report;
    auto *perc_star = perc->add_subcommand("eta-star", "Finite-size estimate of the percolation threshold");
    add_mc(perc_star, c);
    add_out(perc_star, c);
    perc_star->add_option("--family", family, "Circuit family: lattice, chain or random");
    perc_star->add_option("--sizes", sizes, "Linear sizes")->delimiter(',');
    perc_star->add_option("--eta", etas, "Explicit density grid, comma-separated (overrides the range)")->delimiter(',');
    perc_star->add_option("--eta-min", eta_min, "Smallest density");
    perc_star->add_option("--eta-max", eta_max, "Largest density");
    perc_star->add_option("--eta-steps", eta_steps, "Number of densities");
    perc_star->add_option("--trials", trials, "Trials per point");
    perc_star->add_option("--report", report, "JSON report with the threshold estimate");
    perc_star->callback([&] {
        action = [&] {
            RunOutput run("perc eta-star", perc_star, c.seed);
            run.set_manifest_path(c.manifest);
            const auto est = estimate_eta_star(circuit_family(family), sizes, eta_values(etas, eta_min, eta_max, eta_steps),
                                               trials, c.seed, c.threads);
            run.emit(c.out, sweep_csv(est));
            ordered_json j = {{"family", family},
                              {"sizes", sizes},
                              {"eta_star", round12(est.eta_star)},
                              {"method", est.method}};
            if (!report.empty()) {
                run.emit(report, dump_json(j));
            } else if (c.out != "-") {
                std::cout << dump_json(j);
            }
            run.finish();
        };
    });

    // rg --------------------------------------------------------------------
    auto *rg = app.add_subcommand("rg", "Renormalization map analysis");
    rg->require_subcommand(1);

    int A = 3;
    std::optional<int> k;
    std::optional<int> alpha;
    std::optional<int> code_d;
    std::optional<int> code_s;
    const auto add_params = [&](CLI::App *sub) {
        sub->add_option("--A", A, "Locations per procedure");
        sub->add_option("--k", k, "Tolerated errors per procedure");
        sub->add_option("--alpha", alpha, "Vertex-dependence count (default: A)");
        sub->add_option("--d", code_d, "Correctable errors of the code (with --s, gives k = floor(d/s))");
        sub->add_option("--s", code_s, "Spread of the code");
    };

    std::size_t grid_points = 99;
    double tol = kDefaultFixedPointTol;
    auto *rg_analyze = rg->add_subcommand("analyze", "Fixed point, slope and curve of the map");
    add_params(rg_analyze);
    add_out(rg_analyze, c);
    rg_analyze->add_option("--grid", grid_points, "Interior grid points for the curve");
    rg_analyze->add_option("--tol", tol, "Fixed-point residual tolerance");
    rg_analyze->add_option("--report", report, "Threshold report JSON");
    rg_analyze->callback([&] {
        action = [&] {
            RunOutput run("rg analyze", rg_analyze, c.seed);
            run.set_manifest_path(c.manifest);
            const auto p = rg_params(A, k, alpha, code_d, code_s);
            const auto th = find_threshold(p, tol);
            run.emit(c.out, curve_csv(p, interior_grid(grid_points)));
            if (!report.empty()) {
                run.emit(report, dump_json(threshold_to_json(th)));
            } else if (c.out != "-") {
                std::cout << dump_json(threshold_to_json(th));
            }
            run.finish();
        };
    });

    double eta = 0.1;
    int levels = 3;
    auto *rg_iterate = rg->add_subcommand("iterate", "Iterates of the map and the closed-form bound");
    add_params(rg_iterate);
    add_out(rg_iterate, c);
    rg_iterate->add_option("--eta", eta, "Initial density");
    rg_iterate->add_option("--levels", levels, "Number of iterations");
    rg_iterate->callback([&] {
        action = [&] {
            RunOutput run("rg iterate", rg_iterate, c.seed);
            run.set_manifest_path(c.manifest);
            const auto p = rg_params(A, k, alpha, code_d, code_s);
            const auto seq = iterate_map(eta, p, levels);
            std::string csv = "level,R_iterate,iterate_bound\n";
            for (int r = 0; r <= levels; ++r) {
                csv += std::to_string(r) + "," + fmt12(seq[r]) + "," + fmt12(iterate_bound(eta, p, r)) + "\n";
            }
            run.emit(c.out, csv);
            run.finish();
        };
    });

    double epsilon = 0.01;
    double n_gates = 1.0;
    std::optional<double> delta;
    auto *rg_levels = rg->add_subcommand("levels", "Concatenation levels needed for a target error");
    add_params(rg_levels);
    add_out(rg_levels, c);
    rg_levels->add_option("--eta", eta, "Physical density");
    rg_levels->add_option("--epsilon", epsilon, "Target total failure probability");
    rg_levels->add_option("--N", n_gates, "Gate count of the unencoded circuit");
    rg_levels->add_option("--delta", delta, "Distance below threshold, for the linearized count");
    rg_levels->callback([&] {
        action = [&] {
            RunOutput run("rg levels", rg_levels, c.seed);
            run.set_manifest_path(c.manifest);
            const auto p = rg_params(A, k, alpha, code_d, code_s);
            const auto lc = levels_needed(eta, p, epsilon, n_gates);
            ordered_json j = {{"target", round12(lc.target)},
                              {"levels", lc.levels},
                              {"final_density", round12(lc.final_density)},
                              {"closed_form_levels", nullptr}};
            if (lc.closed_form_levels) {
                j["closed_form_levels"] = *lc.closed_form_levels;
            }
            if (delta) {
                j["linearized_levels"] = levels_linearized(find_threshold(p), *delta, epsilon);
            }
            run.emit(c.out, dump_json(j));
            run.finish();
        };
    });

    std::optional<double> eta_c_override;
    auto *rg_tradeoff = rg->add_subcommand("tradeoff", "Threshold-overhead tradeoff inequality");
    add_params(rg_tradeoff);
    add_out(rg_tradeoff, c);
    rg_tradeoff->add_option("--delta", delta, "Distance below threshold")->required();
    rg_tradeoff->add_option("--epsilon", epsilon, "Target effective density");
    rg_tradeoff->add_option("--levels", levels, "Concatenation levels r");
    rg_tradeoff->add_option("--eta-c", eta_c_override, "Use this threshold instead of the computed fixed point");
    rg_tradeoff->callback([&] {
        action = [&] {
            RunOutput run("rg tradeoff", rg_tradeoff, c.seed);
            run.set_manifest_path(c.manifest);
            const auto p = rg_params(A, k, alpha, code_d, code_s);
            const double ec = eta_c_override ? *eta_c_override : find_threshold(p).eta_c;
            const auto t = tradeoff(ec, p.alpha, *delta, epsilon, levels);
            ordered_json j = {{"eta_c", round12(t.eta_c)}, {"alpha", t.alpha},         {"delta", round12(t.delta)},
                              {"epsilon", round12(t.epsilon)}, {"r", t.levels},        {"lhs", round12(t.lhs)},
                              {"rhs", round12(t.rhs)},       {"holds", t.holds}};
            run.emit(c.out, dump_json(j));
            run.finish();
        };
    });

    // concat ----------------------------------------------------------------
    auto *concat = app.add_subcommand("concat", "Gadget expansion and coarse-graining");
    concat->require_subcommand(1);

    std::string template_path;
    int gadget_A = 3;
    bool check = false;
    auto *concat_expand = concat->add_subcommand("expand", "Expand a graph with a gadget template");
    add_input(concat_expand, c);
    add_out(concat_expand, c);
    concat_expand->add_option("--template", template_path, "Gadget template JSON");
    concat_expand->add_option("--A", gadget_A, "Size of the default path gadget");
    concat_expand->add_option("--levels", levels, "Expansion rounds");
    concat_expand->add_flag("--check", check, "Verify that contraction reproduces the input (exit 2 if not)");
    concat_expand->callback([&] {
        action = [&] {
            RunOutput run("concat expand", concat_expand, c.seed);
            run.set_manifest_path(c.manifest);
            const auto base = load_graph(c.circuit, c.graph, c.max_arity);
            const auto ex = expand_graph(base, load_template(template_path, gadget_A), levels);
            if (check) {
                const auto res = verify_self_similarity(base, ex);
                if (!res.ok) {
                    throw AnalysisError("self-similarity check failed: " + res.message);
                }
            }
            run.emit(c.out, dump_json(expanded_to_json(ex)));
            run.finish();
        };
    });

    int k_fine = 1;
    auto *concat_mc = concat->add_subcommand("mc", "Monte Carlo density of the coarse-grained process");
    add_input(concat_mc, c);
    add_mc(concat_mc, c);
    add_out(concat_mc, c);
    concat_mc->add_option("--template", template_path, "Gadget template JSON");
    concat_mc->add_option("--A", gadget_A, "Size of the default path gadget");
    concat_mc->add_option("--k", k_fine, "Tolerated errors per procedure");
    concat_mc->add_option("--eta", eta, "Fine occupation density");
    concat_mc->add_option("--trials", trials, "Monte Carlo trials");
    concat_mc->callback([&] {
        action = [&] {
            RunOutput run("concat mc", concat_mc, c.seed);
            run.set_manifest_path(c.manifest);
            const auto base = load_graph(c.circuit, c.graph, c.max_arity);
            const auto est = empirical_renormalized_density(base, load_template(template_path, gadget_A), eta, k_fine,
                                                            trials, c.seed, c.threads);
            std::string csv = "eta,k,trials,n_coarse,density,se,expected,max_abs_correlation\n";
            csv += fmt12(est.eta) + "," + std::to_string(est.k) + "," + std::to_string(est.trials) + "," +
                   std::to_string(est.n_coarse) + "," + fmt12(est.density) + "," + fmt12(est.se) + "," +
                   fmt12(est.expected) + "," + fmt12(est.max_abs_correlation) + "\n";
            run.emit(c.out, csv);
            run.finish();
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        if (action) {
            action();
        }
    } catch (const AnalysisError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
