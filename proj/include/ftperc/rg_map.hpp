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
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftperc/errors.hpp"

namespace ftperc {

/// A quantum (m, 1, d) code with spread s.
struct CodeParameters {
    int m = 1;
    int d = 1;
    int s = 1;
};

/// Number of procedure errors a block tolerates: floor(d / s).
inline int block_threshold(const CodeParameters &code) {
    if (code.m < 1) {
        throw std::invalid_argument("block length m must be >= 1");
    }
    if (code.d < 1 || code.d > code.m) {
        throw std::invalid_argument("correctable errors d must lie in [1, m]");
    }
    if (code.s < 1) {
        throw std::invalid_argument("spread s must be >= 1");
    }
    if (code.s > code.d) {
        throw std::invalid_argument("not a quantum computation code: spread s exceeds d");
    }
    return code.d / code.s;
}

/// Parameters of the renormalization map: a coarse vertex is occupied when
/// at least k+1 of the A locations of its procedure are occupied. alpha is
/// the number of vertices the event depends on.
struct RGParams {
    int A = 3;
    int k = 1;
    int alpha = 3;

    static RGParams make(int A, int k, std::optional<int> alpha = std::nullopt) {
        RGParams p{A, k, alpha.value_or(A)};
        p.validate();
        return p;
    }

    void validate() const {
        if (A < 1) {
            throw std::invalid_argument("A must be >= 1");
        }
        if (k < 1) {
            throw std::invalid_argument("k must be >= 1");
        }
        if (alpha < 1) {
            throw std::invalid_argument("alpha must be >= 1");
        }
        if (A > 1000) {
            throw std::invalid_argument("A must be <= 1000");
        }
    }

    /// c1 = 2^(A/k).
    double c1() const {
        return std::exp2(static_cast<double>(A) / k);
    }
    /// c2 = k.
    int c2() const {
        return k;
    }
    /// Crude threshold 2^(-A/k).
    double bound_threshold() const {
        return std::exp2(-static_cast<double>(A) / k);
    }
    /// A nontrivial fixed point exists iff A >= k + 2.
    bool degenerate() const {
        return A < k + 2;
    }
};

namespace detail {

inline void check_unit(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::domain_error("eta must lie in [0, 1]");
    }
}

inline double log_choose(int n, int r) {
    return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

inline double choose(int n, int r) {
    if (r < 0 || r > n) {
        return 0.0;
    }
    if (n > 60) {
        return std::exp(log_choose(n, r));
    }
    r = std::min(r, n - r);
    std::uint64_t c = 1;
    for (int i = 1; i <= r; ++i) {
        c = c * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    }
    return static_cast<double>(c);
}

/// C(n, l) eta^l (1-eta)^(n-l), with exact boundary values.
inline double binomial_term(int n, int l, double eta) {
    if (eta == 0.0) {
        return l == 0 ? 1.0 : 0.0;
    }
    if (eta == 1.0) {
        return l == n ? 1.0 : 0.0;
    }
    if (n <= 30) {
        return choose(n, l) * std::pow(eta, l) * std::pow(1.0 - eta, n - l);
    }
    return std::exp(log_choose(n, l) + l * std::log(eta) + (n - l) * std::log1p(-eta));
}

}  // namespace detail

/// R(eta) = sum_{l=k+1}^{A} C(A,l) eta^l (1-eta)^(A-l), the probability that
/// at least k+1 of A independent locations fail.
///
/// The tail on the far side of the mean is summed directly and the other side
/// obtained as one minus it, so small results never come from a subtraction.
inline double r_exact(double eta, const RGParams &p) {
    detail::check_unit(eta);
    const int first = p.k + 1;
    if (first > p.A) {
        return 0.0;
    }
    const double mean = eta * p.A;
    if (mean < first) {
        double sum = 0.0;
        for (int l = p.A; l >= first; --l) {
            sum += detail::binomial_term(p.A, l, eta);
        }
        return std::min(sum, 1.0);
    }
    double lower = 0.0;
    for (int l = 0; l < first; ++l) {
        lower += detail::binomial_term(p.A, l, eta);
    }
    return std::clamp(1.0 - lower, 0.0, 1.0);
}

/// min(1, 2^A eta^(k+1)).
inline double r_bound(double eta, const RGParams &p) {
    detail::check_unit(eta);
    if (eta == 0.0) {
        return 0.0;
    }
    const double log2v = p.A + (p.k + 1) * std::log2(eta);
    return log2v >= 0.0 ? 1.0 : std::exp2(log2v);
}

/// R'(eta) = A C(A-1, k) eta^k (1-eta)^(A-1-k).
inline double r_derivative(double eta, const RGParams &p) {
    detail::check_unit(eta);
    if (p.k + 1 > p.A) {
        return 0.0;
    }
    return p.A * detail::binomial_term(p.A - 1, p.k, eta);
}

struct ThresholdReport {
    RGParams params;
    double eta_c = 1.0;
    double lambda = 0.0;
    double bound_eta_c = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

inline constexpr double kDefaultFixedPointTol = 1e-12;

/// Nontrivial fixed point of R. A 1000-point sign scan of R(eta) - eta
/// brackets the crossing from below to above the diagonal, then bisection
/// refines it until |R(eta_c) - eta_c| <= tol.
inline ThresholdReport find_threshold(const RGParams &p, double tol = kDefaultFixedPointTol) {
    p.validate();
    if (!(tol > 0.0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    if (p.degenerate()) {
        throw AnalysisError("degenerate map: no nontrivial fixed point");
    }
    const auto g = [&](double x) { return r_exact(x, p) - x; };

    ThresholdReport rep;
    rep.params = p;
    rep.bound_eta_c = p.bound_threshold();

    constexpr int kScan = 1000;
    double lo = 0.0;
    double hi = 0.0;
    bool bracketed = false;
    double prev = g(1.0 / kScan);
    for (int i = 1; i < kScan; ++i) {
        const double x = static_cast<double>(i) / kScan;
        const double gx = i == 1 ? prev : g(x);
        if (gx == 0.0) {
            lo = hi = x;
            bracketed = true;
            break;
        }
        if (i > 1 && prev < 0.0 && gx > 0.0) {
            lo = static_cast<double>(i - 1) / kScan;
            hi = x;
            bracketed = true;
            break;
        }
        prev = gx;
    }
    if (!bracketed) {
        throw AnalysisError("degenerate map: no nontrivial fixed point");
    }

    double mid = lo;
    int it = 0;
    while (lo != hi && it < 200) {
        ++it;
        mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (std::abs(gm) <= tol || mid == lo || mid == hi) {
            break;
        }
        (gm < 0.0 ? lo : hi) = mid;
    }
    rep.eta_c = mid;
    rep.iterations = it;
    rep.residual = std::abs(g(mid));
    rep.lambda = r_derivative(mid, p);
    if (rep.residual > tol) {
        throw AnalysisError("fixed-point residual " + std::to_string(rep.residual) + " above tolerance");
    }
    return rep;
}

/// R^0(eta), ..., R^levels(eta).
inline std::vector<double> iterate_map(double eta, const RGParams &p, int levels) {
    detail::check_unit(eta);
    if (levels < 0) {
        throw std::invalid_argument("levels must be >= 0");
    }
    std::vector<double> out{eta};
    out.reserve(static_cast<std::size_t>(levels) + 1);
    for (int r = 0; r < levels; ++r) {
        out.push_back(r_exact(out.back(), p));
    }
    return out;
}

/// Closed-form iterate bound min(1, 2^(-A/k) (2^(A/k) eta)^((k+1)^levels)),
/// evaluated in the log domain.
inline double iterate_bound(double eta, const RGParams &p, int levels) {
    detail::check_unit(eta);
    if (levels < 0) {
        throw std::invalid_argument("levels must be >= 0");
    }
    if (levels == 0) {
        return eta;
    }
    if (eta == 0.0) {
        return 0.0;
    }
    const double log_c1 = static_cast<double>(p.A) / p.k * std::log(2.0);
    const double power = std::pow(static_cast<double>(p.k + 1), levels);
    const double base = log_c1 + std::log(eta);
    if (base >= 0.0) {
        return 1.0;
    }
    const double log_value = -log_c1 + power * base;
    return log_value >= 0.0 ? 1.0 : std::exp(log_value);
}

struct LevelCount {
    double target = 0.0;  // epsilon / N
    int levels = 0;       // smallest r with R^r(eta) <= target
    double final_density = 0.0;
    /// Levels predicted by inverting iterate_bound; empty when the bound does
    /// not contract (eta >= 2^(-A/k)).
    std::optional<int> closed_form_levels;
};

/// Concatenation levels needed so the effective density is at most
/// epsilon / N. eta must be below the threshold of the map.
inline LevelCount levels_needed(double eta, const RGParams &p, double epsilon, double n_gates, int max_levels = 100000) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::invalid_argument("eta must lie in (0, 1)");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    if (!(n_gates >= 1.0)) {
        throw std::invalid_argument("gate count N must be >= 1");
    }
    const double eta_c = p.degenerate() ? 1.0 : find_threshold(p).eta_c;
    if (eta >= eta_c) {
        throw AnalysisError("supercritical: unreachable target");
    }
    LevelCount out;
    out.target = epsilon / n_gates;
    double x = eta;
    int r = 0;
    while (x > out.target) {
        if (r >= max_levels) {
            throw AnalysisError("target not reached within " + std::to_string(max_levels) + " levels");
        }
        x = r_exact(x, p);
        ++r;
    }
    out.levels = r;
    out.final_density = x;

    // Invert the closed-form bound: (k+1)^r log(c1 eta) <= log(c1 target).
    const double log_c1 = static_cast<double>(p.A) / p.k * std::log(2.0);
    const double base = log_c1 + std::log(eta);
    if (base < 0.0) {
        const double top = log_c1 + std::log(out.target);
        if (eta <= out.target) {
            out.closed_form_levels = 0;
        } else if (top >= 0.0) {
            out.closed_form_levels = 1;
        } else {
            const double need = std::log(top / base) / std::log(p.k + 1.0);
            out.closed_form_levels = std::max(1, static_cast<int>(std::ceil(need)));
        }
    }
    return out;
}

/// Linearized level count floor(log((eta_c - epsilon) / delta) / log(lambda)).
inline int levels_linearized(double eta_c, double lambda, double delta, double epsilon) {
    if (!(lambda > 1.0)) {
        throw std::invalid_argument("lambda must exceed 1");
    }
    if (!(epsilon >= 0.0 && epsilon < eta_c)) {
        throw std::invalid_argument("epsilon must lie in [0, eta_c)");
    }
    if (!(delta > 0.0 && delta <= eta_c - epsilon)) {
        throw std::invalid_argument("delta must lie in (0, eta_c - epsilon]");
    }
    return static_cast<int>(std::floor(std::log((eta_c - epsilon) / delta) / std::log(lambda)));
}

inline int levels_linearized(const ThresholdReport &report, double delta, double epsilon) {
    return levels_linearized(report.eta_c, report.lambda, delta, epsilon);
}

/// The differential bounds R(1-R)/(eta(1-eta)) <= R' <= sqrt(alpha/(eta(1-eta)))
/// at one grid point.
struct InequalityPoint {
    double eta = 0.0;
    double r = 0.0;
    double r_prime = 0.0;
    double lower = 0.0;
    double upper = 0.0;

    bool lower_holds() const {
        return lower <= r_prime;
    }
    bool upper_holds() const {
        return r_prime <= upper;
    }
};

inline InequalityPoint inequality_point(double eta, const RGParams &p) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::domain_error("differential bounds need eta in (0, 1)");
    }
    InequalityPoint pt;
    pt.eta = eta;
    pt.r = r_exact(eta, p);
    pt.r_prime = r_derivative(eta, p);
    const double var = eta * (1.0 - eta);
    pt.lower = pt.r * (1.0 - pt.r) / var;
    pt.upper = std::sqrt(p.alpha / var);
    return pt;
}

struct InequalityReport {
    std::vector<InequalityPoint> points;
    /// min over the grid of R' - lower and upper - R'.
    double worst_lower_margin = std::numeric_limits<double>::infinity();
    double worst_upper_margin = std::numeric_limits<double>::infinity();
    bool differential_bounds_hold = true;

    bool has_threshold = false;
    double eta_c = 1.0;
    double lambda = 0.0;
    double lambda_bound = 0.0;  // sqrt(alpha / (eta_c (1 - eta_c)))
    bool lambda_bound_holds = false;
    bool lambda_above_one = false;

    bool all_hold() const {
        return differential_bounds_hold && (!has_threshold || (lambda_bound_holds && lambda_above_one));
    }
};

/// Checks the differential bounds on every grid point and, when the map has
/// a nontrivial fixed point, lambda <= sqrt(alpha/(eta_c(1-eta_c))) and
/// lambda > 1. Violations are reported, not thrown.
inline InequalityReport check_inequalities(const RGParams &p, const std::vector<double> &grid) {
    InequalityReport rep;
    for (double eta : grid) {
        const auto pt = inequality_point(eta, p);
        rep.worst_lower_margin = std::min(rep.worst_lower_margin, pt.r_prime - pt.lower);
        rep.worst_upper_margin = std::min(rep.worst_upper_margin, pt.upper - pt.r_prime);
        rep.differential_bounds_hold = rep.differential_bounds_hold && pt.lower_holds() && pt.upper_holds();
        rep.points.push_back(pt);
    }
    if (!p.degenerate()) {
        const auto th = find_threshold(p);
        rep.has_threshold = true;
        rep.eta_c = th.eta_c;
        rep.lambda = th.lambda;
        rep.lambda_bound = std::sqrt(p.alpha / (th.eta_c * (1.0 - th.eta_c)));
        rep.lambda_bound_holds = th.lambda <= rep.lambda_bound;
        rep.lambda_above_one = th.lambda > 1.0;
    }
    return rep;
}

/// Uniform grid i / (n + 1), i = 1..n, strictly inside (0, 1).
inline std::vector<double> interior_grid(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    }
    return g;
}

struct TradeoffReport {
    double eta_c = 0.0;
    int alpha = 0;
    double delta = 0.0;
    double epsilon = 0.0;
    int levels = 0;
    double lhs = 0.0;  // eta_c (1 - eta_c) (eta_c - epsilon)^2
    double rhs = 0.0;  // alpha delta^(2 / levels)
    bool holds = false;
};

/// Threshold-overhead tradeoff eta_c(1-eta_c)(eta_c-eps)^2 <= alpha delta^(2/r).
inline TradeoffReport tradeoff(double eta_c, int alpha, double delta, double epsilon, int levels) {
    if (levels < 1) {
        throw std::invalid_argument("levels must be >= 1");
    }
    if (!(epsilon > 0.0 && epsilon < eta_c && eta_c < 1.0)) {
        throw std::invalid_argument("need 0 < epsilon < eta_c < 1");
    }
    if (!(delta > 0.0)) {
        throw std::invalid_argument("delta must be positive");
    }
    if (alpha < 1) {
        throw std::invalid_argument("alpha must be >= 1");
    }
    TradeoffReport t;
    t.eta_c = eta_c;
    t.alpha = alpha;
    t.delta = delta;
    t.epsilon = epsilon;
    t.levels = levels;
    const double gap = eta_c - epsilon;
    t.lhs = eta_c * (1.0 - eta_c) * gap * gap;
    t.rhs = alpha * std::pow(delta, 2.0 / levels);
    t.holds = t.lhs <= t.rhs;
    return t;
}

inline TradeoffReport tradeoff(const ThresholdReport &report, const RGParams &p, double delta, double epsilon, int levels) {
    return tradeoff(report.eta_c, p.alpha, delta, epsilon, levels);
}

}  // namespace ftperc
