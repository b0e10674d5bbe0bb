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

#include "ftperc/rg_map.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "oracles.hpp"

using namespace ftperc;

namespace {

const RGParams kMajority = RGParams::make(3, 1);

/// Fixed point of R(x) = x for A = 7, k = 1, from exact rational bisection
/// on the polynomial (80 halvings of [0.01, 0.5]).
constexpr double kEtaC71 = 0.057850265713676692;

}  // namespace

TEST(block_threshold, examples) {
    EXPECT_EQ(block_threshold({5, 1, 1}), 1);
    EXPECT_EQ(block_threshold({23, 3, 2}), 1);
    EXPECT_EQ(block_threshold({23, 7, 3}), 2);
    try {
        block_threshold({23, 3, 4});
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("not a quantum computation code"), std::string::npos);
    }
    EXPECT_THROW(block_threshold({3, 4, 1}), std::invalid_argument);
    EXPECT_THROW(block_threshold({3, 0, 1}), std::invalid_argument);
}

TEST(rg_params, validation) {
    EXPECT_EQ(RGParams::make(5, 2).alpha, 5);
    EXPECT_EQ(RGParams::make(5, 2, 9).alpha, 9);
    EXPECT_DOUBLE_EQ(RGParams::make(6, 2).c1(), 8.0);
    EXPECT_EQ(RGParams::make(6, 2).c2(), 2);
    EXPECT_THROW(RGParams::make(0, 1), std::invalid_argument);
    EXPECT_THROW(RGParams::make(3, 0), std::invalid_argument);
    EXPECT_THROW(RGParams::make(3, 1, 0), std::invalid_argument);
    EXPECT_TRUE(RGParams::make(2, 1).degenerate());
    EXPECT_FALSE(RGParams::make(3, 1).degenerate());
}

TEST(r_exact, majority_values) {
    EXPECT_NEAR(r_exact(0.1, kMajority), 0.028, 1e-15);
    EXPECT_NEAR(r_exact(0.5, kMajority), 0.5, 1e-15);
    for (double eta : interior_grid(49)) {
        EXPECT_NEAR(r_exact(eta, kMajority), 3 * eta * eta * (1 - eta) + eta * eta * eta, 1e-15);
    }
}

TEST(r_exact, boundaries) {
    for (int A = 1; A <= 40; ++A) {
        for (int k = 1; k <= 4; ++k) {
            const auto p = RGParams::make(A, k);
            EXPECT_EQ(r_exact(0.0, p), 0.0);
            EXPECT_EQ(r_exact(1.0, p), k + 1 <= A ? 1.0 : 0.0);
        }
    }
    EXPECT_THROW(r_exact(-0.1, kMajority), std::domain_error);
    EXPECT_THROW(r_exact(1.1, kMajority), std::domain_error);
    EXPECT_THROW(r_exact(std::nan(""), kMajority), std::domain_error);
}

TEST(r_exact, matches_enumeration) {
    for (int A = 2; A <= 14; ++A) {
        for (int k = 1; k < A; ++k) {
            const auto p = RGParams::make(A, k);
            for (double eta : interior_grid(19)) {
                const double ref = oracle::tail_by_enumeration(A, k, eta);
                ASSERT_NEAR(r_exact(eta, p), ref, 1e-13 * std::max(1.0, ref)) << A << " " << k << " " << eta;
            }
        }
    }
}

TEST(r_exact, small_eta_has_relative_accuracy) {
    // Leading term C(A, k+1) eta^(k+1) dominates as eta -> 0.
    const auto p = RGParams::make(50, 2);
    const double eta = 1e-9;
    const double lead = 19600.0 * eta * eta * eta;
    EXPECT_NEAR(r_exact(eta, p) / lead, 1.0, 1e-6);
    EXPECT_GT(r_exact(1e-300, RGParams::make(5, 1)), 0.0 - 1e-300);
}

TEST(r_exact, large_blocks_stay_in_unit_interval) {
    for (int A : {31, 100, 500, 1000}) {
        const auto p = RGParams::make(A, A / 10);
        double prev = 0.0;
        for (double eta : interior_grid(199)) {
            const double r = r_exact(eta, p);
            ASSERT_GE(r, 0.0);
            ASSERT_LE(r, 1.0);
            ASSERT_GE(r, prev - 1e-15) << A << " " << eta;
            prev = r;
        }
    }
}

TEST(r_exact, monotone) {
    for (int A = 3; A <= 20; ++A) {
        for (int k = 1; k <= 3 && k < A; ++k) {
            const auto p = RGParams::make(A, k);
            double prev = 0.0;
            for (int i = 1; i <= 1000; ++i) {
                const double r = r_exact(i / 1000.0, p);
                ASSERT_GE(r, prev);
                prev = r;
            }
        }
    }
}

TEST(r_bound, values_and_domination) {
    EXPECT_NEAR(r_bound(0.1, kMajority), 0.08, 1e-15);
    EXPECT_EQ(r_bound(0.0, kMajority), 0.0);
    EXPECT_EQ(r_bound(0.9, kMajority), 1.0);
    for (int A = 3; A <= 12; ++A) {
        for (int k = 1; k <= 3; ++k) {
            const auto p = RGParams::make(A, k);
            for (double eta : interior_grid(99)) {
                ASSERT_LE(r_exact(eta, p), r_bound(eta, p)) << A << " " << k << " " << eta;
            }
            EXPECT_LE(r_exact(1.0, p), r_bound(1.0, p));
        }
    }
}

TEST(r_derivative, majority_polynomial) {
    EXPECT_NEAR(r_derivative(0.5, kMajority), 1.5, 1e-15);
    for (double eta : interior_grid(29)) {
        EXPECT_NEAR(r_derivative(eta, kMajority), 6 * eta - 6 * eta * eta, 1e-14);
    }
}

TEST(r_derivative, central_difference) {
    constexpr double h = 1e-5;
    for (int A = 3; A <= 12; ++A) {
        for (int k = 1; k <= 3 && k < A; ++k) {
            const auto p = RGParams::make(A, k);
            for (double eta : interior_grid(99)) {
                const double fd = (r_exact(eta + h, p) - r_exact(eta - h, p)) / (2 * h);
                const double d = r_derivative(eta, p);
                ASSERT_NEAR(d, fd, 1e-6) << A << " " << k << " " << eta;
                ASSERT_GE(d, 0.0);
            }
        }
    }
}

TEST(find_threshold, majority) {
    const auto t = find_threshold(kMajority);
    EXPECT_NEAR(t.eta_c, 0.5, 1e-12);
    EXPECT_NEAR(t.lambda, 1.5, 1e-10);
    EXPECT_DOUBLE_EQ(t.bound_eta_c, 0.125);
    EXPECT_LE(t.residual, 1e-12);
}

TEST(find_threshold, degenerate) {
    try {
        find_threshold(RGParams::make(2, 1));
        FAIL();
    } catch (const AnalysisError &e) {
        EXPECT_NE(std::string(e.what()).find("degenerate map"), std::string::npos);
    }
    EXPECT_THROW(find_threshold(RGParams::make(4, 3)), AnalysisError);
}

TEST(find_threshold, seven_locations) {
    const auto t = find_threshold(RGParams::make(7, 1));
    EXPECT_NEAR(t.eta_c, kEtaC71, 1e-10);
    EXPECT_LE(t.residual, 1e-10);
    EXPECT_LE(std::abs(r_exact(t.eta_c, RGParams::make(7, 1)) - t.eta_c), 1e-10);
}

TEST(find_threshold, properties_over_parameter_range) {
    for (int A = 3; A <= 40; ++A) {
        for (int k = 1; k + 2 <= A && k <= 6; ++k) {
            const auto p = RGParams::make(A, k);
            const auto t = find_threshold(p);
            ASSERT_GT(t.eta_c, 0.0);
            ASSERT_LT(t.eta_c, 1.0);
            ASSERT_LE(t.residual, kDefaultFixedPointTol);
            ASSERT_GT(t.lambda, 1.0) << A << " " << k;
            ASSERT_LE(t.bound_eta_c, t.eta_c) << A << " " << k;
            // Sign scan at resolution 1e-3 away from the root.
            for (int i = 1; i < 1000; ++i) {
                const double eta = i / 1000.0;
                if (std::abs(eta - t.eta_c) < 1e-3) {
                    continue;
                }
                const double g = r_exact(eta, p) - eta;
                if (eta < t.eta_c) {
                    ASSERT_LT(g, 0.0) << A << " " << k << " " << eta;
                } else {
                    ASSERT_GT(g, 0.0) << A << " " << k << " " << eta;
                }
            }
        }
    }
}

TEST(iterate_map, majority_staircase) {
    const auto xs = iterate_map(0.1, kMajority, 2);
    ASSERT_EQ(xs.size(), 3u);
    EXPECT_DOUBLE_EQ(xs[0], 0.1);
    EXPECT_NEAR(xs[1], 0.028, 1e-15);
    EXPECT_NEAR(xs[2], 0.002308096, 1e-15);
    EXPECT_EQ(iterate_map(0.3, kMajority, 0), (std::vector<double>{0.3}));
}

TEST(iterate_map, fixed_point_and_supercritical) {
    const auto t = find_threshold(kMajority);
    for (double x : iterate_map(t.eta_c, kMajority, 10)) {
        EXPECT_NEAR(x, 0.5, 1e-11);
    }
    const auto up = iterate_map(0.6, kMajority, 10);
    for (std::size_t i = 1; i < up.size(); ++i) {
        if (up[i - 1] < 1.0) {
            EXPECT_GT(up[i], up[i - 1]);
        }
    }
    EXPECT_GT(up.back(), 0.99);
}

TEST(iterate_map, subcritical_strictly_decreasing) {
    for (int A = 3; A <= 12; ++A) {
        for (int k = 1; k + 2 <= A && k <= 3; ++k) {
            const auto p = RGParams::make(A, k);
            const double eta_c = find_threshold(p).eta_c;
            for (double f : {0.1, 0.5, 0.9}) {
                const auto xs = iterate_map(f * eta_c, p, 4);
                for (std::size_t i = 1; i < xs.size(); ++i) {
                    if (xs[i - 1] > 0.0) {
                        ASSERT_LT(xs[i], xs[i - 1]);
                    }
                }
            }
        }
    }
}

TEST(iterate_bound, values) {
    EXPECT_NEAR(iterate_bound(0.1, kMajority, 2), 0.0512, 1e-15);
    EXPECT_DOUBLE_EQ(iterate_bound(0.1, kMajority, 0), 0.1);
    EXPECT_EQ(iterate_bound(0.0, kMajority, 3), 0.0);
    EXPECT_EQ(iterate_bound(0.9, kMajority, 3), 1.0);
    // Deep levels underflow to zero instead of producing NaN.
    EXPECT_EQ(iterate_bound(0.01, kMajority, 40), 0.0);
}

TEST(iterate_bound, dominates_exact_iteration) {
    for (int A = 3; A <= 12; ++A) {
        for (int k = 1; k <= 3; ++k) {
            const auto p = RGParams::make(A, k);
            const double top = p.bound_threshold();
            for (double f : {0.05, 0.3, 0.6, 0.95}) {
                const double eta = f * top;
                const auto xs = iterate_map(eta, p, 6);
                for (int r = 0; r <= 6; ++r) {
                    ASSERT_LE(xs[r], iterate_bound(eta, p, r) * (1 + 1e-12)) << A << " " << k << " " << r;
                }
            }
        }
    }
}

TEST(levels_needed, examples) {
    const auto one = levels_needed(0.1, kMajority, 0.03, 1.0);
    EXPECT_EQ(one.levels, 1);
    EXPECT_NEAR(one.final_density, 0.028, 1e-15);
    EXPECT_DOUBLE_EQ(one.target, 0.03);

    EXPECT_EQ(levels_needed(0.1, kMajority, 0.2, 1.0).levels, 0);
    EXPECT_EQ(levels_needed(0.1, kMajority, 0.1, 1.0).levels, 0);

    const auto eight = levels_needed(0.45, kMajority, 0.01, 1.0);
    EXPECT_EQ(eight.levels, 8);
    EXPECT_LE(eight.final_density, 0.01);
    EXPECT_GT(iterate_map(0.45, kMajority, 7).back(), 0.01);

    // Target eps / N.
    EXPECT_EQ(levels_needed(0.1, kMajority, 3.0, 100.0).levels, 1);
}

TEST(levels_needed, supercritical) {
    try {
        levels_needed(0.5, kMajority, 0.01, 1.0);
        FAIL();
    } catch (const AnalysisError &e) {
        EXPECT_NE(std::string(e.what()).find("supercritical"), std::string::npos);
    }
    EXPECT_THROW(levels_needed(0.7, kMajority, 0.01, 1.0), AnalysisError);
    // A degenerate map contracts everywhere below 1.
    EXPECT_EQ(levels_needed(0.1, RGParams::make(2, 1), 0.02, 1.0).levels, 1);
    EXPECT_THROW(levels_needed(0.1, kMajority, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(levels_needed(0.1, kMajority, 0.1, 0.5), std::invalid_argument);
}

TEST(levels_needed, closed_form_is_an_upper_estimate) {
    // Exact iteration never needs more levels than the bound's inversion.
    for (double eta : {0.01, 0.05, 0.1}) {
        for (double target : {1e-3, 1e-6, 1e-12}) {
            const auto lc = levels_needed(eta, kMajority, target, 1.0);
            ASSERT_TRUE(lc.closed_form_levels.has_value());
            EXPECT_LE(lc.levels, *lc.closed_form_levels) << eta << " " << target;
        }
    }
    EXPECT_FALSE(levels_needed(0.3, kMajority, 1e-3, 1.0).closed_form_levels.has_value());
}

TEST(levels_linearized, examples) {
    EXPECT_EQ(levels_linearized(0.5, 1.5, 0.05, 0.01), 5);
    EXPECT_EQ(levels_linearized(0.5, 1.5, 0.49, 0.01), 0);
    EXPECT_THROW(levels_linearized(0.5, 1.5, 0.5, 0.01), std::invalid_argument);
    EXPECT_THROW(levels_linearized(0.5, 1.5, 0.0, 0.01), std::invalid_argument);
    EXPECT_THROW(levels_linearized(0.5, 1.0, 0.05, 0.01), std::invalid_argument);
    EXPECT_EQ(levels_linearized(find_threshold(kMajority), 0.05, 0.01), 5);
}

TEST(levels_linearized, halving_delta_adds_log2_over_log_lambda) {
    const double step = std::log(2.0) / std::log(1.5);
    for (double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const int a = levels_linearized(0.5, 1.5, delta, 0.01);
        const int b = levels_linearized(0.5, 1.5, delta / 2, 0.01);
        EXPECT_LE(std::abs((b - a) - step), 1.0);
    }
}

TEST(check_inequalities, spot_values) {
    const auto pt = inequality_point(0.3, kMajority);
    EXPECT_NEAR(pt.r, 0.216, 1e-15);
    EXPECT_NEAR(pt.lower, 0.8064, 1e-12);
    EXPECT_NEAR(pt.r_prime, 1.26, 1e-12);
    EXPECT_NEAR(pt.upper, 3.7796447300922722, 1e-12);
    EXPECT_TRUE(pt.lower_holds());
    EXPECT_TRUE(pt.upper_holds());

    const auto mid = inequality_point(0.5, kMajority);
    EXPECT_NEAR(mid.lower, 1.0, 1e-12);
    EXPECT_NEAR(mid.r_prime, 1.5, 1e-12);
    EXPECT_THROW(inequality_point(0.0, kMajority), std::domain_error);

    const auto rep = check_inequalities(kMajority, interior_grid(99));
    EXPECT_TRUE(rep.has_threshold);
    EXPECT_NEAR(rep.lambda_bound, std::sqrt(12.0), 1e-9);
    EXPECT_NEAR(rep.lambda_bound, 3.4641, 1e-4);
    EXPECT_TRUE(rep.lambda_bound_holds);
    EXPECT_TRUE(rep.lambda_above_one);
    EXPECT_TRUE(rep.all_hold());
    EXPECT_EQ(rep.points.size(), 99u);
}

TEST(check_inequalities, hold_across_parameters) {
    for (int A = 3; A <= 30; ++A) {
        for (int k = 1; k <= 5 && k + 1 <= A; ++k) {
            const auto rep = check_inequalities(RGParams::make(A, k), interior_grid(99));
            ASSERT_TRUE(rep.differential_bounds_hold) << A << " " << k;
            ASSERT_GE(rep.worst_lower_margin, -1e-12);
            ASSERT_GE(rep.worst_upper_margin, 0.0);
            ASSERT_TRUE(rep.all_hold()) << A << " " << k;
        }
    }
    EXPECT_FALSE(check_inequalities(RGParams::make(2, 1), interior_grid(9)).has_threshold);
}

TEST(tradeoff, examples) {
    const auto t = tradeoff(0.5, 3, 0.05, 0.01, 5);
    EXPECT_NEAR(t.lhs, 0.060025, 1e-15);
    EXPECT_NEAR(t.rhs, 0.90512645048177, 1e-12);
    EXPECT_TRUE(t.holds);

    const auto bite = tradeoff(0.5, 3, 1e-6, 0.01, 1);
    EXPECT_NEAR(bite.rhs, 3e-12, 1e-24);
    EXPECT_FALSE(bite.holds);

    const auto deep = tradeoff(0.5, 3, 1e-6, 0.01, 100000);
    EXPECT_NEAR(deep.rhs, 3.0, 1e-3);
    EXPECT_TRUE(deep.holds);

    EXPECT_THROW(tradeoff(0.5, 3, 0.05, 0.01, 0), std::invalid_argument);
    EXPECT_THROW(tradeoff(0.5, 3, 0.05, 0.6, 1), std::invalid_argument);
    EXPECT_THROW(tradeoff(0.5, 3, 0.0, 0.01, 1), std::invalid_argument);
    EXPECT_TRUE(tradeoff(find_threshold(kMajority), kMajority, 0.05, 0.01, 5).holds);
}

TEST(tradeoff, holds_iff_lhs_le_rhs) {
    for (double delta : {1e-8, 1e-4, 1e-2, 0.3}) {
        for (int r = 1; r <= 10; ++r) {
            const auto t = tradeoff(0.2, 4, delta, 0.05, r);
            ASSERT_EQ(t.holds, t.lhs <= t.rhs);
        }
    }
}
