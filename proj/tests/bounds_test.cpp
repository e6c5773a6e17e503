// Copyright 2026 The Faultpath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "faultpath/bounds.hpp"

#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "faultpath/error.hpp"
#include "faultpath/model.hpp"

using namespace faultpath;

namespace {

// Independent evaluation in extended precision.
long double exp_ld(long double x) { return std::exp(x); }
const long double kEld = exp_ld(1.0L);

}  // namespace

TEST(Constants, closed_forms) {
    // 30-digit reference values.
    EXPECT_NEAR(eta_prime_constant(), 3.26722081734971035008880006748, 1e-14);
    EXPECT_NEAR(eta_prime_constant_squared(), 10.674731869323309360583268087, 1e-13);
    EXPECT_NEAR(eta_prime_constant(), double(exp_ld(1 + 1 / (2 * kEld))), 1e-15);
    EXPECT_NEAR(eta_prime_constant_squared(), double(exp_ld(2 + 1 / kEld)), 1e-14);
    EXPECT_NEAR(eta_prime_constant() * eta_prime_constant(), eta_prime_constant_squared(), 1e-13);
}

TEST(SkBound, examples) {
    for (int n = 0; n <= 5; ++n) EXPECT_DOUBLE_EQ(s_k_bound({n, 0, 0.3}), std::pow(0.3, 2 * n));
    EXPECT_NEAR(s_k_bound({1, 1, 0.01}), 0.01, 1e-17);
    // (1/(2^k k!)) (2n eta)^k eta^(2n-2k), n=3, k=2.
    EXPECT_NEAR(s_k_bound({3, 2, 0.1}), 1.0 / 8 * std::pow(0.6, 2) * std::pow(0.1, 2), 1e-17);
}

TEST(SkBound, tight_below_loose) {
    for (double eta : {1e-6, 1e-3, 0.05, 0.5})
        for (int n = 1; n <= 8; ++n)
            for (int k = 1; k <= n; ++k) {
                const long double loose = std::pow(kEld, k) * std::pow((long double)n / k, k) * std::pow((long double)eta, 2 * n - k);
                EXPECT_LE(s_k_bound({n, k, eta}), s_k_bound_loose({n, k, eta}) * (1 + 1e-12));
                EXPECT_NEAR(s_k_bound_loose({n, k, eta}), double(loose), 1e-12 * double(loose));
            }
}

TEST(SkBound, invalid_input) {
    EXPECT_THROW(s_k_bound({2, 3, 0.1}), InputError);
    EXPECT_THROW(s_k_bound({-1, 0, 0.1}), InputError);
    EXPECT_THROW(s_k_bound({1, 1, -0.1}), InputError);
    EXPECT_THROW(s_k_bound_loose({1, -1, 0.1}), InputError);
}

TEST(SameStep, examples) {
    EXPECT_EQ(e_ir_same_step_bound(2, 0.0).bound, 0.0);
    EXPECT_NEAR(e_ir_same_step_bound(2, 0.01).bound, 0.106747318693233, 1e-14);
    EXPECT_NEAR(e_ir_same_step_bound(2, 0.01).bound, double(exp_ld(2 + 1 / kEld) * 0.01L), 1e-15);
    const SameStepBound six = e_ir_same_step_bound(6, 0.001);
    ASSERT_TRUE(six.intermediate.has_value());
    EXPECT_NEAR(*six.intermediate, double(4 * exp_ld(3 + 3 / kEld) * 1e-9L), 1e-20);
    EXPECT_NEAR(six.bound, double(exp_ld(6 + 3 / kEld) * 1e-9L), 1e-18);
    EXPECT_LE(*six.intermediate, six.bound);
    EXPECT_FALSE(e_ir_same_step_bound(3, 0.01).intermediate.has_value());
    EXPECT_NEAR(e_ir_same_step_bound(3, 0.01).bound, std::pow(eta_prime(0.01), 3), 1e-15);
    EXPECT_EQ(e_ir_same_step_bound(0, 0.01).bound, 1.0);
    EXPECT_THROW(e_ir_same_step_bound(-1, 0.01), InputError);
}

TEST(SameStep, contraction_sum_below_closed_form) {
    for (double eta : {1e-6, 1e-4, 1e-2, 1e-1})
        for (int n = 0; n <= 10; ++n) {
            double sum = 0;
            for (int k = 0; k <= n; ++k) sum += s_k_bound({n, k, eta});
            const SameStepBound b = e_ir_same_step_bound(2 * n, eta);
            EXPECT_LE(sum, b.bound) << "n=" << n << " eta=" << eta;
            EXPECT_LE(*b.intermediate, b.bound * (1 + 1e-12));
        }
}

TEST(SameStep, n_over_k_power_bound) {
    const double base = std::exp(1.0 / std::exp(1.0));
    for (int n = 1; n <= 1000; ++n)
        for (int k = 1; k <= n; ++k) {
            // Compare logs to stay in range.
            const double lhs = k * std::log(double(n) / k);
            const double rhs = n * std::log(base);
            ASSERT_LE(lhs, rhs + 1e-9 * rhs) << n << "," << k;
        }
}

TEST(Epsilon, examples_and_inverse) {
    EXPECT_NEAR(epsilon_from_eta(0.005, 2), 0.326722081734971, 1e-14);
    EXPECT_NEAR(epsilon_from_eta(0.005, 2), double(exp_ld(1 + 1 / (2 * kEld)) * 0.1L), 1e-15);
    for (double eta : {1e-12, 1e-6, 0.003, 0.5, 7.0}) {
        EXPECT_NEAR(epsilon_from_eta(eta, 2) / epsilon_from_eta(eta, 1), std::sqrt(2.0), 1e-12);
        EXPECT_NEAR(eta_from_epsilon(epsilon_from_eta(eta, 2), 2), eta, 1e-12 * eta);
        EXPECT_NEAR(eta_from_epsilon(epsilon_from_eta(eta, 1), 1), eta, 1e-12 * eta);
    }
    EXPECT_EQ(epsilon_from_eta(0.0, 2), 0.0);
    EXPECT_THROW(epsilon_from_eta(0.1, 3), InputError);
    EXPECT_THROW(epsilon_from_eta(-0.1, 1), InputError);
    EXPECT_THROW(eta_from_epsilon(std::nan(""), 1), InputError);
}

TEST(Epsilon, monotone) {
    double prev = 0;
    for (int k = 1; k <= 100; ++k) {
        const double e = epsilon_from_eta(k * 1e-3, 2);
        EXPECT_GT(e, prev);
        prev = e;
    }
}

TEST(PBody, pair_table_matches_model_eta) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        RandomModelOptions o;
        o.n_qubits = 4;
        o.n_steps = 3;
        o.strength = 0.07;
        o.seed = seed;
        const auto m = random_long_range_model(o);
        EXPECT_NEAR(p_body_eta(pair_table(m), 2), eta(m), 1e-15);
    }
}

TEST(PBody, single_three_body_term) {
    ManyBodyTable t{1, 1.0, {{{0, 1, 2}, 0.2, {}}}};
    EXPECT_DOUBLE_EQ(p_body_eta(t, 3), 0.2);
    t.t0 = 2.5;
    EXPECT_DOUBLE_EQ(p_body_eta(t, 3), 0.5);
}

TEST(PBody, dense_three_body_table_oracle) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 1);
    ManyBodyTable t{2, 1.0, {}};
    // norms[q][s] accumulated by the oracle over every ordered choice of
    // the remaining two indices.
    std::map<std::pair<int, int>, double> row;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            for (int c = b + 1; c < 4; ++c) {
                const double w = u(rng);
                const std::vector<double> scale{u(rng), u(rng)};
                t.terms.push_back({{a, b, c}, w, scale});
            }
    for (int q = 0; q < 4; ++q)
        for (int s = 0; s < 2; ++s) {
            double sum = 0;
            for (int j = 0; j < 4; ++j)
                for (int k = j + 1; k < 4; ++k) {
                    if (j == q || k == q) continue;
                    for (const auto& term : t.terms) {
                        std::vector<int> key{q, j, k};
                        std::sort(key.begin(), key.end());
                        if (key == term.qubits) sum += term.norm * term.step_scale[s];
                    }
                }
            row[{q, s}] = sum;
        }
    double best = 0;
    for (const auto& [key, v] : row) best = std::max(best, v);
    EXPECT_NEAR(p_body_eta(t, 3), best, 1e-15);
}

TEST(PBody, errors_and_epsilon_scaffold) {
    ManyBodyTable t{1, 1.0, {{{0, 1}, 0.1, {}}}};
    EXPECT_THROW(p_body_eta(t, 1), InputError);
    EXPECT_THROW(p_body_eta(t, 3), InputError);
    ManyBodyTable dup{1, 1.0, {{{0, 0}, 0.1, {}}}};
    EXPECT_THROW(p_body_eta(dup, 2), InputError);

    const PBodyEpsilon two = p_body_epsilon(0.005, 2);
    EXPECT_TRUE(two.rigorous);
    EXPECT_NEAR(two.value, epsilon_from_eta(0.005, 2), 1e-15);
    const PBodyEpsilon three = p_body_epsilon(1e-6, 3);
    EXPECT_FALSE(three.rigorous);
    EXPECT_NEAR(three.exponent, 1.0 / 3, 1e-15);
    EXPECT_NEAR(three.value, three.constant * 1e-2, 1e-15);
    EXPECT_THROW(p_body_epsilon(0.1, 1), InputError);
}
