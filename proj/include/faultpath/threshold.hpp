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

#pragma once

// Concatenation recursion for local noise and the induced long-range noise
// budgets.
//
//     eps^(k) = C * binom(A, t+1) * (eps^(k-1))^(t+1)
//             = eps0 * (eps / eps0)^((t+1)^k),
//     eps0    = (C * binom(A, t+1))^(-1/t).

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "faultpath/decay.hpp"

namespace faultpath {

struct GadgetParams {
    std::int64_t A = 0;  // max macro-locations per 1-gadget
    std::int64_t t = 0;  // correctable errors
    double C = 1;

    void validate() const;
};

// Exact binomial coefficient; throws InputError on 64-bit overflow.
std::uint64_t binomial(std::int64_t n, std::int64_t k);

double epsilon_threshold(const GadgetParams& params);

struct LevelValue {
    double value = 0;
    bool saturated = false;  // some level exceeded 1; iteration stopped there
    int level = 0;           // level actually reached
};

// Iterative evaluation of the recursion. Iterates the normalized ratio
// eps^(k)/eps0, which is an exact rewrite of the recursion and keeps the
// fixed point eps = eps0 exact.
LevelValue epsilon_level(const GadgetParams& params, double epsilon, int k);

double epsilon_level_closed_form(const GadgetParams& params, double epsilon, int k);

struct RecursionTrace {
    GadgetParams params;
    double input_epsilon = 0;
    double epsilon0 = 0;
    double L = 0;  // informational circuit size
    bool saturated = false;
    std::vector<std::pair<int, double>> levels;
};

RecursionTrace recursion_trace(const GadgetParams& params, double epsilon, int max_level, double L = 0);

// Largest eta whose induced epsilon (two-qubit gates) stays below eps0.
double eta_budget(double epsilon0);

// Largest delta with delta * lattice_sum(1) * t0 <= eta_budget(eps0), using
// the upper end of the lattice-sum interval. Throws DivergenceError for z <= D.
double delta_budget(double epsilon0, const LatticeSpec& lattice, double t0 = 1.0,
                    const LatticeSumOptions& options = {});

struct OverheadEstimate {
    bool reachable = false;
    int level = 0;
    double final_epsilon = 0;
    double size_factor = 1;  // A^k
};

// Smallest k with eps^(k) <= target.
OverheadEstimate overhead_for_target(const GadgetParams& params, double epsilon, double target, int max_level = 64);

// Named parameter presets; "paper-magnitude" has eps0 = 1e-5.
GadgetParams gadget_preset(const std::string& name);
std::vector<std::string> gadget_preset_names();

nlohmann::json to_json(const RecursionTrace& trace);

}  // namespace faultpath
