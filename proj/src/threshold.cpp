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

#include "faultpath/threshold.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "faultpath/bounds.hpp"
#include "faultpath/error.hpp"

namespace faultpath {

namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon >= 0) || !std::isfinite(epsilon)) throw InputError("epsilon must be finite and >= 0");
}

}  // namespace

void GadgetParams::validate() const {
    if (t < 1) throw InputError("gadget parameter t must be >= 1");
    if (A < t + 1) throw InputError("gadget parameter A must be >= t + 1");
    if (!(C > 0) || !std::isfinite(C)) throw InputError("gadget constant C must be positive");
}

std::uint64_t binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) throw InputError("binomial needs 0 <= k <= n");
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        acc = acc * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
        if (acc > std::numeric_limits<std::uint64_t>::max()) throw InputError("binomial coefficient overflows 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

double epsilon_threshold(const GadgetParams& p) {
    p.validate();
    const double count = p.C * double(binomial(p.A, p.t + 1));
    return std::pow(count, -1.0 / double(p.t));
}

LevelValue epsilon_level(const GadgetParams& p, double epsilon, int k) {
    p.validate();
    check_epsilon(epsilon);
    if (k < 0) throw InputError("level k must be >= 0");
    LevelValue out{epsilon, epsilon > 1, 0};
    if (k == 0 || epsilon == 0 || out.saturated) return out;
    const double eps0 = epsilon_threshold(p);
    double ratio = epsilon / eps0;
    for (int level = 1; level <= k; ++level) {
        ratio = std::pow(ratio, double(p.t + 1));
        out.value = eps0 * ratio;
        out.level = level;
        if (out.value > 1) {
            out.saturated = true;
            break;
        }
    }
    return out;
}

double epsilon_level_closed_form(const GadgetParams& p, double epsilon, int k) {
    p.validate();
    check_epsilon(epsilon);
    if (k < 0) throw InputError("level k must be >= 0");
    if (k == 0) return epsilon;
    const double eps0 = epsilon_threshold(p);
    return eps0 * std::pow(epsilon / eps0, std::pow(double(p.t + 1), k));
}

RecursionTrace recursion_trace(const GadgetParams& p, double epsilon, int max_level, double L) {
    RecursionTrace tr;
    tr.params = p;
    tr.input_epsilon = epsilon;
    tr.epsilon0 = epsilon_threshold(p);
    tr.L = L;
    tr.levels.emplace_back(0, epsilon);
    for (int k = 1; k <= max_level; ++k) {
        const LevelValue v = epsilon_level(p, epsilon, k);
        tr.levels.emplace_back(v.level, v.value);
        if (v.saturated) {
            tr.saturated = true;
            break;
        }
    }
    return tr;
}

double eta_budget(double epsilon0) {
    if (!(epsilon0 > 0)) throw InputError("eps0 must be positive");
    return eta_from_epsilon(epsilon0, 2);
}

double delta_budget(double epsilon0, const LatticeSpec& lattice, double t0, const LatticeSumOptions& options) {
    if (!(t0 > 0)) throw InputError("t0 must be positive");
    LatticeSpec unit = lattice;
    unit.delta = 1;
    const LatticeSum s = lattice_sum(unit, options);
    if (s.divergent()) throw DivergenceError("no delta budget: the interaction sum diverges for z <= D");
    return eta_budget(epsilon0) / (s.upper() * t0);
}

OverheadEstimate overhead_for_target(const GadgetParams& p, double epsilon, double target, int max_level) {
    OverheadEstimate out;
    for (int k = 0; k <= max_level; ++k) {
        const LevelValue v = epsilon_level(p, epsilon, k);
        if (v.saturated) break;
        if (v.value <= target) {
            out.reachable = true;
            out.level = k;
            out.final_epsilon = v.value;
            out.size_factor = std::pow(double(p.A), k);
            break;
        }
    }
    return out;
}

GadgetParams gadget_preset(const std::string& name) {
    if (name == "paper-magnitude") {
        // One correctable error and C * binom(447, 2) = 1e5, i.e. eps0 = 1e-5.
        constexpr std::int64_t A = 447;
        return GadgetParams{A, 1, 1e5 / double(binomial(A, 2))};
    }
    throw InputError("unknown gadget preset '" + name + "'");
}

std::vector<std::string> gadget_preset_names() { return {"paper-magnitude"}; }

nlohmann::json to_json(const RecursionTrace& tr) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& [k, v] : tr.levels) levels.push_back({{"k", k}, {"epsilon", v}});
    return {{"A", tr.params.A},     {"t", tr.params.t},           {"C", tr.params.C},
            {"epsilon", tr.input_epsilon}, {"epsilon0", tr.epsilon0}, {"L", tr.L},
            {"saturated", tr.saturated},   {"levels", levels}};
}

}  // namespace faultpath
