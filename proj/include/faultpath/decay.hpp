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

// Interaction sums sum_{j != 0} delta / |j|^z over the D-dimensional integer
// lattice, with rigorous tail intervals for the infinite lattice.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace faultpath {

enum class Metric { euclidean, chebyshev };

const char* to_string(Metric metric);
Metric parse_metric(const std::string& name);

struct LatticeSpec {
    int D = 1;
    double z = 2;
    double delta = 1;
    std::optional<std::int64_t> radius;  // empty = infinite lattice
    Metric metric = Metric::euclidean;
};

enum class Verdict { truncated, convergent, divergent };

const char* to_string(Verdict verdict);

struct LatticeSum {
    Verdict verdict = Verdict::truncated;
    double value = 0;           // interval midpoint (exact direct sum when truncated)
    double tail_halfwidth = 0;  // 0 for truncated sums
    std::int64_t radius_used = 0;
    std::uint64_t sites = 0;  // lattice sites summed directly

    bool divergent() const { return verdict == Verdict::divergent; }
    double lower() const { return value - tail_halfwidth; }
    double upper() const { return value + tail_halfwidth; }
};

struct LatticeSumOptions {
    double relative_tolerance = 1e-9;
    std::uint64_t max_sites = 100'000'000;
    std::int64_t initial_radius = 8;
};

void validate(const LatticeSpec& spec);

// sum over nonzero lattice vectors with |j| <= radius of |j|^{-z} (delta = 1).
double partial_sum(int D, double z, std::int64_t radius, Metric metric = Metric::euclidean);

// Rigorous [lower, upper] for sum over |j| > radius of |j|^{-z}, z > D.
struct TailInterval {
    double lower = 0;
    double upper = 0;
};
TailInterval tail_interval(int D, double z, std::int64_t radius, Metric metric = Metric::euclidean);

LatticeSum lattice_sum(const LatticeSpec& spec, const LatticeSumOptions& options = {});

// lattice_sum * t0; throws DivergenceError for z <= D on the infinite lattice.
double eta_for_lattice(const LatticeSpec& spec, double t0 = 1.0, const LatticeSumOptions& options = {});

struct GrowthFit {
    std::string law = "none";  // none | log | power
    double coefficient = 0;    // log law: S(R) ~ coefficient * ln R; power law: fitted exponent
    std::vector<std::pair<std::int64_t, double>> partial_sums;
};

// Fit the growth of partial sums of a divergent cell.
GrowthFit fit_growth(int D, double z, Metric metric = Metric::euclidean);

struct ScanCell {
    int D = 1;
    double z = 0;
    LatticeSum sum;
    GrowthFit growth;
};

std::vector<ScanCell> divergence_scan(const std::vector<int>& dims, const std::vector<double>& exponents,
                                      Metric metric = Metric::euclidean, const LatticeSumOptions& options = {});

// CSV columns: D,z,delta,R,metric,value,tail_halfwidth,verdict
std::string csv_header();
std::string csv_row(const LatticeSpec& spec, const LatticeSum& sum);

}  // namespace faultpath
