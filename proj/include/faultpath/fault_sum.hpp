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

// Exact fault-path oracle.
//
// Each working period t0 is split into m micro-intervals of width
// delta = t0 / m. One micro-interval evolves by
//
//     exp(-i delta H_S) exp(-i delta H_B) prod_<ij> (I - i delta H_ij)
//
// (pair factors in lexicographic (i, j) order; in short-range mode the
// product runs over the per-location couplings). Expanding every noise factor
// into "identity" or "perturbation" gives the fine-grained fault paths.
//
// E(I_r), the sum of all paths with at least one micro-fault in every
// location of I_r and no restriction elsewhere, is evaluated exactly as
//
//     E(I_r) = sum_{S subset of I_r} (-1)^|S| U(mask = S)
//
// where U(mask = S) is the evolution with the noise of every location in S
// deleted for that location's time step. Deleting a long-range location
// deletes every H_ij that touches one of its qubits.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "faultpath/model.hpp"

namespace faultpath {

inline constexpr int kMaxFaults = 12;

struct MicroGrid {
    int m = 64;  // micro-intervals per working period

    double delta(double t0) const { return t0 / m; }
};

// Sorted, distinct locations, each present in the schedule.
using FaultSet = std::vector<MacroLocation>;

FaultSet make_fault_set(const SystemBathModel& model, std::vector<MacroLocation> locations);

// "step:qubit" or "step:qubit,qubit" entries separated by ';'.
FaultSet parse_fault_set(const SystemBathModel& model, const std::string& spec);

// Every fault set of size 1..max_r over the model's locations, in
// lexicographic order of location indices.
std::vector<FaultSet> enumerate_fault_sets(const SystemBathModel& model, int max_r);

// Noise suppression pattern: masked locations, or all noise deleted.
struct NoiseMask {
    std::set<MacroLocation> locations;
    bool all = false;

    static NoiseMask everything() { return NoiseMask{{}, true}; }
};

Operator micro_step(const SystemBathModel& model, int step, const MicroGrid& grid, const NoiseMask& mask);

// Propagator over steps [step_begin, step_end); step_end < 0 means all steps.
Operator evolve_with_mask(const SystemBathModel& model, const MicroGrid& grid, const NoiseMask& mask,
                          int step_begin = 0, int step_end = -1);

struct FaultSumOptions {
    int workers = 1;
};

// Signed inclusion-exclusion branches (-1)^|S| U(mask = S), indexed by the
// subset bitmask S over the fault set.
std::vector<Operator> fault_branches(const SystemBathModel& model, const MicroGrid& grid, const FaultSet& faults,
                                     const FaultSumOptions& options = {});

Operator fault_sum(const SystemBathModel& model, const MicroGrid& grid, const FaultSet& faults,
                   const FaultSumOptions& options = {});

enum class Regime { short_range, long_range_distinct_times, long_range_same_step };

const char* to_string(Regime regime);

struct BoundReport {
    Regime regime = Regime::short_range;
    int r = 0;
    double measured = 0;      // delta-extrapolated sup norm of E(I_r)
    double measured_raw = 0;  // sup norm at the finest grid used
    double bound = 0;
    double margin = 0;
    int m = 0;
    double delta = 0;
    double delta_halved_change = 0;
    double strength = 0;  // epsilon (short-range) or eta (long-range)
    double eta_prime = 0;
    double eta_bound = 0;        // product of eta (2 eta for two-qubit locations)
    double same_step_bound = 0;  // (eta')^r with eta doubled if any two-qubit location
    bool violation = false;
    FaultSet locations;
};

struct VerifyOptions {
    int m_initial = 64;
    int m_max = 1024;
    double convergence_tol = 1e-6;
    int workers = 1;
};

// Analytic bound for a fault set in the model's regime.
double analytic_bound(const SystemBathModel& model, const FaultSet& faults, Regime* regime = nullptr);

BoundReport verify_bound(const SystemBathModel& model, const FaultSet& faults, const VerifyOptions& options = {});

nlohmann::json to_json(const BoundReport& report);

struct PhaseStatistics {
    std::size_t n_samples = 0;
    std::size_t n_branches = 0;
    double mean = 0;
    double stddev = 0;
    double min = 0;
    double max = 0;
    double coherent = 0;  // all phases zero
};

// sup_norm(sum_b exp(i theta_b) branch_b) over uniform random phases.
PhaseStatistics randomized_phase_norm(std::span<const Operator> branches, std::size_t n_samples, std::uint64_t seed);

PhaseStatistics randomized_phase_norm(const SystemBathModel& model, const MicroGrid& grid, const FaultSet& faults,
                                      std::size_t n_samples, std::uint64_t seed);

nlohmann::json to_json(const PhaseStatistics& stats);

}  // namespace faultpath
