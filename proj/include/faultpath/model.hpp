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

// System-bath noise model: gate schedule (H_S), bath Hamiltonian (H_B) and
// either per-location couplings (short-range mode) or pair couplings H_ij
// acting on two qubits and the bath (long-range mode).

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "faultpath/opcore.hpp"

namespace faultpath {

enum class NoiseMode { short_range, long_range };

const char* to_string(NoiseMode mode);

// One ideal gate of the circuit. `params` meaning depends on `kind`:
//   identity, x, y, z, h, s, cz, cnot, swap : no params
//   rx, ry, rz                              : [angle]
//   generator                               : flattened [re, im, re, im, ...]
//                                             row-major Hermitian generator
//                                             (energy units) on the support
struct Gate {
    std::string kind = "identity";
    std::vector<int> support;
    std::vector<double> params;
    bool operator==(const Gate&) const = default;
};

// Hermitian G on the gate support (first support qubit slowest) with
// exp(-i t0 G) equal to the ideal gate.
Operator gate_generator(const Gate& gate, double t0);

struct GateSchedule {
    double t0 = 1.0;
    std::vector<std::vector<Gate>> steps;

    int n_steps() const { return int(steps.size()); }
    bool operator==(const GateSchedule&) const = default;
};

// Coupling of qubits i < j and the bath; `op` acts on qubit_i (x) qubit_j (x) bath.
// Optional per-step scale factors model piecewise-constant time dependence.
struct PairTerm {
    int i = 0;
    int j = 1;
    Operator op;
    std::vector<double> step_scale;

    double scale_at(int step) const { return step_scale.empty() ? 1.0 : step_scale.at(step); }
    bool operator==(const PairTerm& o) const {
        return i == o.i && j == o.j && step_scale == o.step_scale && op.rows() == o.op.rows() &&
               op.cols() == o.op.cols() && op == o.op;
    }
};

// Short-range coupling H_{SB,a} for one location; `op` acts on the support
// qubits (x) bath.
struct LocationTerm {
    int step = 0;
    std::vector<int> support;
    Operator op;
    bool operator==(const LocationTerm& o) const {
        return step == o.step && support == o.support && op.rows() == o.op.rows() && op.cols() == o.op.cols() &&
               op == o.op;
    }
};

// A gate location during one time step. `support` is sorted.
struct MacroLocation {
    int step = 0;
    std::vector<int> support;
    auto operator<=>(const MacroLocation&) const = default;
    bool two_qubit() const { return support.size() == 2; }
};

std::string to_string(const MacroLocation& loc);

class SystemBathModel {
   public:
    // Validates every invariant, canonicalizes pair orientation to i < j and
    // fills idle qubits with identity gates. Throws ModelError.
    SystemBathModel(TensorFactorSpec spec, GateSchedule schedule, Operator h_bath, NoiseMode mode,
                    std::vector<PairTerm> pair_terms, std::vector<LocationTerm> location_terms = {});

    const TensorFactorSpec& spec() const { return spec_; }
    const GateSchedule& schedule() const { return schedule_; }
    const Operator& h_bath() const { return h_bath_; }
    NoiseMode mode() const { return mode_; }
    const std::vector<PairTerm>& pair_terms() const { return pair_terms_; }
    const std::vector<LocationTerm>& location_terms() const { return location_terms_; }
    int n_qubits() const { return spec_.n_qubits; }
    int n_steps() const { return schedule_.n_steps(); }
    double t0() const { return schedule_.t0; }

    // Sup norm of each pair term (unscaled), parallel to pair_terms().
    const std::vector<double>& pair_norms() const { return pair_norms_; }
    const std::vector<double>& location_norms() const { return location_norms_; }

    std::vector<MacroLocation> locations() const;
    std::vector<MacroLocation> locations_at(int step) const;
    bool has_location(const MacroLocation& loc) const;

    // Full-space operators.
    Operator system_hamiltonian(int step) const;
    Operator bath_hamiltonian() const;
    Operator pair_coupling(std::size_t term_index, int step) const;
    Operator location_coupling(std::size_t term_index) const;
    Operator total_hamiltonian(int step) const;

    bool operator==(const SystemBathModel& o) const;

   private:
    void validate();

    TensorFactorSpec spec_;
    GateSchedule schedule_;
    Operator h_bath_;
    NoiseMode mode_;
    std::vector<PairTerm> pair_terms_;
    std::vector<LocationTerm> location_terms_;
    std::vector<double> pair_norms_;
    std::vector<double> location_norms_;
};

// max over qubits i and steps of sum_j ||H_ij|| * |scale| * t0. Long-range only.
double eta(const SystemBathModel& model);

// sum_j ||H_ij|| * |scale| * t0 for one qubit at one step.
double qubit_coupling_sum(const SystemBathModel& model, int qubit, int step);

// max over locations and steps of ||H_{SB,a}|| * t0. Short-range only.
double epsilon_short(const SystemBathModel& model);

// JSON document <-> model. See README for the schema.
SystemBathModel load_model(const nlohmann::json& document);
SystemBathModel load_model_file(const std::filesystem::path& path);
nlohmann::json save_model(const SystemBathModel& model);

// Seeded generators used by sweeps and tests.
struct RandomModelOptions {
    int n_qubits = 3;
    int bath_dim = 2;
    int n_steps = 2;
    double strength = 0.05;  // target eta (long-range) or epsilon (short-range)
    double two_qubit_gate_probability = 0.5;
    std::uint64_t seed = 0;
};

SystemBathModel random_long_range_model(const RandomModelOptions& options);
SystemBathModel random_short_range_model(const RandomModelOptions& options);

// Same model with every pair term (or location term) multiplied by c.
SystemBathModel scaled_noise(const SystemBathModel& model, double c);

}  // namespace faultpath
