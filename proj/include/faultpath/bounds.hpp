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

// Closed-form bounds for long-range noise: the contraction-count chain, the
// same-time-step locality strength eta' and the induced local strength
// epsilon(eta).

#include <optional>
#include <vector>

namespace faultpath {

class SystemBathModel;

// e^{1 + 1/(2e)} and e^{2 + 1/e} = (e^{1 + 1/(2e)})^2.
double eta_prime_constant();
double eta_prime_constant_squared();

struct ContractionBoundInput {
    int n = 0;  // half the fault count
    int k = 0;  // contracted pairs, 0 <= k <= n
    double eta = 0;
};

// (2 n eta)^k eta^(2n - 2k) / (2^k k!)
double s_k_bound(const ContractionBoundInput& in);
// e^k (n/k)^k eta^(2n - k), the looser form obtained from k! >= (k/e)^k.
double s_k_bound_loose(const ContractionBoundInput& in);

// eta' = e^{1 + 1/(2e)} sqrt(eta)
double eta_prime(double eta);

struct SameStepBound {
    double bound = 0;                   // (eta')^r
    std::optional<double> intermediate;  // (n+1) e^n e^{n/e} eta^n, even r only
    double eta_prime = 0;
};

SameStepBound e_ir_same_step_bound(int r, double eta);

// Locality strength induced by long-range noise of strength eta:
// arity 1 uses eta, arity 2 (general circuits) uses 2 eta.
double epsilon_from_eta(double eta, int gate_arity = 2);
double eta_from_epsilon(double epsilon, int gate_arity = 2);

struct ManyBodyTerm {
    std::vector<int> qubits;
    double norm = 0;
    std::vector<double> step_scale;  // empty = constant
};

struct ManyBodyTable {
    int n_steps = 1;
    double t0 = 1;
    std::vector<ManyBodyTerm> terms;
};

// max over qubits and steps of the summed norms of every p-body term touching
// the qubit, times t0.
double p_body_eta(const ManyBodyTable& table, int p);

ManyBodyTable pair_table(const SystemBathModel& model);

// epsilon = constant * eta^(1/p). Only the exponent is established; the
// default constant is the two-body one and is not a proven bound for p > 2.
struct PBodyEpsilon {
    double value = 0;
    double exponent = 0;
    double constant = 0;
    bool rigorous = false;
};

PBodyEpsilon p_body_epsilon(double eta, int p, std::optional<double> constant = std::nullopt);

}  // namespace faultpath
