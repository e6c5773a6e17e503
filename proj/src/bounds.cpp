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
#include <numbers>
#include <set>
#include <stdexcept>

#include "faultpath/error.hpp"
#include "faultpath/model.hpp"

namespace faultpath {

namespace {

constexpr double kE = std::numbers::e;

void check_eta(double eta) {
    if (!(eta >= 0) || !std::isfinite(eta)) throw InputError("eta must be finite and >= 0");
}

void check(const ContractionBoundInput& in) {
    if (in.n < 0 || in.k < 0 || in.k > in.n) throw InputError("contraction bound needs 0 <= k <= n");
    check_eta(in.eta);
}

void check_arity(int arity) {
    if (arity != 1 && arity != 2) throw InputError("gate arity must be 1 or 2");
}

}  // namespace

double eta_prime_constant() { return std::exp(1.0 + 1.0 / (2.0 * kE)); }
double eta_prime_constant_squared() { return std::exp(2.0 + 1.0 / kE); }

double s_k_bound(const ContractionBoundInput& in) {
    check(in);
    double v = std::pow(in.eta, 2 * in.n - 2 * in.k);
    for (int l = 1; l <= in.k; ++l) v *= (2.0 * in.n * in.eta) / (2.0 * l);
    return v;
}

double s_k_bound_loose(const ContractionBoundInput& in) {
    check(in);
    const double ratio = in.k == 0 ? 1.0 : std::pow(double(in.n) / in.k, in.k);
    return std::pow(kE, in.k) * ratio * std::pow(in.eta, 2 * in.n - in.k);
}

double eta_prime(double eta) {
    check_eta(eta);
    return eta_prime_constant() * std::sqrt(eta);
}

SameStepBound e_ir_same_step_bound(int r, double eta) {
    if (r < 0) throw InputError("fault count must be >= 0");
    SameStepBound out;
    out.eta_prime = eta_prime(eta);
    out.bound = std::pow(out.eta_prime, r);
    if (r % 2 == 0) {
        const int n = r / 2;
        out.intermediate = (n + 1) * std::pow(kE, n) * std::exp(n / kE) * std::pow(eta, n);
        if (*out.intermediate > out.bound * (1 + 1e-12))
            throw std::logic_error("same-step bound chain violated: intermediate exceeds (eta')^r");
    }
    return out;
}

double epsilon_from_eta(double eta, int gate_arity) {
    check_eta(eta);
    check_arity(gate_arity);
    return eta_prime_constant() * std::sqrt(gate_arity * eta);
}

double eta_from_epsilon(double epsilon, int gate_arity) {
    if (!(epsilon >= 0) || !std::isfinite(epsilon)) throw InputError("epsilon must be finite and >= 0");
    check_arity(gate_arity);
    const double root = epsilon / eta_prime_constant();
    return root * root / gate_arity;
}

double p_body_eta(const ManyBodyTable& table, int p) {
    if (p < 2) throw InputError("p-body eta needs p >= 2");
    if (table.n_steps < 1) throw InputError("table needs at least one step");
    for (const auto& t : table.terms) {
        if (int(t.qubits.size()) != p) throw InputError("term arity does not match p");
        if (std::set<int>(t.qubits.begin(), t.qubits.end()).size() != t.qubits.size())
            throw InputError("term qubits must be distinct");
        if (!t.step_scale.empty() && int(t.step_scale.size()) != table.n_steps)
            throw InputError("step_scale needs one factor per step");
        if (!(t.norm >= 0)) throw InputError("term norm must be >= 0");
    }
    double best = 0;
    for (int s = 0; s < table.n_steps; ++s) {
        std::map<int, double> row;
        for (const auto& t : table.terms) {
            const double w = t.norm * (t.step_scale.empty() ? 1.0 : std::abs(t.step_scale[s]));
            for (int q : t.qubits) row[q] += w;
        }
        for (const auto& [q, sum] : row) best = std::max(best, sum);
    }
    return best * table.t0;
}

ManyBodyTable pair_table(const SystemBathModel& model) {
    ManyBodyTable table{model.n_steps(), model.t0(), {}};
    const auto& terms = model.pair_terms();
    for (std::size_t k = 0; k < terms.size(); ++k)
        table.terms.push_back(ManyBodyTerm{{terms[k].i, terms[k].j}, model.pair_norms()[k], terms[k].step_scale});
    return table;
}

PBodyEpsilon p_body_epsilon(double eta, int p, std::optional<double> constant) {
    check_eta(eta);
    if (p < 2) throw InputError("p-body epsilon needs p >= 2");
    PBodyEpsilon out;
    out.exponent = 1.0 / p;
    out.constant = constant.value_or(eta_prime_constant() * std::numbers::sqrt2);
    out.value = out.constant * std::pow(eta, out.exponent);
    out.rigorous = p == 2 && !constant.has_value();
    return out;
}

}  // namespace faultpath
