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

#include "faultpath/model.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <set>

namespace faultpath {

namespace {

constexpr double kPi = std::numbers::pi;

std::string step_path(int step) { return "/steps/" + std::to_string(step); }

Operator projector11() {
    Operator p = Operator::Zero(4, 4);
    p(3, 3) = 1;
    return p;
}

Operator cnot_matrix() {
    Operator m = Operator::Zero(4, 4);
    m(0, 0) = m(1, 1) = 1;
    m(2, 3) = m(3, 2) = 1;
    return m;
}

Operator swap_matrix() {
    Operator m = Operator::Zero(4, 4);
    m(0, 0) = m(3, 3) = 1;
    m(1, 2) = m(2, 1) = 1;
    return m;
}

Operator hadamard() { return (pauli::X() + pauli::Z()) / std::numbers::sqrt2; }

// exp(-i t0 G) = U for a Hermitian involution U.
Operator involution_generator(const Operator& u, double t0) {
    return (kPi / 2) * (u - Operator::Identity(u.rows(), u.cols())) / t0;
}

std::size_t expected_params(const std::string& kind, std::size_t arity) {
    if (kind == "rx" || kind == "ry" || kind == "rz") return 1;
    if (kind == "generator") return 2 * (std::size_t{1} << (2 * arity));
    return 0;
}

bool single_qubit_kind(const std::string& k) {
    return k == "x" || k == "y" || k == "z" || k == "h" || k == "s" || k == "rx" || k == "ry" || k == "rz";
}
bool two_qubit_kind(const std::string& k) { return k == "cz" || k == "cnot" || k == "swap"; }
bool any_arity_kind(const std::string& k) { return k == "identity" || k == "generator"; }

// Exchange the two qubit factors of an operator on qubit (x) qubit (x) bath.
Operator swap_qubit_factors(const Operator& op, int bath_dim) {
    TensorFactorSpec local{2, bath_dim};
    Operator sw = embed(swap_matrix(), {0, 1}, local);
    return sw * op * sw;
}

void check_hermitian(const Operator& op, const std::string& path) {
    if (!all_finite(op)) throw ModelError(path, "non-finite matrix entries");
    if (!is_hermitian(op, kDefaultTolerances.hermiticity * std::max(1.0, op.cwiseAbs().maxCoeff())))
        throw ModelError(path, "matrix is not Hermitian");
}

}  // namespace

const char* to_string(NoiseMode mode) { return mode == NoiseMode::short_range ? "short_range" : "long_range"; }

std::string to_string(const MacroLocation& loc) {
    std::string s = std::to_string(loc.step) + ":";
    for (std::size_t k = 0; k < loc.support.size(); ++k) s += (k ? "," : "") + std::to_string(loc.support[k]);
    return s;
}

Operator gate_generator(const Gate& gate, double t0) {
    const std::size_t arity = gate.support.size();
    const std::size_t dim = std::size_t{1} << arity;
    const std::string& k = gate.kind;
    if (gate.params.size() != expected_params(k, arity))
        throw InputError("gate '" + k + "': expected " + std::to_string(expected_params(k, arity)) + " params");
    if (k == "identity") return Operator::Zero(dim, dim);
    if (k == "x") return involution_generator(pauli::X(), t0);
    if (k == "y") return involution_generator(pauli::Y(), t0);
    if (k == "z") return involution_generator(pauli::Z(), t0);
    if (k == "h") return involution_generator(hadamard(), t0);
    if (k == "s") {
        Operator g = Operator::Zero(2, 2);
        g(1, 1) = -kPi / 2 / t0;
        return g;
    }
    if (k == "rx") return gate.params[0] / (2 * t0) * pauli::X();
    if (k == "ry") return gate.params[0] / (2 * t0) * pauli::Y();
    if (k == "rz") return gate.params[0] / (2 * t0) * pauli::Z();
    if (k == "cz") return kPi / t0 * projector11();
    if (k == "cnot") return involution_generator(cnot_matrix(), t0);
    if (k == "swap") return involution_generator(swap_matrix(), t0);
    if (k == "generator") {
        Operator g(dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                g(r, c) = Complex(gate.params[2 * (r * dim + c)], gate.params[2 * (r * dim + c) + 1]);
        return g;
    }
    throw InputError("unknown gate kind '" + k + "'");
}

SystemBathModel::SystemBathModel(TensorFactorSpec spec, GateSchedule schedule, Operator h_bath, NoiseMode mode,
                                 std::vector<PairTerm> pair_terms, std::vector<LocationTerm> location_terms)
    : spec_(spec),
      schedule_(std::move(schedule)),
      h_bath_(std::move(h_bath)),
      mode_(mode),
      pair_terms_(std::move(pair_terms)),
      location_terms_(std::move(location_terms)) {
    validate();
}

void SystemBathModel::validate() {
    const int n = spec_.n_qubits;
    if (n < 1) throw ModelError("/n_qubits", "must be >= 1");
    if (n > 12) throw ModelError("/n_qubits", "must be <= 12 for dense evaluation");
    if (spec_.bath_dim < 1) throw ModelError("/bath_dim", "must be >= 1");
    if (!(schedule_.t0 > 0) || !std::isfinite(schedule_.t0)) throw ModelError("/t0", "must be positive and finite");
    if (schedule_.steps.empty()) throw ModelError("/steps", "at least one time step is required");

    if (h_bath_.rows() != spec_.bath_dim || h_bath_.cols() != spec_.bath_dim)
        throw ModelError("/bath_hamiltonian", "dimension must equal bath_dim");
    check_hermitian(h_bath_, "/bath_hamiltonian");

    for (int s = 0; s < schedule_.n_steps(); ++s) {
        auto& gates = schedule_.steps[s];
        std::vector<char> seen(n, 0);
        for (std::size_t g = 0; g < gates.size(); ++g) {
            const std::string path = step_path(s) + "/" + std::to_string(g);
            const Gate& gate = gates[g];
            const std::size_t arity = gate.support.size();
            if (arity != 1 && arity != 2) throw ModelError(path + "/support", "gate support must have 1 or 2 qubits");
            if ((arity == 1 && !single_qubit_kind(gate.kind) && !any_arity_kind(gate.kind)) ||
                (arity == 2 && !two_qubit_kind(gate.kind) && !any_arity_kind(gate.kind)))
                throw ModelError(path + "/kind", "gate kind '" + gate.kind + "' invalid for support size " +
                                                     std::to_string(arity));
            for (int q : gate.support) {
                if (q < 0 || q >= n) throw ModelError(path + "/support", "qubit index out of range");
                if (seen[q])
                    throw ModelError(path + "/support",
                                     "qubit " + std::to_string(q) + " appears in overlapping gate supports");
                seen[q] = 1;
            }
            if (gate.params.size() != expected_params(gate.kind, arity))
                throw ModelError(path + "/params", "wrong number of params for kind '" + gate.kind + "'");
            for (double p : gate.params)
                if (!std::isfinite(p)) throw ModelError(path + "/params", "non-finite parameter");
            if (gate.kind == "generator") check_hermitian(gate_generator(gate, schedule_.t0), path + "/params");
        }
        for (int q = 0; q < n; ++q)
            if (!seen[q]) gates.push_back(Gate{"identity", {q}, {}});
        std::stable_sort(gates.begin(), gates.end(), [](const Gate& a, const Gate& b) {
            return *std::min_element(a.support.begin(), a.support.end()) <
                   *std::min_element(b.support.begin(), b.support.end());
        });
    }

    if (mode_ == NoiseMode::long_range && !location_terms_.empty())
        throw ModelError("/location_terms", "per-location terms are not allowed in long_range mode");
    if (mode_ == NoiseMode::short_range && !pair_terms_.empty())
        throw ModelError("/pair_terms", "pair terms are not allowed in short_range mode");

    const std::size_t pair_dim = 4 * std::size_t(spec_.bath_dim);
    std::vector<PairTerm> canonical;
    std::vector<bool> flipped;
    for (std::size_t k = 0; k < pair_terms_.size(); ++k) {
        const std::string path = "/pair_terms/" + std::to_string(k);
        PairTerm t = std::move(pair_terms_[k]);
        if (t.i < 0 || t.i >= n || t.j < 0 || t.j >= n) throw ModelError(path, "qubit index out of range");
        if (t.i == t.j) throw ModelError(path, "pair term needs two distinct qubits");
        if (std::size_t(t.op.rows()) != pair_dim || std::size_t(t.op.cols()) != pair_dim)
            throw ModelError(path + "/matrix", "dimension must be 4 * bath_dim");
        check_hermitian(t.op, path + "/matrix");
        if (!t.step_scale.empty() && int(t.step_scale.size()) != schedule_.n_steps())
            throw ModelError(path + "/step_scale", "needs one factor per time step");
        for (double c : t.step_scale)
            if (!std::isfinite(c)) throw ModelError(path + "/step_scale", "non-finite factor");
        const bool flip = t.i > t.j;
        if (flip) {
            std::swap(t.i, t.j);
            t.op = swap_qubit_factors(t.op, spec_.bath_dim);
        }
        auto dup = std::find_if(canonical.begin(), canonical.end(),
                                [&](const PairTerm& o) { return o.i == t.i && o.j == t.j; });
        if (dup != canonical.end()) {
            const std::size_t d = std::size_t(dup - canonical.begin());
            if (flipped[d] == flip)
                throw ModelError(path, "duplicate pair term for <" + std::to_string(t.i) + "," + std::to_string(t.j) + ">");
            const bool same = (dup->op - t.op).cwiseAbs().maxCoeff() <= 1e-12 && dup->step_scale == t.step_scale;
            if (!same)
                throw ModelError(path, "asymmetric pair registration: H_" + std::to_string(t.j) + std::to_string(t.i) +
                                           " differs from H_" + std::to_string(t.i) + std::to_string(t.j));
            continue;
        }
        canonical.push_back(std::move(t));
        flipped.push_back(flip);
    }
    std::sort(canonical.begin(), canonical.end(),
              [](const PairTerm& a, const PairTerm& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
    pair_terms_ = std::move(canonical);

    std::set<MacroLocation> term_locations;
    for (std::size_t k = 0; k < location_terms_.size(); ++k) {
        const std::string path = "/location_terms/" + std::to_string(k);
        LocationTerm& t = location_terms_[k];
        std::sort(t.support.begin(), t.support.end());
        MacroLocation loc{t.step, t.support};
        if (t.step < 0 || t.step >= schedule_.n_steps()) throw ModelError(path + "/step", "step index out of range");
        if (!has_location(loc)) throw ModelError(path + "/support", "support does not match a gate at this step");
        if (!term_locations.insert(loc).second) throw ModelError(path, "duplicate term for location " + to_string(loc));
        const std::size_t dim = (std::size_t{1} << t.support.size()) * std::size_t(spec_.bath_dim);
        if (std::size_t(t.op.rows()) != dim || std::size_t(t.op.cols()) != dim)
            throw ModelError(path + "/matrix", "dimension must be 2^|support| * bath_dim");
        check_hermitian(t.op, path + "/matrix");
    }
    std::sort(location_terms_.begin(), location_terms_.end(), [](const LocationTerm& a, const LocationTerm& b) {
        return MacroLocation{a.step, a.support} < MacroLocation{b.step, b.support};
    });

    pair_norms_.clear();
    for (const auto& t : pair_terms_) pair_norms_.push_back(sup_norm(t.op));
    location_norms_.clear();
    for (const auto& t : location_terms_) location_norms_.push_back(sup_norm(t.op));
}

std::vector<MacroLocation> SystemBathModel::locations_at(int step) const {
    std::vector<MacroLocation> out;
    for (const Gate& g : schedule_.steps.at(step)) {
        MacroLocation loc{step, g.support};
        std::sort(loc.support.begin(), loc.support.end());
        out.push_back(std::move(loc));
    }
    return out;
}

std::vector<MacroLocation> SystemBathModel::locations() const {
    std::vector<MacroLocation> out;
    for (int s = 0; s < n_steps(); ++s)
        for (auto& loc : locations_at(s)) out.push_back(std::move(loc));
    return out;
}

bool SystemBathModel::has_location(const MacroLocation& loc) const {
    if (loc.step < 0 || loc.step >= n_steps()) return false;
    for (const Gate& g : schedule_.steps[loc.step]) {
        std::vector<int> sup = g.support;
        std::sort(sup.begin(), sup.end());
        if (sup == loc.support) return true;
    }
    return false;
}

Operator SystemBathModel::system_hamiltonian(int step) const {
    const std::size_t dim = spec_.total_dim();
    Operator h = Operator::Zero(dim, dim);
    for (const Gate& g : schedule_.steps.at(step)) {
        if (g.kind == "identity") continue;
        h += embed(gate_generator(g, t0()), std::span<const int>(g.support), spec_);
    }
    return h;
}

Operator SystemBathModel::bath_hamiltonian() const { return embed(h_bath_, {spec_.bath_index()}, spec_); }

Operator SystemBathModel::pair_coupling(std::size_t term_index, int step) const {
    const PairTerm& t = pair_terms_.at(term_index);
    return t.scale_at(step) * embed(t.op, {t.i, t.j, spec_.bath_index()}, spec_);
}

Operator SystemBathModel::location_coupling(std::size_t term_index) const {
    const LocationTerm& t = location_terms_.at(term_index);
    std::vector<int> support = t.support;
    support.push_back(spec_.bath_index());
    return embed(t.op, std::span<const int>(support), spec_);
}

Operator SystemBathModel::total_hamiltonian(int step) const {
    Operator h = system_hamiltonian(step) + bath_hamiltonian();
    for (std::size_t k = 0; k < pair_terms_.size(); ++k) h += pair_coupling(k, step);
    for (std::size_t k = 0; k < location_terms_.size(); ++k)
        if (location_terms_[k].step == step) h += location_coupling(k);
    return h;
}

bool SystemBathModel::operator==(const SystemBathModel& o) const {
    return spec_ == o.spec_ && schedule_ == o.schedule_ && mode_ == o.mode_ && h_bath_.rows() == o.h_bath_.rows() &&
           h_bath_ == o.h_bath_ && pair_terms_ == o.pair_terms_ && location_terms_ == o.location_terms_;
}

double qubit_coupling_sum(const SystemBathModel& model, int qubit, int step) {
    double sum = 0;
    const auto& terms = model.pair_terms();
    for (std::size_t k = 0; k < terms.size(); ++k)
        if (terms[k].i == qubit || terms[k].j == qubit)
            sum += model.pair_norms()[k] * std::abs(terms[k].scale_at(step));
    return sum * model.t0();
}

double eta(const SystemBathModel& model) {
    if (model.mode() != NoiseMode::long_range) throw ModelError("/mode", "eta requires a long_range model");
    double best = 0;
    for (int s = 0; s < model.n_steps(); ++s)
        for (int q = 0; q < model.n_qubits(); ++q) best = std::max(best, qubit_coupling_sum(model, q, s));
    return best;
}

double epsilon_short(const SystemBathModel& model) {
    if (model.mode() != NoiseMode::short_range)
        throw ModelError("/mode", "epsilon_short requires a short_range model");
    double best = 0;
    for (double n : model.location_norms()) best = std::max(best, n * model.t0());
    return best;
}

namespace {

GateSchedule random_schedule(const RandomModelOptions& o, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    static const char* single[] = {"rx", "ry", "rz", "h"};
    static const char* pair[] = {"cz", "cnot"};
    GateSchedule sched;
    for (int s = 0; s < o.n_steps; ++s) {
        std::vector<int> order(o.n_qubits);
        for (int q = 0; q < o.n_qubits; ++q) order[q] = q;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<Gate> gates;
        std::size_t next = 0;
        if (o.n_qubits >= 2 && unit(rng) < o.two_qubit_gate_probability) {
            gates.push_back(Gate{pair[rng() % 2], {order[0], order[1]}, {}});
            next = 2;
        }
        for (; next < order.size(); ++next) {
            Gate g{single[rng() % 4], {order[next]}, {}};
            if (g.kind != "h") g.params = {2 * kPi * unit(rng)};
            gates.push_back(std::move(g));
        }
        sched.steps.push_back(std::move(gates));
    }
    return sched;
}

}  // namespace

SystemBathModel random_long_range_model(const RandomModelOptions& o) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> weight(0.2, 1.0);
    GateSchedule sched = random_schedule(o, rng);
    Operator hb = random_hermitian(std::size_t(o.bath_dim), rng);
    std::vector<PairTerm> terms;
    for (int i = 0; i < o.n_qubits; ++i)
        for (int j = i + 1; j < o.n_qubits; ++j) {
            const double w = weight(rng);
            terms.push_back(PairTerm{i, j, w * random_hermitian(4 * std::size_t(o.bath_dim), rng), {}});
        }
    SystemBathModel raw({o.n_qubits, o.bath_dim}, sched, hb, NoiseMode::long_range, terms);
    const double e = eta(raw);
    if (e == 0) return raw;
    return scaled_noise(raw, o.strength / e);
}

SystemBathModel random_short_range_model(const RandomModelOptions& o) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> weight(0.2, 1.0);
    GateSchedule sched = random_schedule(o, rng);
    Operator hb = random_hermitian(std::size_t(o.bath_dim), rng);
    SystemBathModel shell({o.n_qubits, o.bath_dim}, sched, hb, NoiseMode::short_range, {});
    std::vector<LocationTerm> terms;
    for (const MacroLocation& loc : shell.locations()) {
        const std::size_t dim = (std::size_t{1} << loc.support.size()) * std::size_t(o.bath_dim);
        const double w = weight(rng);
        terms.push_back(LocationTerm{loc.step, loc.support, w * random_hermitian(dim, rng)});
    }
    SystemBathModel raw({o.n_qubits, o.bath_dim}, shell.schedule(), hb, NoiseMode::short_range, {}, terms);
    const double e = epsilon_short(raw);
    if (e == 0) return raw;
    return scaled_noise(raw, o.strength / e);
}

SystemBathModel scaled_noise(const SystemBathModel& model, double c) {
    std::vector<PairTerm> pairs = model.pair_terms();
    for (auto& t : pairs) t.op *= c;
    std::vector<LocationTerm> locs = model.location_terms();
    for (auto& t : locs) t.op *= c;
    return SystemBathModel(model.spec(), model.schedule(), model.h_bath(), model.mode(), std::move(pairs),
                           std::move(locs));
}

}  // namespace faultpath
