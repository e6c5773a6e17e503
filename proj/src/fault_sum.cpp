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

#include "faultpath/fault_sum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "faultpath/bounds.hpp"
#include "parallel.hpp"

namespace faultpath {

namespace {

void check_step(const SystemBathModel& model, int step) {
    if (step < 0 || step >= model.n_steps())
        throw InputError("step index " + std::to_string(step) + " out of range [0, " + std::to_string(model.n_steps()) +
                         ")");
}

void check_grid(const MicroGrid& grid) {
    if (grid.m < 1) throw InputError("micro-grid needs m >= 1");
}

void check_mask(const SystemBathModel& model, const NoiseMask& mask) {
    for (const auto& loc : mask.locations)
        if (!model.has_location(loc)) throw InputError("mask location " + to_string(loc) + " is not in the schedule");
}

Operator step_propagator(const SystemBathModel& model, int step, const MicroGrid& grid, const NoiseMask& mask) {
    return matrix_power(micro_step(model, step, grid, mask), std::size_t(grid.m));
}

}  // namespace

FaultSet make_fault_set(const SystemBathModel& model, std::vector<MacroLocation> locations) {
    for (auto& loc : locations) std::sort(loc.support.begin(), loc.support.end());
    std::sort(locations.begin(), locations.end());
    if (std::adjacent_find(locations.begin(), locations.end()) != locations.end())
        throw InputError("fault set contains a repeated location");
    for (const auto& loc : locations)
        if (!model.has_location(loc)) throw InputError("fault location " + to_string(loc) + " is not in the schedule");
    return locations;
}

FaultSet parse_fault_set(const SystemBathModel& model, const std::string& spec) {
    std::vector<MacroLocation> locs;
    std::stringstream entries(spec);
    std::string entry;
    while (std::getline(entries, entry, ';')) {
        entry.erase(std::remove_if(entry.begin(), entry.end(), [](unsigned char c) { return std::isspace(c); }),
                    entry.end());
        if (entry.empty()) continue;
        const auto colon = entry.find(':');
        if (colon == std::string::npos) throw InputError("fault entry '" + entry + "' must be step:qubit[,qubit]");
        MacroLocation loc;
        try {
            std::size_t used = 0;
            loc.step = std::stoi(entry.substr(0, colon), &used);
            if (used != colon) throw InputError("bad step");
            std::stringstream qubits(entry.substr(colon + 1));
            std::string q;
            while (std::getline(qubits, q, ',')) {
                loc.support.push_back(std::stoi(q, &used));
                if (used != q.size()) throw InputError("bad qubit");
            }
        } catch (const std::logic_error&) {
            throw InputError("fault entry '" + entry + "' must be step:qubit[,qubit]");
        }
        if (loc.support.empty() || loc.support.size() > 2)
            throw InputError("fault entry '" + entry + "' needs one or two qubits");
        locs.push_back(std::move(loc));
    }
    return make_fault_set(model, std::move(locs));
}

std::vector<FaultSet> enumerate_fault_sets(const SystemBathModel& model, int max_r) {
    const std::vector<MacroLocation> all = model.locations();
    std::vector<FaultSet> out;
    const int total = int(all.size());
    for (int r = 1; r <= std::min(max_r, total); ++r) {
        std::vector<int> idx(r);
        for (int k = 0; k < r; ++k) idx[k] = k;
        while (true) {
            FaultSet fs;
            for (int k : idx) fs.push_back(all[k]);
            out.push_back(std::move(fs));
            int k = r - 1;
            while (k >= 0 && idx[k] == total - r + k) --k;
            if (k < 0) break;
            ++idx[k];
            for (int l = k + 1; l < r; ++l) idx[l] = idx[l - 1] + 1;
        }
    }
    return out;
}

Operator micro_step(const SystemBathModel& model, int step, const MicroGrid& grid, const NoiseMask& mask) {
    check_step(model, step);
    check_grid(grid);
    const double delta = grid.delta(model.t0());
    const std::size_t dim = model.spec().total_dim();
    const Operator identity = Operator::Identity(dim, dim);

    Operator noise = identity;
    if (!mask.all) {
        if (model.mode() == NoiseMode::long_range) {
            std::vector<char> masked(model.n_qubits(), 0);
            for (const auto& loc : mask.locations)
                if (loc.step == step)
                    for (int q : loc.support) masked[q] = 1;
            const auto& terms = model.pair_terms();
            for (std::size_t k = 0; k < terms.size(); ++k) {
                if (masked[terms[k].i] || masked[terms[k].j]) continue;
                noise = noise * (identity - Complex(0, delta) * model.pair_coupling(k, step));
            }
        } else {
            const auto& terms = model.location_terms();
            for (std::size_t k = 0; k < terms.size(); ++k) {
                if (terms[k].step != step) continue;
                if (mask.locations.count(MacroLocation{terms[k].step, terms[k].support})) continue;
                noise = noise * (identity - Complex(0, delta) * model.location_coupling(k));
            }
        }
    }
    return expm(model.system_hamiltonian(step), delta) * expm(model.bath_hamiltonian(), delta) * noise;
}

Operator evolve_with_mask(const SystemBathModel& model, const MicroGrid& grid, const NoiseMask& mask, int step_begin,
                          int step_end) {
    check_grid(grid);
    check_mask(model, mask);
    if (step_end < 0) step_end = model.n_steps();
    if (step_begin < 0 || step_begin > step_end || step_end > model.n_steps())
        throw InputError("invalid step range");
    const std::size_t dim = model.spec().total_dim();
    Operator u = Operator::Identity(dim, dim);
    for (int s = step_begin; s < step_end; ++s) u = step_propagator(model, s, grid, mask) * u;
    return u;
}

std::vector<Operator> fault_branches(const SystemBathModel& model, const MicroGrid& grid, const FaultSet& faults,
                                     const FaultSumOptions& options) {
    check_grid(grid);
    const int r = int(faults.size());
    if (r > kMaxFaults)
        throw ResourceError("fault set of size " + std::to_string(r) + " exceeds the 2^r guard (r <= " +
                            std::to_string(kMaxFaults) + ")");
    const FaultSet checked = make_fault_set(model, faults);
    if (checked != faults) throw InputError("fault set must be sorted and distinct");

    // Per-step propagators for every restriction of the mask to that step.
    const int n_steps = model.n_steps();
    std::vector<std::vector<int>> at_step(n_steps);
    for (int f = 0; f < r; ++f) at_step[faults[f].step].push_back(f);
    struct Job {
        int step;
        unsigned local;
    };
    std::vector<Job> jobs;
    std::vector<std::vector<Operator>> cache(n_steps);
    for (int s = 0; s < n_steps; ++s) {
        cache[s].resize(std::size_t{1} << at_step[s].size());
        for (unsigned sub = 0; sub < cache[s].size(); ++sub) jobs.push_back({s, sub});
    }
    detail::parallel_for(jobs.size(), options.workers, [&](std::size_t k) {
        const Job& job = jobs[k];
        NoiseMask mask;
        for (std::size_t b = 0; b < at_step[job.step].size(); ++b)
            if (job.local & (1U << b)) mask.locations.insert(faults[at_step[job.step][b]]);
        cache[job.step][job.local] = step_propagator(model, job.step, grid, mask);
    });

    const std::size_t n_branches = std::size_t{1} << r;
    std::vector<Operator> branches(n_branches);
    detail::parallel_for(n_branches, options.workers, [&](std::size_t subset) {
        const std::size_t dim = model.spec().total_dim();
        Operator u = Operator::Identity(dim, dim);
        for (int s = 0; s < n_steps; ++s) {
            unsigned local = 0;
            for (std::size_t b = 0; b < at_step[s].size(); ++b)
                if (subset & (std::size_t{1} << at_step[s][b])) local |= 1U << b;
            u = cache[s][local] * u;
        }
        if (std::popcount(subset) % 2) u = -u;
        branches[subset] = std::move(u);
    });
    return branches;
}

Operator fault_sum(const SystemBathModel& model, const MicroGrid& grid, const FaultSet& faults,
                   const FaultSumOptions& options) {
    std::vector<Operator> branches = fault_branches(model, grid, faults, options);
    Operator total = branches[0];
    for (std::size_t k = 1; k < branches.size(); ++k) total += branches[k];
    return total;
}

const char* to_string(Regime regime) {
    switch (regime) {
        case Regime::short_range:
            return "short_range";
        case Regime::long_range_distinct_times:
            return "long_range_distinct_times";
        case Regime::long_range_same_step:
            return "long_range_same_step";
    }
    return "unknown";
}

double analytic_bound(const SystemBathModel& model, const FaultSet& faults, Regime* regime) {
    const int r = int(faults.size());
    if (model.mode() == NoiseMode::short_range) {
        if (regime) *regime = Regime::short_range;
        return std::pow(epsilon_short(model), r);
    }
    const double e = eta(model);
    std::map<int, std::vector<const MacroLocation*>> groups;
    for (const auto& loc : faults) groups[loc.step].push_back(&loc);
    bool same_step = false;
    double bound = 1;
    for (const auto& [step, locs] : groups) {
        const bool any_pair = std::any_of(locs.begin(), locs.end(), [](const MacroLocation* l) { return l->two_qubit(); });
        if (locs.size() == 1) {
            bound *= any_pair ? 2 * e : e;
        } else {
            same_step = true;
            bound *= e_ir_same_step_bound(int(locs.size()), any_pair ? 2 * e : e).bound;
        }
    }
    if (regime) *regime = same_step ? Regime::long_range_same_step : Regime::long_range_distinct_times;
    return bound;
}

BoundReport verify_bound(const SystemBathModel& model, const FaultSet& faults, const VerifyOptions& options) {
    if (faults.empty()) throw InputError("verify_bound needs at least one faulty location");
    if (options.m_initial < 1 || options.m_max < 2 * options.m_initial)
        throw InputError("delta grid needs m_initial >= 1 and m_max >= 2 * m_initial");

    BoundReport rep;
    rep.r = int(faults.size());
    rep.locations = faults;
    rep.bound = analytic_bound(model, faults, &rep.regime);

    const FaultSumOptions fs_opts{options.workers};
    int m = options.m_initial;
    double previous = sup_norm(fault_sum(model, MicroGrid{m}, faults, fs_opts));
    double current = previous;
    while (2 * m <= options.m_max) {
        m *= 2;
        previous = current;
        current = sup_norm(fault_sum(model, MicroGrid{m}, faults, fs_opts));
        if (std::abs(current - previous) < options.convergence_tol) break;
    }
    rep.m = m;
    rep.delta = MicroGrid{m}.delta(model.t0());
    rep.measured_raw = current;
    rep.delta_halved_change = std::abs(current - previous);
    // First-order Richardson step: the O(delta) term cancels.
    rep.measured = std::max(0.0, 2 * current - previous);

    if (model.mode() == NoiseMode::short_range) {
        rep.strength = epsilon_short(model);
    } else {
        rep.strength = eta(model);
        const bool any_pair =
            std::any_of(faults.begin(), faults.end(), [](const MacroLocation& l) { return l.two_qubit(); });
        const double eff = any_pair ? 2 * rep.strength : rep.strength;
        rep.eta_prime = eta_prime(eff);
        rep.same_step_bound = std::pow(rep.eta_prime, rep.r);
        rep.eta_bound = 1;
        for (const auto& loc : faults) rep.eta_bound *= loc.two_qubit() ? 2 * rep.strength : rep.strength;
    }

    if (rep.bound > 0)
        rep.margin = rep.measured / rep.bound;
    else
        rep.margin = rep.measured > 0 ? std::numeric_limits<double>::max() : 0.0;
    rep.violation = rep.measured > rep.bound + 1e-12;
    return rep;
}

nlohmann::json to_json(const BoundReport& rep) {
    nlohmann::json locs = nlohmann::json::array();
    for (const auto& loc : rep.locations) locs.push_back({{"step", loc.step}, {"support", loc.support}});
    nlohmann::json params = {{"strength", rep.strength}, {"r", rep.r}, {"delta", rep.delta}, {"m", rep.m}};
    if (rep.regime != Regime::short_range) {
        params["eta"] = rep.strength;
        params["eta_prime"] = rep.eta_prime;
        params["eta_bound"] = rep.eta_bound;
        params["same_step_bound"] = rep.same_step_bound;
    } else {
        params["epsilon"] = rep.strength;
    }
    return {{"regime", to_string(rep.regime)},
            {"r", rep.r},
            {"measured", rep.measured},
            {"measured_raw", rep.measured_raw},
            {"bound", rep.bound},
            {"margin", rep.margin},
            {"violation", rep.violation},
            {"delta", rep.delta},
            {"delta_halved_change", rep.delta_halved_change},
            {"locations", locs},
            {"parameters", params}};
}

PhaseStatistics randomized_phase_norm(std::span<const Operator> branches, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) throw InputError("randomized_phase_norm needs n_samples >= 1");
    if (branches.empty()) throw InputError("randomized_phase_norm needs at least one branch");
    PhaseStatistics st;
    st.n_samples = n_samples;
    st.n_branches = branches.size();

    Operator coherent = branches[0];
    for (std::size_t b = 1; b < branches.size(); ++b) coherent += branches[b];
    st.coherent = sup_norm(coherent);

    std::mt19937_64 rng(seed);
    std::vector<double> values;
    values.reserve(n_samples);
    st.min = std::numeric_limits<double>::infinity();
    st.max = 0;
    Operator acc(branches[0].rows(), branches[0].cols());
    for (std::size_t s = 0; s < n_samples; ++s) {
        acc.setZero();
        for (const Operator& b : branches) {
            const double u = double(rng() >> 11) * 0x1.0p-53;
            acc += std::polar(1.0, 2 * std::numbers::pi * u) * b;
        }
        const double v = sup_norm(acc);
        values.push_back(v);
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
    }
    double sum = 0;
    for (double v : values) sum += v;
    st.mean = sum / double(n_samples);
    if (n_samples > 1) {
        double ss = 0;
        for (double v : values) ss += (v - st.mean) * (v - st.mean);
        st.stddev = std::sqrt(ss / double(n_samples - 1));
    }
    return st;
}

PhaseStatistics randomized_phase_norm(const SystemBathModel& model, const MicroGrid& grid, const FaultSet& faults,
                                      std::size_t n_samples, std::uint64_t seed) {
    const std::vector<Operator> branches = fault_branches(model, grid, faults);
    return randomized_phase_norm(std::span<const Operator>(branches), n_samples, seed);
}

nlohmann::json to_json(const PhaseStatistics& st) {
    return {{"n_samples", st.n_samples}, {"n_branches", st.n_branches}, {"mean", st.mean}, {"stddev", st.stddev},
            {"min", st.min},             {"max", st.max},               {"coherent", st.coherent}};
}

}  // namespace faultpath
