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

#include "faultpath/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "faultpath/bounds.hpp"
#include "faultpath/decay.hpp"
#include "faultpath/fault_sum.hpp"
#include "faultpath/model.hpp"
#include "faultpath/threshold.hpp"
#include "parallel.hpp"

namespace faultpath::cli {

using nlohmann::json;

namespace {

class Logger {
   public:
    Logger(LogLevel level, std::ostream& err) : level_(level), err_(err) {}
    void info(const std::string& msg) const {
        if (level_ != LogLevel::quiet) err_ << "[info] " << msg << '\n';
    }
    void debug(const std::string& msg) const {
        if (level_ == LogLevel::debug) err_ << "[debug] " << msg << '\n';
    }

   private:
    LogLevel level_;
    std::ostream& err_;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file " + path);
    return out;
}

VerifyOptions verify_options(const RunConfig& c) {
    return VerifyOptions{c.m_initial, c.m_max, c.convergence_tol, c.workers};
}

struct Tally {
    std::size_t reports = 0;
    std::size_t violations = 0;
    double max_margin = 0;

    void add(const BoundReport& r) {
        ++reports;
        violations += r.violation;
        max_margin = std::max(max_margin, r.margin);
    }
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

int run_verify(const RunConfig& c, std::ostream& out, const Logger& log) {
    if (!c.model_path) throw ConfigError("verify-bounds requires --model");
    const SystemBathModel model = load_model_file(*c.model_path);
    std::vector<FaultSet> sets;
    if (c.faults)
        sets.push_back(parse_fault_set(model, *c.faults));
    else
        sets = enumerate_fault_sets(model, c.max_r);
    log.info("verifying " + std::to_string(sets.size()) + " fault set(s)");

    std::ofstream file = open_output(c.output_path);
    Tally tally;
    for (const FaultSet& fs : sets) {
        const BoundReport rep = verify_bound(model, fs, verify_options(c));
        file << to_json(rep).dump() << '\n';
        tally.add(rep);
        log.debug("r=" + std::to_string(rep.r) + " measured=" + fmt(rep.measured) + " bound=" + fmt(rep.bound));
    }
    out << "verify-bounds: " << tally.reports << " report(s), max margin " << fmt(tally.max_margin) << ", "
        << tally.violations << " violation(s)\n";
    return tally.violations ? kBoundViolation : kOk;
}

GadgetParams gadget_params(const RunConfig& c) {
    if (c.preset) {
        if (c.gadget_A || c.gadget_t || c.gadget_C) throw ConfigError("--preset excludes --A/--t/--C");
        return gadget_preset(*c.preset);
    }
    if (!c.gadget_A || !c.gadget_t) throw ConfigError("threshold requires --preset or both --A and --t");
    return GadgetParams{*c.gadget_A, *c.gadget_t, c.gadget_C.value_or(1.0)};
}

int run_threshold(const RunConfig& c, std::ostream& out, const Logger& log) {
    const GadgetParams p = gadget_params(c);
    p.validate();
    const double eps0 = epsilon_threshold(p);
    const double eps = c.epsilon.value_or(eps0 / 2);
    const RecursionTrace trace = recursion_trace(p, eps, c.levels, c.circuit_size);
    json doc;
    doc["trace"] = to_json(trace);
    doc["epsilon0"] = eps0;
    doc["eta_budget"] = eta_budget(eps0);
    doc["eta_budget_constant_free"] = eps0 * eps0;
    doc["eta_prime_constant"] = eta_prime_constant();
    if (c.target) {
        const OverheadEstimate o = overhead_for_target(p, eps, *c.target);
        doc["overhead"] = {{"target", *c.target},
                           {"reachable", o.reachable},
                           {"level", o.level},
                           {"final_epsilon", o.final_epsilon},
                           {"size_factor", o.size_factor}};
    }
    if (c.dim || c.z) {
        if (!c.dim || !c.z) throw ConfigError("a lattice needs both --dim and --z");
        LatticeSpec lat{*c.dim, *c.z, 1, std::nullopt, parse_metric(c.metric)};
        LatticeSumOptions lo;
        lo.max_sites = c.max_sites;
        try {
            doc["delta_budget"] = delta_budget(eps0, lat, c.t0, lo);
        } catch (const DivergenceError&) {
            doc["delta_budget"] = nullptr;
            doc["lattice_verdict"] = "divergent";
        }
    }
    std::ofstream file = open_output(c.output_path);
    file << doc.dump(2) << '\n';
    log.info("recursion evaluated over " + std::to_string(trace.levels.size()) + " level(s)");
    out << "threshold: eps0 " << fmt(eps0) << ", eta budget " << fmt(eta_budget(eps0)) << " (constant-free "
        << fmt(eps0 * eps0) << ")";
    if (trace.levels.size() > 1) out << ", eps^(" << trace.levels.back().first << ") " << fmt(trace.levels.back().second);
    out << '\n';
    return kOk;
}

int run_decay(const RunConfig& c, std::ostream& out, const Logger& log) {
    const Metric metric = parse_metric(c.metric);
    LatticeSumOptions lo;
    lo.max_sites = c.max_sites;
    std::ofstream file = open_output(c.output_path);
    file << csv_header() << '\n';
    if (c.scan) {
        const auto cells = divergence_scan(c.scan_dims, c.scan_exponents, metric, lo);
        std::ofstream growth = open_output(c.output_path + ".growth.csv");
        growth << "D,z,verdict,growth_law,growth_coefficient\n";
        std::size_t divergent = 0;
        for (const ScanCell& cell : cells) {
            file << csv_row(LatticeSpec{cell.D, cell.z, 1, std::nullopt, metric}, cell.sum) << '\n';
            char buf[160];
            std::snprintf(buf, sizeof buf, "%d,%.17g,%s,%s,%.17g", cell.D, cell.z, to_string(cell.sum.verdict),
                          cell.growth.law.c_str(), cell.growth.coefficient);
            growth << buf << '\n';
            divergent += cell.sum.divergent();
        }
        log.info("scanned " + std::to_string(cells.size()) + " cell(s)");
        out << "decay-sum: " << cells.size() << " cell(s), " << divergent << " divergent\n";
        return kOk;
    }
    if (!c.dim || !c.z) throw ConfigError("decay-sum requires --dim and --z (or --scan)");
    const LatticeSpec spec{*c.dim, *c.z, c.delta, c.radius, metric};
    const LatticeSum sum = lattice_sum(spec, lo);
    file << csv_row(spec, sum) << '\n';
    out << "decay-sum: " << to_string(sum.verdict);
    if (!sum.divergent()) out << ", value " << fmt(sum.value) << " +- " << fmt(sum.tail_halfwidth);
    out << '\n';
    return kOk;
}

int run_sweep(const RunConfig& c, std::ostream& out, const Logger& log) {
    const NoiseMode mode = c.mode == "short_range"  ? NoiseMode::short_range
                           : c.mode == "long_range" ? NoiseMode::long_range
                                                    : throw ConfigError("--mode must be short_range or long_range");
    struct Cell {
        double strength;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (double s : c.strength_grid)
        for (int k = 0; k < c.n_models; ++k) cells.push_back({s, c.seed + std::uint64_t(k)});
    log.info("sweeping " + std::to_string(cells.size()) + " cell(s)");

    std::vector<std::vector<BoundReport>> results(cells.size());
    VerifyOptions vo = verify_options(c);
    vo.workers = 1;
    detail::parallel_for(cells.size(), c.workers, [&](std::size_t k) {
        RandomModelOptions mo;
        mo.n_qubits = c.qubits;
        mo.bath_dim = c.bath_dim;
        mo.n_steps = c.steps;
        mo.strength = cells[k].strength;
        mo.seed = cells[k].seed;
        const SystemBathModel model =
            mode == NoiseMode::long_range ? random_long_range_model(mo) : random_short_range_model(mo);
        for (const FaultSet& fs : enumerate_fault_sets(model, c.max_r))
            results[k].push_back(verify_bound(model, fs, vo));
    });

    std::ofstream file = open_output(c.output_path);
    Tally tally;
    for (std::size_t k = 0; k < cells.size(); ++k)
        for (const BoundReport& rep : results[k]) {
            json line = to_json(rep);
            line["cell"] = {{"strength", cells[k].strength}, {"model_seed", cells[k].seed}, {"mode", c.mode}};
            file << line.dump() << '\n';
            tally.add(rep);
        }
    out << "sweep: " << cells.size() << " model(s), " << tally.reports << " report(s), max margin "
        << fmt(tally.max_margin) << ", " << tally.violations << " violation(s)\n";
    return tally.violations ? kBoundViolation : kOk;
}

int run_phase(const RunConfig& c, std::ostream& out, const Logger& log) {
    if (!c.model_path) throw ConfigError("phase-experiment requires --model");
    if (!c.faults) throw ConfigError("phase-experiment requires --faults");
    if (c.samples == 0) throw ConfigError("--samples must be >= 1");
    const SystemBathModel model = load_model_file(*c.model_path);
    const FaultSet fs = parse_fault_set(model, *c.faults);
    const MicroGrid grid{c.m_initial};
    const PhaseStatistics st = randomized_phase_norm(model, grid, fs, c.samples, c.seed);
    json doc = to_json(st);
    doc["m"] = grid.m;
    doc["seed"] = c.seed;
    json locs = json::array();
    for (const auto& loc : fs) locs.push_back({{"step", loc.step}, {"support", loc.support}});
    doc["locations"] = locs;
    std::ofstream file = open_output(c.output_path);
    file << doc.dump(2) << '\n';
    log.info("sampled " + std::to_string(c.samples) + " phase assignment(s) over " + std::to_string(st.n_branches) +
             " branch(es)");
    out << "phase-experiment: coherent " << fmt(st.coherent) << ", randomized mean " << fmt(st.mean) << " +- "
        << fmt(st.stddev) << '\n';
    return kOk;
}

std::pair<int, int> parse_delta_grid(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--delta-grid", "expected m0,mmax");
    try {
        std::size_t a = 0, b = 0;
        const int m0 = std::stoi(s.substr(0, comma), &a);
        const int mmax = std::stoi(s.substr(comma + 1), &b);
        if (a != comma || b != s.size() - comma - 1) throw std::invalid_argument("trailing");
        if (m0 < 1 || mmax < 2 * m0) throw std::invalid_argument("range");
        return {m0, mmax};
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("--delta-grid", "expected integers m0,mmax with mmax >= 2*m0 >= 2");
    }
}

}  // namespace

LogLevel log_level_from_env() {
    const char* v = std::getenv("FAULTPATH_LOG");
    if (!v) return LogLevel::info;
    const std::string s(v);
    if (s == "quiet") return LogLevel::quiet;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::info;
}

RunConfig parse_args(int argc, const char* const* argv) {
    RunConfig c;
    CLI::App app{"Fault-path oracle and bound calculator for long-range correlated noise", "faultpath"};
    app.require_subcommand(1);
    std::string delta_grid;

    auto common = [&](CLI::App* sub, bool needs_grid) {
        sub->add_option("--out", c.output_path, "Output file")->required();
        sub->add_option("--seed", c.seed, "Random seed");
        sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
        if (needs_grid) {
            sub->add_option("--delta-grid", delta_grid, "Micro-interval counts m0,mmax (delta = t0/m)");
            sub->add_option("--convergence-tol", c.convergence_tol, "Stop halving delta below this change");
        }
    };

    CLI::App* verify = app.add_subcommand("verify-bounds", "Compare exact E(I_r) norms against analytic bounds");
    common(verify, true);
    verify->add_option("--model", c.model_path, "Model JSON file");
    verify->add_option("--faults", c.faults, "Fault set, e.g. \"0:0;1:1,2\"");
    verify->add_option("--max-r", c.max_r, "Largest fault count when enumerating fault sets")->check(CLI::Range(1, kMaxFaults));

    CLI::App* thr = app.add_subcommand("threshold", "Concatenation recursion and noise budgets");
    common(thr, false);
    thr->add_option("--preset", c.preset, "Gadget parameter preset (paper-magnitude)");
    thr->add_option("--A", c.gadget_A, "Macro-locations per 1-gadget");
    thr->add_option("--t", c.gadget_t, "Correctable errors");
    thr->add_option("--C", c.gadget_C, "Combinatorial constant");
    thr->add_option("--epsilon", c.epsilon, "Base noise strength (default eps0/2)");
    thr->add_option("--levels", c.levels, "Concatenation levels to trace")->check(CLI::Range(0, 64));
    thr->add_option("--L", c.circuit_size, "Ideal circuit size (informational)");
    thr->add_option("--target", c.target, "Target accuracy for the overhead estimate");
    thr->add_option("--dim", c.dim, "Lattice dimension for the delta budget");
    thr->add_option("--z", c.z, "Decay exponent for the delta budget");
    thr->add_option("--t0", c.t0, "Gate time");
    thr->add_option("--metric", c.metric, "euclidean or chebyshev");
    thr->add_option("--max-sites", c.max_sites, "Site cap for lattice sums");

    CLI::App* decay = app.add_subcommand("decay-sum", "Lattice interaction sums and divergence scan");
    common(decay, false);
    decay->add_option("--dim", c.dim, "Lattice dimension (1-3)");
    decay->add_option("--z", c.z, "Decay exponent");
    decay->add_option("--delta", c.delta, "Coupling amplitude");
    decay->add_option("--radius", c.radius, "Truncation radius (omit for the infinite lattice)");
    decay->add_option("--metric", c.metric, "euclidean or chebyshev");
    decay->add_flag("--scan", c.scan, "Scan a (D, z) grid instead of one sum");
    decay->add_option("--dims", c.scan_dims, "Scan dimensions")->delimiter(',');
    decay->add_option("--zs", c.scan_exponents, "Scan exponents")->delimiter(',');
    decay->add_option("--max-sites", c.max_sites, "Site cap for direct summation");

    CLI::App* sweep = app.add_subcommand("sweep", "Bound verification over seeded random models");
    common(sweep, true);
    sweep->add_option("--models", c.n_models, "Models per strength value")->check(CLI::PositiveNumber);
    sweep->add_option("--qubits", c.qubits, "Qubits per model")->check(CLI::Range(1, 8));
    sweep->add_option("--bath-dim", c.bath_dim, "Bath dimension")->check(CLI::Range(1, 16));
    sweep->add_option("--steps", c.steps, "Time steps per model")->check(CLI::Range(1, 16));
    sweep->add_option("--strength-grid", c.strength_grid, "Target eta (or epsilon) values")->delimiter(',');
    sweep->add_option("--max-r", c.max_r, "Largest fault count")->check(CLI::Range(1, kMaxFaults));
    sweep->add_option("--mode", c.mode, "long_range or short_range");

    CLI::App* phase = app.add_subcommand("phase-experiment", "Randomized-phase norm of the fault-path branches");
    common(phase, true);
    phase->add_option("--model", c.model_path, "Model JSON file");
    phase->add_option("--faults", c.faults, "Fault set");
    phase->add_option("--samples", c.samples, "Number of phase samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        throw HelpRequested(subs.empty() ? app.help() : subs.front()->help());
    }
    c.command = app.get_subcommands().front()->get_name();
    if (!delta_grid.empty()) std::tie(c.m_initial, c.m_max) = parse_delta_grid(delta_grid);
    return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Logger log(log_level_from_env(), err);
    try {
        if (c.command == "verify-bounds") return run_verify(c, out, log);
        if (c.command == "threshold") return run_threshold(c, out, log);
        if (c.command == "decay-sum") return run_decay(c, out, log);
        if (c.command == "sweep") return run_sweep(c, out, log);
        if (c.command == "phase-experiment") return run_phase(c, out, log);
        throw ConfigError("unknown command '" + c.command + "'");
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ModelError& e) {
        err << "model error at " << (e.path().empty() ? "/" : e.path()) << ": " << e.what() << '\n';
        return kModelError;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kResourceError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_args(argc, argv);
    } catch (const HelpRequested& e) {
        out << e.what();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return run(config, out, err);
}

}  // namespace faultpath::cli
