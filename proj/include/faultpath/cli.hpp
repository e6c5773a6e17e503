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

// Command-line front end: verify-bounds, threshold, decay-sum, sweep and
// phase-experiment.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace faultpath::cli {

enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kConfigError = 2,
    kModelError = 3,
    kResourceError = 4,
    kBoundViolation = 5,
};

enum class LogLevel { quiet, info, debug };

// Reads FAULTPATH_LOG; unknown or unset values mean info.
LogLevel log_level_from_env();

struct RunConfig {
    std::string command;
    std::optional<std::string> model_path;
    std::string output_path;
    std::uint64_t seed = 0;
    int workers = 1;
    int m_initial = 64;
    int m_max = 1024;
    double convergence_tol = 1e-6;
    std::optional<std::string> faults;
    int max_r = 2;

    // threshold
    std::optional<std::string> preset;
    std::optional<std::int64_t> gadget_A, gadget_t;
    std::optional<double> gadget_C;
    std::optional<double> epsilon;
    int levels = 5;
    double circuit_size = 0;
    std::optional<double> target;
    double t0 = 1.0;

    // decay-sum (and the optional lattice of threshold)
    std::optional<int> dim;
    std::optional<double> z;
    double delta = 1.0;
    std::optional<std::int64_t> radius;
    std::string metric = "euclidean";
    bool scan = false;
    std::vector<int> scan_dims{1, 2, 3};
    std::vector<double> scan_exponents{0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
    std::uint64_t max_sites = 100'000'000;

    // sweep
    int n_models = 20;
    int qubits = 3;
    int bath_dim = 2;
    int steps = 2;
    std::vector<double> strength_grid{0.05};
    std::string mode = "long_range";

    // phase-experiment
    std::size_t samples = 10000;
};

struct HelpRequested : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Throws HelpRequested (text = help message) or CLI11 parse errors; see run(argc, argv, ...) for exit-code mapping.
RunConfig parse_args(int argc, const char* const* argv);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses, runs and maps every failure to its exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace faultpath::cli
