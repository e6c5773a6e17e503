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

#include <stdexcept>
#include <string>

namespace faultpath {

// Malformed numerical input (non-finite entries, wrong shapes, bad indices).
class InputError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// A model document or model object violates the schema or an invariant.
// `path()` is a JSON-pointer style location of the offending field.
class ModelError : public std::runtime_error {
   public:
    ModelError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

   private:
    std::string path_;
};

// Requested work exceeds a hard guard (e.g. too many faults for 2^r evolutions).
class ResourceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// A quantity that is mathematically infinite (divergent lattice sum).
class DivergenceError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

}  // namespace faultpath
