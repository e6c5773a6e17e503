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

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "faultpath/model.hpp"

namespace faultpath {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ModelError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ModelError(path + "/" + key, "required field missing");
    return *it;
}

long long as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ModelError(path, "expected an integer");
    return v.get<long long>();
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ModelError(path, "expected a number");
    return v.get<double>();
}

Complex as_complex(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) throw ModelError(path, "complex numbers are [re, im] arrays");
    return {as_number(v[0], path + "/0"), as_number(v[1], path + "/1")};
}

// Row-major complex matrix, either flat [[re,im], ...] or nested rows.
Operator parse_matrix(const json& v, std::size_t dim, const std::string& path) {
    if (!v.is_array()) throw ModelError(path, "expected a matrix array");
    Operator m(dim, dim);
    if (v.size() == dim * dim && (dim != 1 || (v[0].is_array() && v[0].size() == 2 && v[0][0].is_number()))) {
        for (std::size_t k = 0; k < dim * dim; ++k) m(k / dim, k % dim) = as_complex(v[k], path + "/" + std::to_string(k));
        return m;
    }
    if (v.size() != dim) throw ModelError(path, "expected " + std::to_string(dim * dim) + " entries (dim " +
                                                    std::to_string(dim) + ")");
    for (std::size_t r = 0; r < dim; ++r) {
        const json& row = v[r];
        const std::string rp = path + "/" + std::to_string(r);
        if (!row.is_array() || row.size() != dim) throw ModelError(rp, "row must have " + std::to_string(dim) + " entries");
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = as_complex(row[c], rp + "/" + std::to_string(c));
    }
    return m;
}

json dump_matrix(const Operator& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
    return out;
}

std::vector<int> parse_support(const json& v, const std::string& path) {
    if (!v.is_array()) throw ModelError(path, "support must be an array of qubit indices");
    std::vector<int> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(int(as_int(v[k], path + "/" + std::to_string(k))));
    return out;
}

Operator pauli_string(char which, std::size_t arity, int bath_dim) {
    Operator p = which == 'x' ? pauli::X() : which == 'y' ? pauli::Y() : pauli::Z();
    Operator out = Operator::Identity(1, 1);
    for (std::size_t k = 0; k < arity; ++k) out = kron(out, p);
    return kron(out, Operator::Identity(bath_dim, bath_dim));
}

// Presets are normalized so that the sup norm equals `strength`.
Operator parse_preset(const json& v, std::size_t arity, int bath_dim, const std::string& path) {
    const json& name_v = require(v, "name", path);
    if (!name_v.is_string()) throw ModelError(path + "/name", "expected a string");
    const std::string name = name_v.get<std::string>();
    const double strength = as_number(require(v, "strength", path), path + "/strength");
    if (strength < 0) throw ModelError(path + "/strength", "must be >= 0");
    const std::size_t dim = (std::size_t{1} << arity) * std::size_t(bath_dim);
    if (name == "random") {
        const auto seed = v.contains("seed") ? as_int(v["seed"], path + "/seed") : 0;
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
        return strength * random_hermitian(dim, rng);
    }
    if (name == "x" || name == "y" || name == "z" ||
        (arity == 2 && (name == "xx" || name == "yy" || name == "zz")))
        return strength * pauli_string(name[0], arity, bath_dim);
    throw ModelError(path + "/name", "unknown preset '" + name + "'");
}

Operator parse_term_operator(const json& rec, std::size_t arity, int bath_dim, const std::string& path) {
    const std::size_t dim = (std::size_t{1} << arity) * std::size_t(bath_dim);
    const bool has_matrix = rec.contains("matrix");
    const bool has_preset = rec.contains("preset");
    if (has_matrix == has_preset) throw ModelError(path, "exactly one of 'matrix' or 'preset' is required");
    if (has_matrix) return parse_matrix(rec["matrix"], dim, path + "/matrix");
    return parse_preset(rec["preset"], arity, bath_dim, path + "/preset");
}

}  // namespace

SystemBathModel load_model(const json& doc) {
    if (!doc.is_object()) throw ModelError("", "model document must be a JSON object");
    const long long n = as_int(require(doc, "n_qubits", ""), "/n_qubits");
    const long long db = as_int(require(doc, "bath_dim", ""), "/bath_dim");
    if (n < 1 || n > 12) throw ModelError("/n_qubits", "must be in [1, 12]");
    if (db < 1 || db > 64) throw ModelError("/bath_dim", "must be in [1, 64]");
    TensorFactorSpec spec{int(n), int(db)};

    GateSchedule sched;
    sched.t0 = doc.contains("t0") ? as_number(doc["t0"], "/t0") : 1.0;

    const json& mode_v = require(doc, "mode", "");
    if (!mode_v.is_string()) throw ModelError("/mode", "expected a string");
    NoiseMode mode;
    if (mode_v == "short_range")
        mode = NoiseMode::short_range;
    else if (mode_v == "long_range")
        mode = NoiseMode::long_range;
    else
        throw ModelError("/mode", "must be \"short_range\" or \"long_range\"");

    const json& steps = require(doc, "steps", "");
    if (!steps.is_array()) throw ModelError("/steps", "expected an array of steps");
    for (std::size_t s = 0; s < steps.size(); ++s) {
        const std::string sp = "/steps/" + std::to_string(s);
        if (!steps[s].is_array()) throw ModelError(sp, "a step is an array of gate records");
        std::vector<Gate> gates;
        for (std::size_t g = 0; g < steps[s].size(); ++g) {
            const json& rec = steps[s][g];
            const std::string gp = sp + "/" + std::to_string(g);
            Gate gate;
            const json& kind = require(rec, "kind", gp);
            if (!kind.is_string()) throw ModelError(gp + "/kind", "expected a string");
            gate.kind = kind.get<std::string>();
            gate.support = parse_support(require(rec, "support", gp), gp + "/support");
            if (rec.contains("params")) {
                const json& ps = rec["params"];
                if (!ps.is_array()) throw ModelError(gp + "/params", "expected an array");
                for (std::size_t k = 0; k < ps.size(); ++k)
                    gate.params.push_back(as_number(ps[k], gp + "/params/" + std::to_string(k)));
            }
            gates.push_back(std::move(gate));
        }
        sched.steps.push_back(std::move(gates));
    }

    Operator hb;
    if (!doc.contains("bath_hamiltonian")) {
        std::mt19937_64 rng(0);
        hb = random_hermitian(std::size_t(db), rng);
    } else {
        const json& b = doc["bath_hamiltonian"];
        if (b.is_object()) {
            const auto seed = as_int(require(b, "seed", "/bath_hamiltonian"), "/bath_hamiltonian/seed");
            const double scale = b.contains("scale") ? as_number(b["scale"], "/bath_hamiltonian/scale") : 1.0;
            std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
            hb = scale * random_hermitian(std::size_t(db), rng);
        } else {
            hb = parse_matrix(b, std::size_t(db), "/bath_hamiltonian");
        }
    }

    std::vector<PairTerm> pairs;
    if (doc.contains("pair_terms")) {
        const json& pt = doc["pair_terms"];
        if (!pt.is_array()) throw ModelError("/pair_terms", "expected an array");
        for (std::size_t k = 0; k < pt.size(); ++k) {
            const std::string p = "/pair_terms/" + std::to_string(k);
            PairTerm t;
            t.i = int(as_int(require(pt[k], "i", p), p + "/i"));
            t.j = int(as_int(require(pt[k], "j", p), p + "/j"));
            t.op = parse_term_operator(pt[k], 2, int(db), p);
            if (pt[k].contains("step_scale")) {
                const json& sc = pt[k]["step_scale"];
                if (!sc.is_array()) throw ModelError(p + "/step_scale", "expected an array");
                for (std::size_t s = 0; s < sc.size(); ++s)
                    t.step_scale.push_back(as_number(sc[s], p + "/step_scale/" + std::to_string(s)));
            }
            pairs.push_back(std::move(t));
        }
    }

    std::vector<LocationTerm> locs;
    if (doc.contains("location_terms")) {
        const json& lt = doc["location_terms"];
        if (!lt.is_array()) throw ModelError("/location_terms", "expected an array");
        for (std::size_t k = 0; k < lt.size(); ++k) {
            const std::string p = "/location_terms/" + std::to_string(k);
            LocationTerm t;
            t.step = int(as_int(require(lt[k], "step", p), p + "/step"));
            t.support = parse_support(require(lt[k], "support", p), p + "/support");
            if (t.support.empty() || t.support.size() > 2)
                throw ModelError(p + "/support", "support must have 1 or 2 qubits");
            t.op = parse_term_operator(lt[k], t.support.size(), int(db), p);
            locs.push_back(std::move(t));
        }
    }

    return SystemBathModel(spec, std::move(sched), std::move(hb), mode, std::move(pairs), std::move(locs));
}

SystemBathModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("", "cannot open model file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ModelError("", std::string("invalid JSON: ") + e.what());
    }
    return load_model(doc);
}

json save_model(const SystemBathModel& model) {
    json doc;
    doc["n_qubits"] = model.n_qubits();
    doc["bath_dim"] = model.spec().bath_dim;
    doc["t0"] = model.t0();
    doc["mode"] = to_string(model.mode());
    json steps = json::array();
    for (const auto& gates : model.schedule().steps) {
        json step = json::array();
        for (const Gate& g : gates) step.push_back({{"kind", g.kind}, {"support", g.support}, {"params", g.params}});
        steps.push_back(std::move(step));
    }
    doc["steps"] = std::move(steps);
    doc["bath_hamiltonian"] = dump_matrix(model.h_bath());
    json pairs = json::array();
    for (const PairTerm& t : model.pair_terms()) {
        json rec = {{"i", t.i}, {"j", t.j}, {"matrix", dump_matrix(t.op)}};
        if (!t.step_scale.empty()) rec["step_scale"] = t.step_scale;
        pairs.push_back(std::move(rec));
    }
    doc["pair_terms"] = std::move(pairs);
    if (!model.location_terms().empty()) {
        json locs = json::array();
        for (const LocationTerm& t : model.location_terms())
            locs.push_back({{"step", t.step}, {"support", t.support}, {"matrix", dump_matrix(t.op)}});
        doc["location_terms"] = std::move(locs);
    }
    return doc;
}

}  // namespace faultpath
