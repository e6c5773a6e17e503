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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

using namespace faultpath;
using nlohmann::json;

namespace {

json base_doc(int n, int bath_dim = 1) {
    return {{"n_qubits", n},        {"bath_dim", bath_dim}, {"t0", 1.0},
            {"mode", "long_range"}, {"steps", {json::array()}}, {"bath_hamiltonian", {{"seed", 3}}},
            {"pair_terms", json::array()}};
}

json xx_term(int i, int j, double strength) {
    return {{"i", i}, {"j", j}, {"preset", {{"name", "xx"}, {"strength", strength}}}};
}

std::string error_path(const json& doc) {
    try {
        load_model(doc);
    } catch (const ModelError& e) {
        return e.path();
    }
    return "<no error>";
}

}  // namespace

TEST(Eta, single_pair) {
    json doc = base_doc(2);
    doc["pair_terms"].push_back(xx_term(0, 1, 0.3));
    EXPECT_NEAR(eta(load_model(doc)), 0.3, 1e-15);
}

TEST(Eta, no_pair_terms_is_zero) { EXPECT_EQ(eta(load_model(base_doc(3))), 0.0); }

TEST(Eta, inverse_square_chain_peaks_at_center) {
    const double delta = 0.01;
    json doc = base_doc(5);
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) doc["pair_terms"].push_back(xx_term(i, j, delta / ((j - i) * (j - i))));
    const SystemBathModel model = load_model(doc);
    // Direct summation oracle over every ordered pair.
    double best = 0;
    int argbest = -1;
    for (int i = 0; i < 5; ++i) {
        double row = 0;
        for (int j = 0; j < 5; ++j)
            if (j != i) row += delta / double((i - j) * (i - j));
        if (row > best) best = row, argbest = i;
    }
    EXPECT_EQ(argbest, 2);
    EXPECT_NEAR(best, 0.025, 1e-15);
    EXPECT_NEAR(eta(model), best, 1e-15);
}

TEST(Eta, per_step_scaling_and_t0) {
    json doc = base_doc(2);
    doc["t0"] = 2.0;
    doc["steps"] = {json::array(), json::array(), json::array()};
    json t = xx_term(0, 1, 0.1);
    t["step_scale"] = {1.0, -3.0, 0.5};
    doc["pair_terms"].push_back(t);
    const SystemBathModel model = load_model(doc);
    EXPECT_NEAR(qubit_coupling_sum(model, 0, 1), 0.6, 1e-15);
    EXPECT_NEAR(eta(model), 0.6, 1e-15);
}

TEST(Eta, mode_mismatch) {
    json doc = base_doc(1);
    doc["mode"] = "short_range";
    EXPECT_THROW(eta(load_model(doc)), ModelError);
    EXPECT_THROW(epsilon_short(load_model(base_doc(1))), ModelError);
}

TEST(Eta, monotone_and_homogeneous) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomModelOptions o;
        o.n_qubits = 4;
        o.bath_dim = 1;
        o.seed = seed;
        o.strength = 0.07;
        const SystemBathModel model = random_long_range_model(o);
        EXPECT_NEAR(eta(model), 0.07, 1e-14);
        for (double c : {0.0, 0.25, 1.0, 3.0}) EXPECT_NEAR(eta(scaled_noise(model, c)), c * eta(model), 1e-14);
        // Removing any single term never increases eta.
        for (std::size_t drop = 0; drop < model.pair_terms().size(); ++drop) {
            auto terms = model.pair_terms();
            terms.erase(terms.begin() + drop);
            SystemBathModel smaller(model.spec(), model.schedule(), model.h_bath(), model.mode(), terms);
            EXPECT_LE(eta(smaller), eta(model));
        }
    }
}

TEST(Eta, star_model_is_exact_row_sum) {
    json doc = base_doc(5);
    const double norms[] = {0.01, 0.02, 0.005, 0.03};
    for (int j = 1; j < 5; ++j) doc["pair_terms"].push_back(xx_term(0, j, norms[j - 1]));
    EXPECT_NEAR(eta(load_model(doc)), 0.065, 1e-15);
}

TEST(EpsilonShort, single_location) {
    json doc = base_doc(1);
    doc["mode"] = "short_range";
    doc["location_terms"] = {{{"step", 0}, {"support", {0}}, {"preset", {{"name", "z"}, {"strength", 0.2}}}}};
    EXPECT_NEAR(epsilon_short(load_model(doc)), 0.2, 1e-15);
}

TEST(EpsilonShort, zero_terms) {
    json doc = base_doc(2);
    doc["mode"] = "short_range";
    doc["location_terms"] = {{{"step", 0}, {"support", {1}}, {"preset", {{"name", "x"}, {"strength", 0.0}}}}};
    EXPECT_EQ(epsilon_short(load_model(doc)), 0.0);
}

TEST(EpsilonShort, max_over_individual_locations) {
    RandomModelOptions o;
    o.n_qubits = 3;
    o.n_steps = 2;
    o.two_qubit_gate_probability = 0;
    o.strength = 0.04;
    o.seed = 17;
    const SystemBathModel raw = random_short_range_model(o);
    // Reweight locations unevenly so the maximum is unique.
    std::vector<LocationTerm> terms = raw.location_terms();
    ASSERT_EQ(terms.size(), 6U);
    for (std::size_t k = 0; k < terms.size(); ++k) terms[k].op *= 0.1 * double(k + 1);
    const SystemBathModel model(raw.spec(), raw.schedule(), raw.h_bath(), NoiseMode::short_range, {}, terms);
    double expected = 0;
    for (const auto& t : terms) {
        Eigen::JacobiSVD<Operator> svd(t.op);
        expected = std::max(expected, svd.singularValues()(0) * model.t0());
    }
    EXPECT_NEAR(epsilon_short(model), expected, 1e-15);
}

TEST(LoadModel, minimal_noiseless_document) {
    json doc = {{"n_qubits", 1}, {"bath_dim", 1}, {"steps", {json::array()}}, {"mode", "long_range"}};
    const SystemBathModel model = load_model(doc);
    EXPECT_EQ(model.n_qubits(), 1);
    EXPECT_EQ(model.t0(), 1.0);
    ASSERT_EQ(model.locations().size(), 1U);
    EXPECT_EQ(model.schedule().steps[0][0].kind, "identity");
    EXPECT_EQ(eta(model), 0.0);
}

TEST(LoadModel, idle_qubits_become_identity_locations) {
    json doc = base_doc(4);
    doc["steps"] = {{{{"kind", "cnot"}, {"support", {2, 0}}}}};
    const SystemBathModel model = load_model(doc);
    const auto locs = model.locations_at(0);
    ASSERT_EQ(locs.size(), 3U);
    EXPECT_EQ(locs[0].support, (std::vector<int>{0, 2}));
    EXPECT_EQ(locs[1].support, (std::vector<int>{1}));
    EXPECT_EQ(locs[2].support, (std::vector<int>{3}));
    EXPECT_TRUE(model.has_location({0, {0, 2}}));
    EXPECT_FALSE(model.has_location({0, {0, 1}}));
}

TEST(LoadModel, overlapping_supports_rejected) {
    json doc = base_doc(3);
    doc["steps"] = {{{{"kind", "cz"}, {"support", {0, 1}}}, {{"kind", "x"}, {"support", {1}}}}};
    EXPECT_EQ(error_path(doc), "/steps/0/1/support");
}

TEST(LoadModel, pair_registration) {
    json doc = base_doc(3);
    doc["pair_terms"] = {xx_term(0, 2, 0.1), xx_term(2, 0, 0.1)};
    EXPECT_EQ(load_model(doc).pair_terms().size(), 1U);

    doc["pair_terms"] = {xx_term(0, 2, 0.1), xx_term(2, 0, 0.2)};
    EXPECT_EQ(error_path(doc), "/pair_terms/1");
    try {
        load_model(doc);
    } catch (const ModelError& e) {
        EXPECT_NE(std::string(e.what()).find("asymmetric"), std::string::npos);
    }

    doc["pair_terms"] = {xx_term(0, 2, 0.1), xx_term(0, 2, 0.1)};
    EXPECT_EQ(error_path(doc), "/pair_terms/1");
    doc["pair_terms"] = {xx_term(1, 1, 0.1)};
    EXPECT_EQ(error_path(doc), "/pair_terms/0");
}

TEST(LoadModel, reversed_pair_is_canonicalized) {
    std::mt19937_64 rng(12);
    Operator a = random_hermitian(2, rng), b = random_hermitian(2, rng), c = random_hermitian(2, rng);
    PairTerm t{1, 0, kron(kron(a, b), c), {}};
    SystemBathModel model({2, 2}, GateSchedule{1.0, {{}}}, Operator::Zero(2, 2), NoiseMode::long_range, {t});
    ASSERT_EQ(model.pair_terms().size(), 1U);
    EXPECT_EQ(model.pair_terms()[0].i, 0);
    EXPECT_TRUE(model.pair_terms()[0].op.isApprox(kron(kron(b, a), c), 1e-14));
    // Same full-space operator either way.
    EXPECT_TRUE(model.pair_coupling(0, 0).isApprox(embed(t.op, {1, 0, 2}, model.spec()), 1e-14));
}

TEST(LoadModel, mode_exclusivity) {
    json doc = base_doc(2);
    doc["pair_terms"].push_back(xx_term(0, 1, 0.1));
    doc["mode"] = "short_range";
    EXPECT_EQ(error_path(doc), "/pair_terms");
    json lr = base_doc(1);
    lr["location_terms"] = {{{"step", 0}, {"support", {0}}, {"preset", {{"name", "z"}, {"strength", 0.2}}}}};
    EXPECT_EQ(error_path(lr), "/location_terms");
}

TEST(LoadModel, schema_errors_carry_paths) {
    json doc = base_doc(2);
    doc.erase("n_qubits");
    EXPECT_EQ(error_path(doc), "/n_qubits");
    doc = base_doc(2);
    doc["mode"] = "markovian";
    EXPECT_EQ(error_path(doc), "/mode");
    doc = base_doc(1);
    doc["bath_hamiltonian"] = {{1.0, 0.0, 2.0}};
    EXPECT_EQ(error_path(doc), "/bath_hamiltonian/0");
    doc = base_doc(2);
    doc["pair_terms"] = {{{"i", 0}, {"j", 1}, {"matrix", {{1, 0}, {0, 0}}}}};
    EXPECT_EQ(error_path(doc), "/pair_terms/0/matrix");
    doc = base_doc(2);
    doc["steps"] = {{{{"kind", "rx"}, {"support", {0}}}}};
    EXPECT_EQ(error_path(doc), "/steps/0/0/params");
    doc = base_doc(2);
    doc["steps"] = {{{{"kind", "warp"}, {"support", {0}}}}};
    EXPECT_EQ(error_path(doc), "/steps/0/0/kind");
    doc = base_doc(2);
    doc["steps"] = {{{{"kind", "x"}, {"support", {5}}}}};
    EXPECT_EQ(error_path(doc), "/steps/0/0/support");
    doc = base_doc(1, 2);
    doc["bath_hamiltonian"] = {{0, 0}, {0, 1}, {0, 0}, {0, 0}};  // not Hermitian
    EXPECT_EQ(error_path(doc), "/bath_hamiltonian");
}

TEST(LoadModel, nested_and_flat_matrices_agree) {
    json flat = base_doc(1, 2);
    flat["bath_hamiltonian"] = {{1, 0}, {0, -0.5}, {0, 0.5}, {2, 0}};
    json nested = base_doc(1, 2);
    nested["bath_hamiltonian"] = {{{1, 0}, {0, -0.5}}, {{0, 0.5}, {2, 0}}};
    EXPECT_EQ(load_model(flat).h_bath(), load_model(nested).h_bath());
}

TEST(SaveModel, round_trip_is_exact) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        RandomModelOptions o;
        o.n_qubits = 2 + int(seed % 3);
        o.bath_dim = 1 + int(seed % 2);
        o.n_steps = 1 + int(seed % 3);
        o.seed = seed;
        o.strength = 0.01 + 0.001 * double(seed);
        const SystemBathModel lr = random_long_range_model(o);
        EXPECT_EQ(load_model(save_model(lr)), lr);
        EXPECT_EQ(load_model(json::parse(save_model(lr).dump())), lr);
        const SystemBathModel sr = random_short_range_model(o);
        EXPECT_EQ(load_model(json::parse(save_model(sr).dump())), sr);
    }
    json doc = base_doc(2);
    doc["steps"] = {json::array(), json::array()};
    json t = xx_term(0, 1, 0.1);
    t["step_scale"] = {0.5, 1.0 / 3.0};
    doc["pair_terms"].push_back(t);
    const SystemBathModel m = load_model(doc);
    EXPECT_EQ(load_model(json::parse(save_model(m).dump())), m);
}

TEST(GateGenerator, reproduces_ideal_gates) {
    const double t0 = 0.7;
    auto unitary = [&](const Gate& g) { return expm(gate_generator(g, t0), t0); };
    EXPECT_TRUE(unitary({"x", {0}, {}}).isApprox(pauli::X(), 1e-13));
    EXPECT_TRUE(unitary({"z", {0}, {}}).isApprox(pauli::Z(), 1e-13));
    EXPECT_TRUE(unitary({"h", {0}, {}}).isApprox(Operator((pauli::X() + pauli::Z()) / std::numbers::sqrt2), 1e-13));
    Operator s = Operator::Identity(2, 2);
    s(1, 1) = Complex(0, 1);
    EXPECT_TRUE(unitary({"s", {0}, {}}).isApprox(s, 1e-13));
    const double th = 0.4;
    Operator rx = std::cos(th / 2) * pauli::I() - Complex(0, std::sin(th / 2)) * pauli::X();
    EXPECT_TRUE(unitary({"rx", {0}, {th}}).isApprox(rx, 1e-13));
    Operator cnot = Operator::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
    EXPECT_TRUE(unitary({"cnot", {0, 1}, {}}).isApprox(cnot, 1e-13));
    Operator cz = Operator::Identity(4, 4);
    cz(3, 3) = -1;
    EXPECT_TRUE(unitary({"cz", {0, 1}, {}}).isApprox(cz, 1e-13));
    EXPECT_TRUE(unitary({"identity", {0, 1}, {}}).isApprox(Operator::Identity(4, 4)));
}

TEST(SystemBathModel, total_hamiltonian_is_sum_of_parts) {
    RandomModelOptions o;
    o.seed = 5;
    const SystemBathModel m = random_long_range_model(o);
    for (int s = 0; s < m.n_steps(); ++s) {
        Operator h = m.system_hamiltonian(s) + m.bath_hamiltonian();
        for (std::size_t k = 0; k < m.pair_terms().size(); ++k) h += m.pair_coupling(k, s);
        EXPECT_TRUE(m.total_hamiltonian(s).isApprox(h));
        EXPECT_LE(hermiticity_error(m.total_hamiltonian(s)), 1e-12);
    }
}
