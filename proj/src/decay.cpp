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

#include "faultpath/decay.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "faultpath/error.hpp"

namespace faultpath {

namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0;
    double carry = 0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct Annulus {
    double sum = 0;
    std::uint64_t count = 0;
};

// Sum of |j|^{-z} over lattice vectors with r_in < |j| <= r_out, visiting
// the nonnegative orthant once and weighting by the sign multiplicity.
Annulus annulus(int D, double z, Metric metric, std::int64_t r_in, std::int64_t r_out) {
    CompensatedSum acc;
    std::uint64_t count = 0;
    const double half_z = z / 2;
    std::array<std::int64_t, 3> x{0, 0, 0};
    const std::int64_t in2 = r_in * r_in, out2 = r_out * r_out;
    while (true) {
        int nonzero = 0;
        std::int64_t n2 = 0, cheb = 0;
        for (int d = 0; d < D; ++d) {
            nonzero += x[d] != 0;
            n2 += x[d] * x[d];
            cheb = std::max(cheb, x[d]);
        }
        const std::uint64_t mult = std::uint64_t{1} << nonzero;
        if (metric == Metric::euclidean) {
            if (n2 > in2 && n2 <= out2) {
                acc.add(double(mult) * std::pow(double(n2), -half_z));
                count += mult;
            }
        } else if (cheb > r_in && cheb <= r_out) {
            acc.add(double(mult) * std::pow(double(cheb), -z));
            count += mult;
        }
        int d = D - 1;
        while (d >= 0 && x[d] == r_out) x[d--] = 0;
        if (d < 0) break;
        ++x[d];
    }
    return {acc.value(), count};
}

std::uint64_t cube_sites(int D, std::int64_t radius) {
    double side = 2.0 * double(radius) + 1.0;
    return std::uint64_t(std::pow(side, D));
}

double unit_sphere_area(int D) {
    switch (D) {
        case 1:
            return 2;
        case 2:
            return 2 * kPi;
        default:
            return 4 * kPi;
    }
}

}  // namespace

const char* to_string(Metric metric) { return metric == Metric::euclidean ? "euclidean" : "chebyshev"; }

Metric parse_metric(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "chebyshev") return Metric::chebyshev;
    throw InputError("metric must be 'euclidean' or 'chebyshev'");
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::truncated:
            return "truncated";
        case Verdict::convergent:
            return "convergent";
        case Verdict::divergent:
            return "divergent";
    }
    return "unknown";
}

void validate(const LatticeSpec& spec) {
    if (spec.D < 1 || spec.D > 3) throw InputError("lattice dimension D must be 1, 2 or 3");
    if (!(spec.z > 0) || !std::isfinite(spec.z)) throw InputError("decay exponent z must be positive and finite");
    if (!(spec.delta >= 0) || !std::isfinite(spec.delta)) throw InputError("amplitude delta must be >= 0");
    if (spec.radius && *spec.radius < 1) throw InputError("truncation radius must be >= 1");
}

double partial_sum(int D, double z, std::int64_t radius, Metric metric) {
    validate(LatticeSpec{D, z, 1, radius, metric});
    return annulus(D, z, metric, 0, radius).sum;
}

TailInterval tail_interval(int D, double z, std::int64_t radius, Metric metric) {
    validate(LatticeSpec{D, z, 1, radius, metric});
    if (z <= D) throw DivergenceError("tail of a divergent lattice sum");
    const double R = double(radius);
    TailInterval out;
    if (metric == Metric::chebyshev || D == 1) {
        // Shell s holds (2s+1)^D - (2s-1)^D sites; bound each power of s in
        // the shell count by integrals over [R+1, inf) and [R, inf).
        std::array<double, 3> coeff{};
        if (D == 1) coeff = {2, 0, 0};
        if (D == 2) coeff = {0, 8, 0};
        if (D == 3) coeff = {2, 0, 24};
        for (int a = 0; a < 3; ++a) {
            if (coeff[a] == 0) continue;
            const double b = z - a;
            out.lower += coeff[a] * std::pow(R + 1, 1 - b) / (b - 1);
            out.upper += coeff[a] * std::pow(R, 1 - b) / (b - 1);
        }
        return out;
    }
    // Unit cubes around lattice points with |j| > R: each point's weight is
    // within a factor (1 +- sqrt(D)/(2R))^z of its cube integral, and the
    // cubes lie outside radius R - sqrt(D)/2 and cover radius R + sqrt(D)/2.
    const double h = std::sqrt(double(D)) / 2;
    const double area = unit_sphere_area(D);
    out.upper = std::pow(1 + h / R, z) * area * std::pow(R - h, D - z) / (z - D);
    out.lower = std::pow(1 - h / R, z) * area * std::pow(R + h, D - z) / (z - D);
    return out;
}

LatticeSum lattice_sum(const LatticeSpec& spec, const LatticeSumOptions& options) {
    validate(spec);
    LatticeSum out;
    if (spec.radius) {
        const Annulus a = annulus(spec.D, spec.z, spec.metric, 0, *spec.radius);
        out.verdict = Verdict::truncated;
        out.value = spec.delta * a.sum;
        out.radius_used = *spec.radius;
        out.sites = a.count;
        return out;
    }
    if (spec.z <= spec.D) {
        out.verdict = Verdict::divergent;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.verdict = Verdict::convergent;
    std::int64_t R = std::max<std::int64_t>(options.initial_radius, 1);
    Annulus direct = annulus(spec.D, spec.z, spec.metric, 0, R);
    double mid = 0, half = 0;
    while (true) {
        const TailInterval tail = tail_interval(spec.D, spec.z, R, spec.metric);
        mid = direct.sum + (tail.lower + tail.upper) / 2;
        half = (tail.upper - tail.lower) / 2;
        if (half < options.relative_tolerance * mid) break;
        if (cube_sites(spec.D, 2 * R) > options.max_sites) break;
        const Annulus shell = annulus(spec.D, spec.z, spec.metric, R, 2 * R);
        direct.sum += shell.sum;
        direct.count += shell.count;
        R *= 2;
    }
    out.value = spec.delta * mid;
    out.tail_halfwidth = spec.delta * half;
    out.radius_used = R;
    out.sites = direct.count;
    return out;
}

double eta_for_lattice(const LatticeSpec& spec, double t0, const LatticeSumOptions& options) {
    if (!(t0 > 0)) throw InputError("t0 must be positive");
    const LatticeSum s = lattice_sum(spec, options);
    if (s.divergent())
        throw DivergenceError("interaction sum diverges for z <= D (D = " + std::to_string(spec.D) +
                              ", z = " + std::to_string(spec.z) + ")");
    return s.value * t0;
}

GrowthFit fit_growth(int D, double z, Metric metric) {
    validate(LatticeSpec{D, z, 1, std::nullopt, metric});
    GrowthFit fit;
    if (z > D) return fit;
    constexpr std::uint64_t kFitSites = 4'000'000;
    double running = 0;
    std::int64_t prev = 0;
    for (std::int64_t R = 8; cube_sites(D, R) <= kFitSites; R *= 2) {
        running += annulus(D, z, metric, prev, R).sum;
        fit.partial_sums.emplace_back(R, running);
        prev = R;
    }
    // Least-squares slope of y against x.
    auto slope = [](const std::vector<double>& x, const std::vector<double>& y) {
        const double n = double(x.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            sx += x[k];
            sy += y[k];
            sxx += x[k] * x[k];
            sxy += x[k] * y[k];
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    std::vector<double> x, y;
    if (std::abs(z - D) < 1e-12) {
        fit.law = "log";
        for (const auto& [R, S] : fit.partial_sums) {
            x.push_back(std::log(double(R)));
            y.push_back(S);
        }
    } else {
        fit.law = "power";
        for (std::size_t k = 1; k < fit.partial_sums.size(); ++k) {
            x.push_back(std::log(double(fit.partial_sums[k - 1].first)));
            y.push_back(std::log(fit.partial_sums[k].second - fit.partial_sums[k - 1].second));
        }
    }
    fit.coefficient = slope(x, y);
    return fit;
}

std::vector<ScanCell> divergence_scan(const std::vector<int>& dims, const std::vector<double>& exponents,
                                      Metric metric, const LatticeSumOptions& options) {
    std::vector<ScanCell> cells;
    for (int D : dims)
        for (double z : exponents) {
            ScanCell cell;
            cell.D = D;
            cell.z = z;
            cell.sum = lattice_sum(LatticeSpec{D, z, 1, std::nullopt, metric}, options);
            if (cell.sum.divergent()) cell.growth = fit_growth(D, z, metric);
            cells.push_back(std::move(cell));
        }
    return cells;
}

std::string csv_header() { return "D,z,delta,R,metric,value,tail_halfwidth,verdict"; }

std::string csv_row(const LatticeSpec& spec, const LatticeSum& sum) {
    char buf[256];
    const std::string radius = spec.radius ? std::to_string(*spec.radius) : "inf";
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%s,%s,%.17g,%.17g,%s", spec.D, spec.z, spec.delta, radius.c_str(),
                  to_string(spec.metric), sum.value, sum.tail_halfwidth, to_string(sum.verdict));
    return buf;
}

}  // namespace faultpath
