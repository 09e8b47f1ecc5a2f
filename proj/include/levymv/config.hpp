#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levymv/conditions.hpp"
#include "levymv/drift.hpp"
#include "levymv/fixed_point.hpp"
#include "levymv/levy.hpp"
#include "levymv/simulate.hpp"

namespace lmv {

// Initial measure built around each seed center.
struct InitSpec {
    std::string kind = "dirac";  // "dirac" or "gaussian"
    double std = 0.0;            // gaussian: per-coordinate standard deviation
    int atoms = 0;               // gaussian: atom count (0 selects sim.n_chains)
};

struct ConditionsBlock {
    double beta = 0.0;  // <= 0 selects (1 + alpha) / 2
    std::optional<double> eps;
    std::optional<double> r0;
    double M_star = 0.0;          // > 0 overrides the A1 bound in multiplicity runs
    double measure_moment = 0.0;  // beta*-moment fed to the Lyapunov candidates
    std::optional<AppendixParams> appendix;
    double ct_K1 = 1.0;
    std::vector<double> ct_times;
};

struct SampleOptions {
    long n = 100000;
    double dt = 1.0;
};

struct SelfConsistentOptions {
    double gamma = 2.0;
    double beta = 1.0;
    // Explicit beta values to scan; empty when not requested.
    std::vector<double> beta_scan;
    double m_max = 0.0;  // <= 0 selects an automatic bound
    int grid_n = 2000;
    double tol = 1e-3;
    int h_points = 401;
};

struct ExperimentConfig {
    LevyMeasureSpec levy;
    DriftSpec drift;
    SimConfig sim;
    FixedPointConfig fixed_point;  // fixed_point.sim mirrors sim
    std::vector<std::vector<double>> seeds;
    InitSpec init;
    ConditionsBlock conditions;
    SampleOptions sample;
    SelfConsistentOptions self_consistent;
    std::string output_dir;  // empty: chosen by the caller

    void validate() const;
};

// Strict parser: unknown keys and type mismatches fail with the offending path.
ExperimentConfig parse_config(const std::string& json_text);
// Every field written explicitly, defaults included; parse_config of the
// result yields an equal configuration.
std::string resolved_config_json(const ExperimentConfig& cfg);

std::vector<double> parse_scan(const std::string& spec);  // "lo:hi:step"

LevyKind levy_kind_from_name(const std::string& s);
const char* levy_kind_name(LevyKind k);
DriftFamily drift_family_from_name(const std::string& s);

}  // namespace lmv
