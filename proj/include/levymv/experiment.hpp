#pragma once

#include <string>
#include <vector>

#include "levymv/config.hpp"

namespace lmv {

enum class Subcommand { Sample, Simulate, Fixpoint, Multiplicity, Check, SelfConsistent, Constants };

Subcommand subcommand_from_name(const std::string& name);
const char* subcommand_name(Subcommand s);

struct Artifact {
    std::string name;  // file name relative to output_dir
    std::string content;
};

struct RunResult {
    std::string report_json;  // also present in artifacts as report.json
    std::vector<Artifact> artifacts;
    // Some checked condition does not hold (drives the --strict exit code).
    bool condition_failed = false;
};

// Runs one subcommand. Reports carry no timings, so equal inputs give
// byte-identical artifacts.
RunResult run_experiment(const ExperimentConfig& cfg, Subcommand sub);

// Initial measure for a seed center per cfg.init.
EmpiricalMeasure initial_measure(const ExperimentConfig& cfg, const std::vector<double>& center);

}  // namespace lmv
