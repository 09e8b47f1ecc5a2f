#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levymv/drift.hpp"
#include "levymv/levy.hpp"
#include "levymv/measures.hpp"

namespace lmv {

struct SimConfig {
    double dt = 1e-3;
    double T = 100.0;
    double burn_in = 0.5;
    int thin = 10;
    int n_chains = 100;
    std::uint64_t seed = 1;
    int threads = 1;
    // Mean-field OU with Brownian noise: draw kept states from the exact
    // thin-step transition of the Euler chain instead of stepping.
    bool exact_affine = true;

    void validate() const;
    // floor((1 - burn_in) T / (dt thin)), the number of kept states per chain.
    long kept_per_chain() const;
    long steps() const;
};

struct OccupationMeasure {
    EmpiricalMeasure measure;
    double T = 0.0;
    double dt = 0.0;
    int n_chains = 0;
    double ess = 0.0;
    // Per-chain time averages (n_chains x dim), used for standard errors.
    std::vector<double> chain_means;
    long drift_substeps = 0;
    int dt_halvings = 0;

    // Standard error of the occupation mean, per coordinate, across chains.
    std::vector<double> mean_se() const;
};

// Chain i starts at the ((i + 1/2) / n_chains)-quantile atom of init (by cumulative weight).
OccupationMeasure frozen_trajectory(const DriftSpec& drift, const EmpiricalMeasure& frozen,
                                    const LevyMeasureSpec& levy, const EmpiricalMeasure& init,
                                    const SimConfig& cfg);
OccupationMeasure frozen_trajectory(const DriftSpec& drift, const EmpiricalMeasure& frozen,
                                    const LevyMeasureSpec& levy, const std::vector<double>& x0,
                                    const SimConfig& cfg);

struct Snapshot {
    double t = 0.0;
    EmpiricalMeasure particles;
};

// Mean-field particle system; cfg.n_chains is the particle count. Snapshots are
// taken at the steps closest to the requested times (terminal state if empty).
std::vector<Snapshot> particle_system(const DriftSpec& drift, const LevyMeasureSpec& levy,
                                      const EmpiricalMeasure& init, const SimConfig& cfg,
                                      const std::vector<double>& snapshot_times = {});

// chain_id,t,x_1..x_d rows with 17 significant digits.
std::string snapshots_to_csv(const std::vector<Snapshot>& snaps);

}  // namespace lmv
