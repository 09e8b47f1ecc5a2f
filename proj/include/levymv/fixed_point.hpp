#pragma once

#include <string>
#include <vector>

#include "levymv/drift.hpp"
#include "levymv/levy.hpp"
#include "levymv/measures.hpp"
#include "levymv/simulate.hpp"

namespace lmv {

struct FixedPointConfig {
    int max_iter = 20;
    double w1_tol = 0.01;
    SimConfig sim;
    double damping = 0.0;
    // Switch to damping 0.5 when the undamped iteration alternates between two states.
    bool auto_damping = true;
    // Order of the reported moment; <= 0 selects beta* of the drift's A1 parameters.
    double beta_star = 0.0;
    // Rerun the last map with an independent seed to measure the final noise floor.
    bool final_noise_floor = true;

    void validate() const;
};

struct FixedPointReport {
    bool converged = false;
    int iterations = 0;
    EmpiricalMeasure final;
    std::vector<double> history;  // W1 between consecutive iterates
    double beta_star = 0.0;
    double moment_beta_star = 0.0;
    // W1 between two independent-seed maps of the last input measure.
    double noise_floor = 0.0;
    // Bootstrap over random half-partitions of the first map's chains.
    double noise_floor_initial = 0.0;
    double damping_used = 0.0;
    std::vector<double> mean;
    std::vector<double> mean_se;        // across chains, last map
    std::vector<double> mean_se_accum;  // root sum of squares over all maps
    double T = 0.0;
    double dt = 0.0;
    long drift_substeps = 0;
    int dt_halvings = 0;
};

// Stream seed for the run started at center y; depends on y, not on its position in a list.
std::uint64_t center_seed(std::uint64_t base, const std::vector<double>& y);

// One application of the map mu -> pi^mu, approximated by the occupation
// measure of chains started from mu (warm start).
OccupationMeasure lambda_map(const DriftSpec& drift, const LevyMeasureSpec& levy, const EmpiricalMeasure& mu,
                             const SimConfig& sim);

FixedPointReport iterate_lambda(const DriftSpec& drift, const LevyMeasureSpec& levy, const EmpiricalMeasure& mu0,
                                const FixedPointConfig& cfg);

struct PairEvidence {
    std::size_t i = 0;
    std::size_t j = 0;
    double w1 = 0.0;
    double radius = 0.0;        // |y_i - y_j| / 2
    double concentration_i = 0.0;  // mass of mu_i outside B(y_i, radius)
    double concentration_j = 0.0;
    double w1_threshold = 0.0;  // max(2 noise floor, w1_tol)
    bool distinct = false;
};

struct MultiplicityReport {
    std::vector<std::vector<double>> seeds;
    std::vector<FixedPointReport> fixed_points;
    std::vector<std::string> seed_errors;  // empty string when the seed succeeded
    std::vector<std::vector<bool>> distinct_pairs;
    std::vector<PairEvidence> evidence;
    double M_star = 0.0;
    double quarter_min_separation = 0.0;
    bool m_star_below_separation = false;
    // Size of the largest set of pairwise distinct fixed points.
    int distinct_count = 0;
    std::vector<std::string> warnings;
};

// Seeds run from Dirac masses; each seed's random stream is derived from its
// coordinates, so verdicts do not depend on the order of the seeds.
MultiplicityReport multiplicity_search(const DriftSpec& drift, const LevyMeasureSpec& levy,
                                       const std::vector<std::vector<double>>& seeds, double M_star,
                                       const FixedPointConfig& cfg);

// moment(final, beta*) <= 2 M_star (factor 2 for Monte Carlo slack).
bool invariance_check(const FixedPointReport& report, const A1Params& params, const LevyMeasureSpec& levy);

}  // namespace lmv
