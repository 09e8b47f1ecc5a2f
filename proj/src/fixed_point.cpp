#include "levymv/fixed_point.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "levymv/conditions.hpp"
#include "levymv/errors.hpp"
#include "levymv/parallel.hpp"
#include "levymv/rng.hpp"

namespace lmv {

namespace {

constexpr std::uint64_t kFloorTag = 0x6e6f697365ULL;

constexpr std::uint64_t kSplitTag = 0x73706c6974ULL;
constexpr int kSplits = 8;

// W1 between two independent runs of the same size, estimated from random
// half-partitions of the chains: mean over partitions of W1(A, B) / sqrt 2.
double bootstrap_floor(const OccupationMeasure& occ, std::uint64_t seed) {
    const auto d = static_cast<std::size_t>(occ.measure.dim());
    const auto n = static_cast<std::size_t>(occ.n_chains);
    const std::size_t per = occ.measure.size() / n;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Stream rng(seed, kSplitTag);
    double sum = 0.0;
    for (int s = 0; s < kSplits; ++s) {
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(order[i], order[static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1))]);
        std::vector<double> a, b;
        a.reserve(n / 2 * per * d);
        b.reserve((n - n / 2) * per * d);
        for (std::size_t j = 0; j < n; ++j) {
            const double* p = occ.measure.point(order[j] * per);
            (j < n / 2 ? a : b).insert((j < n / 2 ? a : b).end(), p, p + per * d);
        }
        sum += w1(EmpiricalMeasure(occ.measure.dim(), std::move(a)), EmpiricalMeasure(occ.measure.dim(), std::move(b)));
    }
    return sum / kSplits / std::sqrt(2.0);
}

// Two iterates apart are closer than consecutive ones: a two-cycle.
bool alternating(double h_k, double w1_skip, double tol) { return h_k > tol && w1_skip < 0.5 * h_k; }

}  // namespace

std::uint64_t center_seed(std::uint64_t base, const std::vector<double>& y) {
    std::uint64_t h = base;
    for (double v : y) h = derive_seed(h, std::bit_cast<std::uint64_t>(v));
    return h;
}

void FixedPointConfig::validate() const {
    require(max_iter >= 1, "max_iter must be positive");
    require(w1_tol > 0.0 && std::isfinite(w1_tol), "w1_tol must be positive");
    require(damping >= 0.0 && damping < 1.0, "damping must lie in [0, 1)");
    sim.validate();
}

OccupationMeasure lambda_map(const DriftSpec& drift, const LevyMeasureSpec& levy, const EmpiricalMeasure& mu,
                             const SimConfig& sim) {
    return frozen_trajectory(drift, mu, levy, mu, sim);
}

FixedPointReport iterate_lambda(const DriftSpec& drift, const LevyMeasureSpec& levy, const EmpiricalMeasure& mu0,
                                const FixedPointConfig& cfg) {
    cfg.validate();
    drift.validate();
    levy.validate();
    if (mu0.empty()) fail(ErrorCode::EmptyMeasure, "initial measure is empty");
    if (mu0.dim() != drift.dim() || levy.dim != drift.dim())
        fail(ErrorCode::DimensionMismatch, "drift, levy and initial measure dimensions must agree");

    FixedPointReport rep;
    rep.beta_star = cfg.beta_star > 0.0 ? cfg.beta_star
                                        : lyapunov_params(drift, default_beta(std::min(levy.alpha, 2.0))).beta_star;
    rep.damping_used = cfg.damping;
    const int d = drift.dim();
    std::vector<double> se2(static_cast<std::size_t>(d), 0.0);

    EmpiricalMeasure prev;  // mu_{k-1}
    EmpiricalMeasure cur = mu0;
    OccupationMeasure last;
    SimConfig sim = cfg.sim;
    double damping = cfg.damping;
    for (int k = 0; k < cfg.max_iter; ++k) {
        sim.seed = derive_seed(cfg.sim.seed, static_cast<std::uint64_t>(k));
        OccupationMeasure occ = lambda_map(drift, levy, cur, sim);
        rep.drift_substeps += occ.drift_substeps;
        rep.dt_halvings = std::max(rep.dt_halvings, occ.dt_halvings);
        auto se = occ.mean_se();
        for (int i = 0; i < d; ++i) se2[static_cast<std::size_t>(i)] += se[static_cast<std::size_t>(i)] * se[static_cast<std::size_t>(i)];

        if (k == 0) {
            if (occ.n_chains >= 2) rep.noise_floor_initial = bootstrap_floor(occ, sim.seed);
            if (rep.noise_floor_initial > cfg.w1_tol)
                fail(ErrorCode::NoiseFloorExceedsTol,
                     "w1_tol " + std::to_string(cfg.w1_tol) + " is below the Monte Carlo noise floor " +
                         std::to_string(rep.noise_floor_initial) + "; raise w1_tol, n_chains or T");
        }

        EmpiricalMeasure next =
            damping > 0.0 ? mixture(occ.measure, systematic_resample(cur, occ.measure.size()), damping) : occ.measure;
        double h = w1(next, cur);
        rep.history.push_back(h);
        rep.iterations = k + 1;

        const bool stalled = rep.history.size() >= 2 && h >= rep.history[rep.history.size() - 2];
        if (cfg.auto_damping && damping == 0.0 && stalled && alternating(h, w1(next, prev), cfg.w1_tol)) {
            damping = 0.5;
            rep.damping_used = damping;
        }
        prev = std::move(cur);
        cur = std::move(next);
        last = std::move(occ);
        if (h <= cfg.w1_tol) {
            rep.converged = true;
            break;
        }
    }

    if (cfg.final_noise_floor) {
        SimConfig other = sim;
        other.seed = derive_seed(cfg.sim.seed, kFloorTag);
        OccupationMeasure twin = lambda_map(drift, levy, prev, other);
        rep.noise_floor = w1(twin.measure, last.measure);
    } else {
        rep.noise_floor = rep.noise_floor_initial;
    }

    rep.final = std::move(cur);
    rep.moment_beta_star = moment(rep.final, rep.beta_star);
    rep.mean = rep.final.mean();
    rep.mean_se = last.mean_se();
    rep.mean_se_accum.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) rep.mean_se_accum[static_cast<std::size_t>(i)] = std::sqrt(se2[static_cast<std::size_t>(i)]);
    rep.T = last.T;
    rep.dt = last.dt;
    return rep;
}

MultiplicityReport multiplicity_search(const DriftSpec& drift, const LevyMeasureSpec& levy,
                                       const std::vector<std::vector<double>>& seeds, double M_star,
                                       const FixedPointConfig& cfg) {
    cfg.validate();
    require(!seeds.empty(), "at least one seed is required");
    require(M_star > 0.0, "M_star must be positive");
    const std::size_t k = seeds.size();
    for (const auto& y : seeds)
        if (static_cast<int>(y.size()) != drift.dim()) fail(ErrorCode::DimensionMismatch, "seed dimension mismatch");
    auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
    };
    double min_sep = INFINITY;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double s = dist(seeds[i], seeds[j]);
            require(s > 0.0, "seeds must be pairwise distinct");
            min_sep = std::min(min_sep, s);
        }

    MultiplicityReport rep;
    rep.seeds = seeds;
    rep.M_star = M_star;
    if (k > 1) {
        rep.quarter_min_separation = 0.25 * min_sep;
        rep.m_star_below_separation = M_star < rep.quarter_min_separation;
        if (!rep.m_star_below_separation)
            rep.warnings.push_back("M_star = " + std::to_string(M_star) + " is not below min|y_i - y_j| / 4 = " +
                                   std::to_string(rep.quarter_min_separation));
    }
    rep.fixed_points.resize(k);
    rep.seed_errors.assign(k, "");

    // Outer parallelism over seeds; each seed simulates single-threaded.
    FixedPointConfig inner = cfg;
    inner.sim.threads = 1;
    parallel_for(k, cfg.sim.threads, [&](std::size_t i) {
        FixedPointConfig c = inner;
        c.sim.seed = center_seed(cfg.sim.seed, seeds[i]);
        try {
            rep.fixed_points[i] = iterate_lambda(drift, levy, EmpiricalMeasure::dirac(seeds[i]), c);
        } catch (const Error& e) {
            rep.seed_errors[i] = std::string(error_name(e.code())) + ": " + e.what();
        }
    });

    rep.distinct_pairs.assign(k, std::vector<bool>(k, false));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            if (!rep.seed_errors[i].empty() || !rep.seed_errors[j].empty()) continue;
            const auto& a = rep.fixed_points[i];
            const auto& b = rep.fixed_points[j];
            PairEvidence ev;
            ev.i = i;
            ev.j = j;
            ev.radius = 0.5 * dist(seeds[i], seeds[j]);
            ev.w1 = w1(a.final, b.final);
            ev.concentration_i = concentration(a.final, seeds[i], ev.radius);
            ev.concentration_j = concentration(b.final, seeds[j], ev.radius);
            ev.w1_threshold = std::max(2.0 * std::max(a.noise_floor, b.noise_floor), cfg.w1_tol);
            ev.distinct = ev.concentration_i < 0.5 && ev.concentration_j < 0.5 && ev.w1 > ev.w1_threshold;
            rep.distinct_pairs[i][j] = rep.distinct_pairs[j][i] = ev.distinct;
            rep.evidence.push_back(ev);
        }
    for (std::size_t i = 0; i < k; ++i)
        if (!rep.seed_errors[i].empty()) rep.warnings.push_back("seed " + std::to_string(i) + " failed: " + rep.seed_errors[i]);
        else if (!rep.fixed_points[i].converged)
            rep.warnings.push_back("seed " + std::to_string(i) + " did not converge in " + std::to_string(cfg.max_iter) +
                                   " iterations");

    // Largest pairwise-distinct subset among successful seeds (brute force, k <= 20).
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < k; ++i)
        if (rep.seed_errors[i].empty()) ok.push_back(i);
    if (ok.size() <= 20) {
        const std::uint32_t n = static_cast<std::uint32_t>(ok.size());
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            int bits = std::popcount(mask);
            if (bits <= rep.distinct_count) continue;
            bool clique = true;
            for (std::uint32_t a = 0; a < n && clique; ++a)
                for (std::uint32_t b = a + 1; b < n && clique; ++b)
                    if ((mask >> a & 1u) && (mask >> b & 1u) && !rep.distinct_pairs[ok[a]][ok[b]]) clique = false;
            if (clique) rep.distinct_count = bits;
        }
    } else {
        rep.warnings.push_back("more than 20 seeds: distinct_count not computed");
    }
    return rep;
}

bool invariance_check(const FixedPointReport& report, const A1Params& params, const LevyMeasureSpec& levy) {
    require(report.converged, "invariance_check needs a converged report");
    MStar ms = m_star(params, levy);
    return moment(report.final, params.beta_star) <= 2.0 * ms.M_star;
}

}  // namespace lmv
