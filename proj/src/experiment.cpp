#include "levymv/experiment.hpp"

#include <cmath>
#include <cstdio>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "levymv/conditions.hpp"
#include "levymv/errors.hpp"
#include "levymv/fixed_point.hpp"
#include "levymv/rng.hpp"
#include "levymv/self_consistent.hpp"

namespace lmv {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json a1_json(const A1Params& p) {
    return {{"C_b", p.C_b},       {"lambda1", p.lambda1}, {"lambda2", p.lambda2},     {"theta1", p.theta1},
            {"theta2", p.theta2}, {"theta3", p.theta3},   {"theta4", p.theta4},       {"beta", p.beta},
            {"beta_star", p.beta_star}, {"gamma1", p.gamma1}, {"gamma2", p.gamma2}, {"regime", a1_case_name(p.regime)}};
}

json mstar_json(const MStar& m) {
    json j = {{"regime", a1_case_name(m.regime)},
              {"M_star", m.M_star},
              {"chosen", {{"eps1", m.chosen.eps1}, {"eps2", m.chosen.eps2}, {"r0", m.chosen.r0}, {"l", m.chosen.l}}}};
    if (m.has_M1) {
        j["M1"] = m.M1;
        j["M1_short_prefactor"] = m.M1_short_prefactor;
        j["C1"] = m.C1;
    }
    if (m.has_M2) j["M2"] = m.M2;
    return j;
}

json fp_json(const FixedPointReport& r) {
    return {{"converged", r.converged},
            {"iterations", r.iterations},
            {"history", r.history},
            {"beta_star", r.beta_star},
            {"moment_beta_star", nullable(r.moment_beta_star)},
            {"noise_floor", r.noise_floor},
            {"noise_floor_initial", r.noise_floor_initial},
            {"damping_used", r.damping_used},
            {"mean", r.mean},
            {"mean_se", r.mean_se},
            {"mean_se_accum", r.mean_se_accum},
            {"variance", r.final.variance()},
            {"atoms", r.final.size()},
            {"T", r.T},
            {"dt", r.dt},
            {"drift_substeps", r.drift_substeps},
            {"dt_halvings", r.dt_halvings}};
}

double resolved_beta(const ExperimentConfig& cfg) {
    return cfg.conditions.beta > 0.0 ? cfg.conditions.beta : default_beta(std::min(cfg.levy.alpha, 2.0));
}

const std::vector<std::vector<double>>& need_seeds(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty()) fail(ErrorCode::InvalidArgument, "config: seeds: at least one seed center is required");
    return cfg.seeds;
}

void add_report(RunResult& out, json rep, const ExperimentConfig& cfg, Subcommand sub) {
    rep["subcommand"] = subcommand_name(sub);
    rep["condition_failed"] = out.condition_failed;
    out.report_json = rep.dump(2) + "\n";
    out.artifacts.insert(out.artifacts.begin(), {"report.json", out.report_json});
    out.artifacts.push_back({"resolved_config.json", resolved_config_json(cfg)});
}

// ---- sample ----------------------------------------------------------------

RunResult run_sample(const ExperimentConfig& cfg) {
    RunResult out;
    const auto& L = cfg.levy;
    const int d = L.dim;
    const auto n = static_cast<std::size_t>(cfg.sample.n);
    const double dt = cfg.sample.dt;
    IncrementSampler full(L, dt), half(L, 0.5 * dt);
    Stream ra(cfg.sim.seed, 0), rb(cfg.sim.seed, 1);
    std::vector<double> z(static_cast<std::size_t>(d)), z2(static_cast<std::size_t>(d));
    std::vector<double> first, summed;
    std::string csv = "sample_id";
    for (int k = 1; k <= d; ++k) csv += ",x_" + std::to_string(k);
    csv += "\n";
    for (std::size_t i = 0; i < n; ++i) {
        full(ra, z.data());
        first.push_back(z[0]);
        csv += std::to_string(i);
        for (double v : z) csv += "," + fmt17(v);
        csv += "\n";
        half(rb, z.data());
        half(rb, z2.data());
        summed.push_back(z[0] + z2[0]);
    }
    json rep;
    rep["n"] = n;
    rep["dt"] = dt;
    json cf = json::array();
    if (L.kind == LevyKind::IsotropicStable) {
        for (double t : {0.5, 1.0, 2.0}) {
            double emp = 0.0;
            for (double v : first) emp += std::cos(t * v);
            emp /= static_cast<double>(n);
            double expo = L.is_brownian() ? 0.5 * L.scale * L.scale * t * t : std::pow(L.scale * std::abs(t), L.alpha);
            double exact = std::exp(-dt * expo);
            cf.push_back({{"t", t}, {"empirical", emp}, {"exact", exact}, {"abs_diff", std::abs(emp - exact)}});
        }
    }
    rep["characteristic_function"] = cf;
    KsResult ks = ks_two_sample(first, summed);
    rep["self_similarity_ks"] = {{"statistic", ks.statistic}, {"p_value", ks.p_value}, {"pass_1pct", ks.p_value > 0.01}};
    out.condition_failed = ks.p_value <= 0.01;
    out.artifacts.push_back({"increments.csv", csv});
    add_report(out, rep, cfg, Subcommand::Sample);
    return out;
}

// ---- simulate --------------------------------------------------------------

RunResult run_simulate(const ExperimentConfig& cfg) {
    RunResult out;
    const auto& y = need_seeds(cfg).front();
    EmpiricalMeasure init = initial_measure(cfg, y);
    std::vector<double> times;
    for (double f : {0.25, 0.5, 0.75, 1.0}) times.push_back(f * cfg.sim.T);
    auto snaps = particle_system(cfg.drift, cfg.levy, init, cfg.sim, times);
    json rep;
    json js = json::array();
    for (const auto& s : snaps)
        js.push_back({{"t", s.t}, {"mean", s.particles.mean()}, {"variance", s.particles.variance()}});
    rep["particles"] = cfg.sim.n_chains;
    rep["snapshots"] = js;
    out.artifacts.push_back({"snapshots.csv", snapshots_to_csv(snaps)});
    add_report(out, rep, cfg, Subcommand::Simulate);
    return out;
}

// ---- fixpoint / multiplicity -----------------------------------------------

RunResult run_fixpoint(const ExperimentConfig& cfg) {
    RunResult out;
    json reps = json::array();
    const auto& seeds = need_seeds(cfg);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        FixedPointConfig fp = cfg.fixed_point;
        fp.sim.seed = center_seed(cfg.sim.seed, seeds[i]);
        FixedPointReport r = iterate_lambda(cfg.drift, cfg.levy, initial_measure(cfg, seeds[i]), fp);
        json j = fp_json(r);
        j["seed_center"] = seeds[i];
        reps.push_back(j);
        out.artifacts.push_back({"fixed_point_" + std::to_string(i) + ".csv", measure_to_csv(r.final)});
    }
    add_report(out, {{"fixed_points", reps}}, cfg, Subcommand::Fixpoint);
    return out;
}

RunResult run_multiplicity(const ExperimentConfig& cfg) {
    RunResult out;
    json rep;
    double M = cfg.conditions.M_star;
    if (M > 0.0) {
        rep["M_star_source"] = "config";
    } else {
        A1Params p = lyapunov_params(cfg.drift, resolved_beta(cfg));
        MStar ms = m_star(p, cfg.levy);
        M = ms.M_star;
        rep["M_star_source"] = "A1 bound";
        rep["m_star"] = mstar_json(ms);
    }
    MultiplicityReport mr = multiplicity_search(cfg.drift, cfg.levy, need_seeds(cfg), M, cfg.fixed_point);
    json fps = json::array();
    for (std::size_t i = 0; i < mr.fixed_points.size(); ++i) {
        json j = mr.seed_errors[i].empty() ? fp_json(mr.fixed_points[i]) : json{{"error", mr.seed_errors[i]}};
        j["seed_center"] = mr.seeds[i];
        fps.push_back(j);
        if (mr.seed_errors[i].empty())
            out.artifacts.push_back({"fixed_point_" + std::to_string(i) + ".csv", measure_to_csv(mr.fixed_points[i].final)});
    }
    json ev = json::array();
    for (const auto& e : mr.evidence)
        ev.push_back({{"i", e.i},
                      {"j", e.j},
                      {"w1", e.w1},
                      {"radius", e.radius},
                      {"concentration_i", e.concentration_i},
                      {"concentration_j", e.concentration_j},
                      {"w1_threshold", e.w1_threshold},
                      {"distinct", e.distinct}});
    rep["M_star"] = M;
    rep["quarter_min_separation"] = mr.quarter_min_separation;
    rep["m_star_below_separation"] = mr.m_star_below_separation;
    rep["fixed_points"] = fps;
    rep["distinct_pairs"] = mr.distinct_pairs;
    rep["separation_evidence"] = ev;
    rep["distinct_count"] = mr.distinct_count;
    rep["warnings"] = mr.warnings;
    add_report(out, rep, cfg, Subcommand::Multiplicity);
    return out;
}

// ---- check -----------------------------------------------------------------

RunResult run_check(const ExperimentConfig& cfg) {
    RunResult out;
    json rep;
    const double beta = resolved_beta(cfg);
    const auto& D = cfg.drift;
    const auto& L = cfg.levy;
    rep["beta"] = beta;
    bool failed = false;
    try {
        A1Params p = lyapunov_params(D, beta);
        rep["a1"] = a1_json(p);
        if (p.regime == A1Case::None) {
            failed = true;
        } else {
            rep["m_star"] = mstar_json(m_star(p, L));
        }
    } catch (const Error& e) {
        rep["a1_error"] = std::string(error_name(e.code())) + ": " + e.what();
        failed = true;
    }

    switch (D.family) {
        case DriftFamily::DoubleWell1D: {
            json ex;
            double eps = cfg.conditions.eps.value_or(0.0), r0 = cfg.conditions.r0.value_or(0.0);
            bool have = cfg.conditions.eps && cfg.conditions.r0;
            if (!have) {
                Witness w = we2_feasible(D.lambda, D.kappa, beta, D.a1, D.a2, L);
                ex["witness_search"] = {{"found", w.found}, {"eps", w.eps}, {"r0", w.r0}};
                if (w.found) {
                    eps = w.eps;
                    r0 = w.r0;
                    have = true;
                }
            }
            if (!have) {
                // Threshold checks still run at a nominal point.
                eps = 1e-2;
                r0 = 0.125 * std::min(std::abs(D.a1), std::abs(D.a2));
            }
            Ex14Result r = ex14_check(D.lambda, D.kappa, beta, eps, r0, D.a1, D.a2, L);
            ex["eps"] = eps;
            ex["r0"] = r0;
            ex["we_ok"] = r.we_ok;
            ex["we_threshold"] = r.we_threshold;
            ex["kappa_over_lambda"] = D.kappa / D.lambda;
            ex["we2_ok"] = r.we2_ok && have;
            ex["we2_lhs"] = r.we2_lhs;
            ex["we2_rhs"] = r.we2_rhs;
            ex["convex_ok"] = r.convex_ok;
            ex["convex_margins"] = r.convex_margins;
            json br = json::array();
            for (auto [a, b] : {std::pair{D.a1, D.a2}, std::pair{D.a2, D.a1}}) {
                double g0 = r.g(a, b, 0.0, r0), g1 = r.g(a, b, r0, r0);
                br.push_back({{"a", a}, {"b", b}, {"g_0_r0", g0}, {"g_r0_r0", g1}, {"brackets", g0 < 0.0 && g1 > 0.0}});
            }
            ex["g_bracketing"] = br;
            rep["example_double_well"] = ex;
            failed = failed || !(r.we_ok && r.we2_ok && have && r.convex_ok);
            break;
        }
        case DriftFamily::SymmetricTwoWell: {
            json ex;
            double eps = cfg.conditions.eps.value_or(0.0), r0 = cfg.conditions.r0.value_or(0.0);
            bool have = cfg.conditions.eps && cfg.conditions.r0;
            if (!have) {
                Witness w = wq2_feasible(D.lambda, D.kappa, beta, D.y1, D.y2, L);
                ex["witness_search"] = {{"found", w.found}, {"eps", w.eps}, {"r0", w.r0}};
                if (w.found) {
                    eps = w.eps;
                    r0 = w.r0;
                    have = true;
                }
            }
            if (!have) {
                double s = 0.0;
                for (std::size_t i = 0; i < D.y1.size(); ++i) s += (D.y1[i] - D.y2[i]) * (D.y1[i] - D.y2[i]);
                eps = 1e-2;
                r0 = 0.125 * std::sqrt(s);
            }
            Ex15Result r = ex15_check(D.lambda, D.kappa, beta, eps, r0, D.y1, D.y2, L);
            ex["eps"] = eps;
            ex["r0"] = r0;
            ex["eq1_ok"] = r.eq1_ok;
            ex["eq1_threshold"] = r.eq1_threshold;
            ex["wq2_ok"] = r.wq2_ok && have;
            ex["wq2_lhs"] = r.wq2_lhs;
            ex["wq2_rhs"] = r.wq2_rhs;
            double g0 = r.g(0.0, r0), g1 = r.g(r0, r0);
            ex["g_bracketing"] = {{"g_0_r0", g0}, {"g_r0_r0", g1}, {"brackets", g0 < 0.0 && g1 > 0.0}};
            rep["example_two_well"] = ex;
            failed = failed || !(r.eq1_ok && r.wq2_ok && have);
            break;
        }
        case DriftFamily::AsymmetricCubic1D: {
            if (rep.contains("a1")) {
                A1Params p = lyapunov_params(D, beta);
                E12Report e = verify_E12(D, p, canonical_grid(D.dim()), canonical_measures(D.dim()));
                rep["e12"] = {{"ok", e.ok}, {"worst_slack", e.worst_slack}, {"violations", e.violations.size()}};
                failed = failed || !e.ok;
            }
            break;
        }
        case DriftFamily::MeanFieldOU: {
            OuClass c = ou_classify(D.lambda);
            rep["ou"] = {{"kind", c.kind}, {"mean_set", c.mean_set}, {"variance", c.variance}};
            break;
        }
    }
    out.condition_failed = failed;
    add_report(out, rep, cfg, Subcommand::Check);
    return out;
}

// ---- selfconsistent --------------------------------------------------------

RunResult run_selfconsistent(const ExperimentConfig& cfg) {
    RunResult out;
    const auto& o = cfg.self_consistent;
    json rep;
    rep["gamma"] = o.gamma;
    rep["formula_value"] = beta_c_formula(o.gamma);
    try {
        BetaCResult b = beta_c(o.gamma, o.tol);
        rep["beta_c"] = b.above_gamma_c ? json(0.0) : json(b.beta_c);
        rep["above_gamma_c"] = b.above_gamma_c;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoTransition) throw;
        rep["beta_c"] = nullptr;
        rep["above_gamma_c"] = false;
        rep["beta_c_error"] = std::string(error_name(e.code())) + ": " + e.what();
    }

    auto m_max_for = [&](const GradientCase& c) { return o.m_max > 0.0 ? o.m_max : default_m_max(c); };
    GradientCase base{o.gamma, o.beta};
    base.validate();
    RootCountResult rc = root_count(base, m_max_for(base), o.grid_n);
    rep["beta"] = o.beta;
    rep["root_count"] = rc.count;
    rep["roots"] = rc.roots;
    rep["tangential"] = rc.tangential;

    std::string hcsv = "m,h,h_normalized\n";
    const double mm = m_max_for(base);
    for (int i = 0; i < o.h_points; ++i) {
        double m = mm * (2.0 * i - (o.h_points - 1)) / (o.h_points - 1);
        hcsv += fmt17(m) + "," + fmt17(h_fn(base, m)) + "," + fmt17(h_normalized(base, m)) + "\n";
    }
    out.artifacts.push_back({"h_curve.csv", hcsv});

    if (!o.beta_scan.empty()) {
        std::string scsv = "beta,root_count\n";
        json scan = json::array();
        for (double b : o.beta_scan) {
            GradientCase c{o.gamma, b};
            RootCountResult r = root_count(c, m_max_for(c), o.grid_n);
            scsv += fmt17(b) + "," + std::to_string(r.count) + "\n";
            scan.push_back({{"beta", b}, {"root_count", r.count}});
        }
        rep["beta_scan"] = scan;
        out.artifacts.push_back({"root_counts.csv", scsv});
    }
    add_report(out, rep, cfg, Subcommand::SelfConsistent);
    return out;
}

// ---- constants -------------------------------------------------------------

RunResult run_constants(const ExperimentConfig& cfg) {
    RunResult out;
    json rep;
    const auto& L = cfg.levy;
    const double beta = resolved_beta(cfg);
    bool failed = false;
    if (cfg.conditions.appendix) {
        AppendixConstants a = appendix_constants(*cfg.conditions.appendix, L);
        json j = {{"J_kappa", a.J_kappa}, {"c", a.c}, {"a", a.a}, {"eps", a.eps}, {"lambda0", a.lambda0},
                  {"lambda0_positive", a.lambda0 > 0.0}};
        if (a.has_contraction)
            j["contraction"] = {{"c1", a.c1}, {"c2", a.c2}, {"g_2l0", a.g_2l0}, {"C", a.C_contr}, {"lambda", a.lambda_contr}};
        rep["appendix"] = j;
        failed = !(a.lambda0 > 0.0);
    }
    const double mass = tail_mass(L, 1.0);
    json ct = json::array();
    for (double t : cfg.conditions.ct_times) ct.push_back({{"t", t}, {"C_t", ct_fn(cfg.conditions.ct_K1, mass, t)}});
    rep["ct"] = {{"K1", cfg.conditions.ct_K1}, {"tail_mass", mass}, {"values", ct}};
    try {
        A1Params p = lyapunov_params(cfg.drift, beta);
        rep["a1"] = a1_json(p);
        if (p.regime != A1Case::None) rep["m_star"] = mstar_json(m_star(p, L));
        if (p.theta1 >= 1.0 && p.lambda1 > 0.0) {
            LyapunovCandidates c = drift_lyapunov_candidates(p, L, cfg.conditions.measure_moment);
            rep["lyapunov_candidates"] = {{"C_V", c.C_V},
                                          {"lambda_V", c.lambda_V},
                                          {"l", c.l},
                                          {"l0", l0_from_lyapunov(c.C_V, c.lambda_V, p.beta)}};
        }
    } catch (const Error& e) {
        rep["a1_error"] = std::string(error_name(e.code())) + ": " + e.what();
    }
    out.condition_failed = failed;
    add_report(out, rep, cfg, Subcommand::Constants);
    return out;
}

}  // namespace

Subcommand subcommand_from_name(const std::string& n) {
    if (n == "sample") return Subcommand::Sample;
    if (n == "simulate") return Subcommand::Simulate;
    if (n == "fixpoint") return Subcommand::Fixpoint;
    if (n == "multiplicity") return Subcommand::Multiplicity;
    if (n == "check") return Subcommand::Check;
    if (n == "selfconsistent") return Subcommand::SelfConsistent;
    if (n == "constants") return Subcommand::Constants;
    fail(ErrorCode::InvalidArgument, "unknown subcommand '" + n + "'");
}

const char* subcommand_name(Subcommand s) {
    switch (s) {
        case Subcommand::Sample: return "sample";
        case Subcommand::Simulate: return "simulate";
        case Subcommand::Fixpoint: return "fixpoint";
        case Subcommand::Multiplicity: return "multiplicity";
        case Subcommand::Check: return "check";
        case Subcommand::SelfConsistent: return "selfconsistent";
        case Subcommand::Constants: return "constants";
    }
    return "?";
}

EmpiricalMeasure initial_measure(const ExperimentConfig& cfg, const std::vector<double>& y) {
    if (cfg.init.kind == "dirac") return EmpiricalMeasure::dirac(y);
    const int d = static_cast<int>(y.size());
    const std::size_t n = static_cast<std::size_t>(cfg.init.atoms > 0 ? cfg.init.atoms : cfg.sim.n_chains);
    std::vector<double> pts;
    pts.reserve(n * static_cast<std::size_t>(d));
    if (d == 1) {
        boost::math::normal_distribution<double> N;
        for (std::size_t i = 0; i < n; ++i)
            pts.push_back(y[0] + cfg.init.std * boost::math::quantile(N, (static_cast<double>(i) + 0.5) / static_cast<double>(n)));
    } else {
        Stream rng(derive_seed(cfg.sim.seed, 0x696e6974ULL), 0);
        for (std::size_t i = 0; i < n; ++i)
            for (int k = 0; k < d; ++k) pts.push_back(y[static_cast<std::size_t>(k)] + cfg.init.std * rng.normal());
    }
    return EmpiricalMeasure(d, std::move(pts));
}

RunResult run_experiment(const ExperimentConfig& cfg, Subcommand sub) {
    cfg.validate();
    switch (sub) {
        case Subcommand::Sample: return run_sample(cfg);
        case Subcommand::Simulate: return run_simulate(cfg);
        case Subcommand::Fixpoint: return run_fixpoint(cfg);
        case Subcommand::Multiplicity: return run_multiplicity(cfg);
        case Subcommand::Check: return run_check(cfg);
        case Subcommand::SelfConsistent: return run_selfconsistent(cfg);
        case Subcommand::Constants: return run_constants(cfg);
    }
    fail(ErrorCode::InvalidArgument, "unknown subcommand");
}

}  // namespace lmv
