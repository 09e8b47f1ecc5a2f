#include "levymv/levymv.h"

#include <cstring>
#include <new>
#include <string>

#include "levymv/config.hpp"
#include "levymv/errors.hpp"
#include "levymv/experiment.hpp"
#include "levymv/levy.hpp"
#include "levymv/measures.hpp"
#include "levymv/self_consistent.hpp"

struct lmv_config {
    lmv::ExperimentConfig cfg;
};
struct lmv_result {
    lmv::RunResult run;
};
struct lmv_levy {
    lmv::LevyMeasureSpec spec;
};
struct lmv_measure {
    lmv::EmpiricalMeasure mu;
};

namespace {

thread_local std::string g_last_error;

lmv_status set_error(lmv_status s, const char* what) {
    g_last_error = what;
    return s;
}

template <class F>
lmv_status guard(F&& f) {
    try {
        f();
        g_last_error.clear();
        return LMV_OK;
    } catch (const lmv::Error& e) {
        return set_error(static_cast<lmv_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(LMV_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(LMV_INTERNAL, e.what());
    }
}

void need(const void* p, const char* name) {
    if (!p) lmv::fail(lmv::ErrorCode::InvalidArgument, std::string(name) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* lmv_version(void) { return "0.1.0"; }

const char* lmv_last_error(void) { return g_last_error.c_str(); }

const char* lmv_status_name(lmv_status s) {
    if (s == LMV_INTERNAL) return "Internal";
    if (s < LMV_OK || s > LMV_IO) return "Unknown";
    return lmv::error_name(static_cast<lmv::ErrorCode>(s));
}

int lmv_status_is_numerical(lmv_status s) {
    switch (s) {
        case LMV_BLOWUP:
        case LMV_QUADRATURE_FAILURE:
        case LMV_GRID_TOO_COARSE:
        case LMV_NO_TRANSITION:
        case LMV_ZERO_OVERLAP:
        case LMV_INFINITE_OVERLAP:
        case LMV_INTERNAL:
            return 1;
        default:
            return 0;
    }
}

lmv_status lmv_config_parse(const char* json, lmv_config** out) {
    return guard([&] {
        need(json, "json");
        need(out, "out");
        *out = new lmv_config{lmv::parse_config(json)};
    });
}

lmv_status lmv_config_default(lmv_config** out) {
    return guard([&] {
        need(out, "out");
        *out = new lmv_config{};
    });
}

void lmv_config_free(lmv_config* cfg) { delete cfg; }

lmv_status lmv_config_set_threads(lmv_config* c, int threads) {
    return guard([&] {
        need(c, "cfg");
        lmv::require(threads >= 1, "threads must be >= 1");
        c->cfg.sim.threads = threads;
        c->cfg.fixed_point.sim.threads = threads;
    });
}

lmv_status lmv_config_set_gamma(lmv_config* c, double gamma) {
    return guard([&] {
        need(c, "cfg");
        lmv::require(gamma > 0.0, "gamma must be positive");
        c->cfg.self_consistent.gamma = gamma;
    });
}

lmv_status lmv_config_set_beta(lmv_config* c, double beta) {
    return guard([&] {
        need(c, "cfg");
        lmv::require(beta > 0.0, "beta must be positive");
        c->cfg.self_consistent.beta = beta;
    });
}

lmv_status lmv_config_set_beta_scan(lmv_config* c, const char* scan) {
    return guard([&] {
        need(c, "cfg");
        need(scan, "scan");
        auto betas = lmv::parse_scan(scan);
        for (double b : betas) lmv::require(b > 0.0, "beta scan values must be positive");
        c->cfg.self_consistent.beta_scan = betas;
    });
}

lmv_status lmv_config_set_output_dir(lmv_config* c, const char* dir) {
    return guard([&] {
        need(c, "cfg");
        need(dir, "dir");
        c->cfg.output_dir = dir;
    });
}

const char* lmv_config_output_dir(const lmv_config* c) { return c ? c->cfg.output_dir.c_str() : ""; }

lmv_status lmv_config_resolved_json(const lmv_config* c, char** out) {
    return guard([&] {
        need(c, "cfg");
        need(out, "out");
        std::string s = lmv::resolved_config_json(c->cfg);
        char* buf = new char[s.size() + 1];
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *out = buf;
    });
}

void lmv_string_free(char* s) { delete[] s; }

lmv_status lmv_run(const lmv_config* c, const char* subcommand, lmv_result** out) {
    return guard([&] {
        need(c, "cfg");
        need(subcommand, "subcommand");
        need(out, "out");
        auto sub = lmv::subcommand_from_name(subcommand);
        *out = new lmv_result{lmv::run_experiment(c->cfg, sub)};
    });
}

void lmv_result_free(lmv_result* r) { delete r; }

const char* lmv_result_report(const lmv_result* r) { return r ? r->run.report_json.c_str() : ""; }

int lmv_result_condition_failed(const lmv_result* r) { return r && r->run.condition_failed ? 1 : 0; }

size_t lmv_result_artifact_count(const lmv_result* r) { return r ? r->run.artifacts.size() : 0; }

const char* lmv_result_artifact_name(const lmv_result* r, size_t i) {
    return r && i < r->run.artifacts.size() ? r->run.artifacts[i].name.c_str() : nullptr;
}

const char* lmv_result_artifact_data(const lmv_result* r, size_t i, size_t* len) {
    if (!r || i >= r->run.artifacts.size()) return nullptr;
    if (len) *len = r->run.artifacts[i].content.size();
    return r->run.artifacts[i].content.data();
}

lmv_status lmv_levy_create(const char* kind, double alpha, double scale, int dim, double cutoff, double rate,
                           double jump_std, lmv_levy** out) {
    return guard([&] {
        need(kind, "kind");
        need(out, "out");
        lmv::LevyMeasureSpec s;
        s.kind = lmv::levy_kind_from_name(kind);
        s.alpha = alpha;
        s.scale = scale;
        s.dim = dim;
        s.cutoff = cutoff;
        s.rate = rate;
        s.jump_dist.std = jump_std;
        s.validate();
        *out = new lmv_levy{s};
    });
}

void lmv_levy_free(lmv_levy* l) { delete l; }

lmv_status lmv_levy_tail_moment(const lmv_levy* l, double p, int complement, double r, double* out) {
    return guard([&] {
        need(l, "levy");
        need(out, "out");
        *out = lmv::tail_moment(l->spec, p, complement ? lmv::Region::complement(r) : lmv::Region::ball(r));
    });
}

lmv_status lmv_levy_overlap_J(const lmv_levy* l, double r, double* out) {
    return guard([&] {
        need(l, "levy");
        need(out, "out");
        *out = lmv::J(l->spec, r);
    });
}

lmv_status lmv_levy_sample(const lmv_levy* l, double dt, uint64_t seed, uint64_t stream_id, size_t n, double* out) {
    return guard([&] {
        need(l, "levy");
        need(out, "out");
        lmv::IncrementSampler inc(l->spec, dt);
        lmv::Stream rng(seed, stream_id);
        for (size_t i = 0; i < n; ++i) inc(rng, out + i * static_cast<size_t>(l->spec.dim));
    });
}

lmv_status lmv_measure_create(int dim, size_t n, const double* points, const double* weights, lmv_measure** out) {
    return guard([&] {
        need(points, "points");
        need(out, "out");
        lmv::require(dim >= 1, "dim must be >= 1");
        if (n == 0) lmv::fail(lmv::ErrorCode::EmptyMeasure, "measure needs at least one atom");
        std::vector<double> pts(points, points + n * static_cast<size_t>(dim));
        if (weights)
            *out = new lmv_measure{lmv::EmpiricalMeasure(dim, std::move(pts), std::vector<double>(weights, weights + n))};
        else
            *out = new lmv_measure{lmv::EmpiricalMeasure(dim, std::move(pts))};
    });
}

void lmv_measure_free(lmv_measure* mu) { delete mu; }

lmv_status lmv_measure_w1(const lmv_measure* a, const lmv_measure* b, double* out) {
    return guard([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        *out = lmv::w1(a->mu, b->mu);
    });
}

lmv_status lmv_measure_moment(const lmv_measure* mu, double p, double* out) {
    return guard([&] {
        need(mu, "mu");
        need(out, "out");
        *out = lmv::moment(mu->mu, p);
    });
}

lmv_status lmv_h(double gamma, double beta, double m, double* out) {
    return guard([&] {
        need(out, "out");
        *out = lmv::h_fn(lmv::GradientCase{gamma, beta}, m);
    });
}

lmv_status lmv_root_count(double gamma, double beta, double m_max, int grid_n, int* count) {
    return guard([&] {
        need(count, "count");
        lmv::GradientCase c{gamma, beta};
        c.validate();
        *count = lmv::root_count(c, m_max > 0.0 ? m_max : lmv::default_m_max(c), grid_n).count;
    });
}

lmv_status lmv_beta_c(double gamma, double tol, double* beta_c, int* above_gamma_c) {
    return guard([&] {
        need(beta_c, "beta_c");
        auto r = lmv::beta_c(gamma, tol);
        *beta_c = r.beta_c;
        if (above_gamma_c) *above_gamma_c = r.above_gamma_c ? 1 : 0;
    });
}

}  // extern "C"
