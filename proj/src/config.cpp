#include "levymv/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "levymv/errors.hpp"

namespace lmv {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    fail(ErrorCode::InvalidArgument, "config: " + path + ": " + what);
}

// Object reader that remembers consumed keys so leftovers can be rejected.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) bad(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    double num(const std::string& key, double def) {
        if (!take(key)) return def;
        return as_num(j_.at(key), at(key));
    }
    double num_req(const std::string& key) {
        if (!take(key)) bad(at(key), "required");
        return as_num(j_.at(key), at(key));
    }
    long integer(const std::string& key, long def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) bad(at(key), "expected an integer");
        return v.get<long>();
    }
    std::uint64_t u64_req(const std::string& key) {
        if (!take(key)) bad(at(key), "required (no wall-clock seeding)");
        const json& v = j_.at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
        bad(at(key), "expected a nonnegative integer");
    }
    bool boolean(const std::string& key, bool def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_boolean()) bad(at(key), "expected a boolean");
        return v.get<bool>();
    }
    std::string str(const std::string& key, const std::string& def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_string()) bad(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::vector<double> vec(const std::string& key, std::vector<double> def) {
        if (!take(key)) return def;
        return as_vec(j_.at(key), at(key));
    }
    std::vector<std::vector<double>> mat(const std::string& key) {
        if (!take(key)) return {};
        const json& v = j_.at(key);
        if (!v.is_array()) bad(at(key), "expected an array of vectors");
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_vec(v[i], at(key) + "[" + std::to_string(i) + "]"));
        return out;
    }
    std::optional<Reader> sub(const std::string& key) {
        if (!take(key)) return std::nullopt;
        return Reader(j_.at(key), at(key));
    }
    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) bad(at(it.key()), "unknown key");
    }

private:
    bool take(const std::string& key) {
        if (!j_.contains(key)) return false;
        seen_.insert(key);
        return true;
    }
    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    static double as_num(const json& v, const std::string& p) {
        if (!v.is_number()) bad(p, "expected a number");
        double x = v.get<double>();
        if (!std::isfinite(x)) bad(p, "expected a finite number");
        return x;
    }
    static std::vector<double> as_vec(const json& v, const std::string& p) {
        if (!v.is_array()) bad(p, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_num(v[i], p + "[" + std::to_string(i) + "]"));
        return out;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

const char* g_kind_name(GKind k) {
    switch (k) {
        case GKind::TanhScaled: return "tanh_scaled";
        case GKind::Cosine: return "cosine";
        case GKind::Constant: return "constant";
    }
    return "?";
}

GKind g_kind_from(const std::string& s, const std::string& path) {
    if (s == "tanh_scaled") return GKind::TanhScaled;
    if (s == "cosine") return GKind::Cosine;
    if (s == "constant") return GKind::Constant;
    bad(path, "unknown g kind '" + s + "' (tanh_scaled, cosine, constant)");
}

LevyMeasureSpec read_levy(Reader r) {
    LevyMeasureSpec s;
    try {
        s.kind = levy_kind_from_name(r.str("kind", levy_kind_name(s.kind)));
    } catch (const Error& e) {
        bad("levy.kind", e.what());
    }
    s.alpha = r.num("alpha", s.alpha);
    s.scale = r.num("scale", s.scale);
    s.dim = static_cast<int>(r.integer("dim", s.dim));
    s.cutoff = r.num("cutoff", s.cutoff);
    s.rate = r.num("rate", s.rate);
    if (auto j = r.sub("jump_dist")) {
        s.jump_dist.name = j->str("name", s.jump_dist.name);
        s.jump_dist.std = j->num("std", s.jump_dist.std);
        j->done();
    }
    r.done();
    return s;
}

json write_levy(const LevyMeasureSpec& s) {
    return {{"kind", levy_kind_name(s.kind)}, {"alpha", s.alpha}, {"scale", s.scale}, {"dim", s.dim},
            {"cutoff", s.cutoff}, {"rate", s.rate}, {"jump_dist", {{"name", s.jump_dist.name}, {"std", s.jump_dist.std}}}};
}

DriftSpec read_drift(Reader r) {
    DriftSpec s;
    try {
        s.family = drift_family_from_name(r.str("family", s.family_name()));
    } catch (const Error& e) {
        bad("drift.family", e.what());
    }
    s.lambda = r.num("lambda", s.lambda);
    s.kappa = r.num("kappa", s.kappa);
    s.a1 = r.num("a1", s.a1);
    s.a2 = r.num("a2", s.a2);
    s.y1 = r.vec("y1", s.y1);
    s.y2 = r.vec("y2", s.y2);
    s.beta = r.num("beta", s.beta);
    if (auto g = r.sub("g")) {
        s.g.kind = g_kind_from(g->str("kind", g_kind_name(s.g.kind)), "drift.g.kind");
        s.g.amp = g->num("amp", s.g.amp);
        s.g.rate = g->num("rate", s.g.rate);
        s.g.phase = g->num("phase", s.g.phase);
        g->done();
    }
    r.done();
    return s;
}

json write_drift(const DriftSpec& s) {
    return {{"family", s.family_name()},
            {"lambda", s.lambda},
            {"kappa", s.kappa},
            {"a1", s.a1},
            {"a2", s.a2},
            {"y1", s.y1},
            {"y2", s.y2},
            {"beta", s.beta},
            {"g", {{"kind", g_kind_name(s.g.kind)}, {"amp", s.g.amp}, {"rate", s.g.rate}, {"phase", s.g.phase}}}};
}

SimConfig read_sim(Reader r) {
    SimConfig s;
    s.dt = r.num("dt", s.dt);
    s.T = r.num("T", s.T);
    s.burn_in = r.num("burn_in", s.burn_in);
    s.thin = static_cast<int>(r.integer("thin", s.thin));
    s.n_chains = static_cast<int>(r.integer("n_chains", s.n_chains));
    s.seed = r.u64_req("seed");
    s.threads = static_cast<int>(r.integer("threads", s.threads));
    s.exact_affine = r.boolean("exact_affine", s.exact_affine);
    r.done();
    return s;
}

json write_sim(const SimConfig& s) {
    return {{"dt", s.dt},           {"T", s.T},         {"burn_in", s.burn_in}, {"thin", s.thin},
            {"n_chains", s.n_chains}, {"seed", s.seed}, {"threads", s.threads}, {"exact_affine", s.exact_affine}};
}

FixedPointConfig read_fp(Reader r) {
    FixedPointConfig f;
    f.max_iter = static_cast<int>(r.integer("max_iter", f.max_iter));
    f.w1_tol = r.num("w1_tol", f.w1_tol);
    f.damping = r.num("damping", f.damping);
    f.auto_damping = r.boolean("auto_damping", f.auto_damping);
    f.beta_star = r.num("beta_star", f.beta_star);
    f.final_noise_floor = r.boolean("final_noise_floor", f.final_noise_floor);
    r.done();
    return f;
}

json write_fp(const FixedPointConfig& f) {
    return {{"max_iter", f.max_iter},         {"w1_tol", f.w1_tol},       {"damping", f.damping},
            {"auto_damping", f.auto_damping}, {"beta_star", f.beta_star}, {"final_noise_floor", f.final_noise_floor}};
}

AppendixParams read_appendix(Reader r) {
    AppendixParams a;
    a.K = r.num("K", a.K);
    a.K1 = r.num("K1", a.K1);
    a.K2 = r.num("K2", a.K2);
    a.K3 = r.num("K3", a.K3);
    a.kappa = r.num("kappa", a.kappa);
    a.l0 = r.num("l0", a.l0);
    a.C_V = r.num("C_V", a.C_V);
    a.lambda_V = r.num("lambda_V", a.lambda_V);
    a.beta0 = r.num("beta0", a.beta0);
    if (auto s = r.sub("sigma")) {
        a.sigma.r = s->vec("r", {});
        a.sigma.value = s->vec("value", {});
        s->done();
    }
    r.done();
    return a;
}

json write_appendix(const AppendixParams& a) {
    return {{"K", a.K},         {"K1", a.K1},         {"K2", a.K2},       {"K3", a.K3},
            {"kappa", a.kappa}, {"l0", a.l0},         {"C_V", a.C_V},     {"lambda_V", a.lambda_V},
            {"beta0", a.beta0}, {"sigma", {{"r", a.sigma.r}, {"value", a.sigma.value}}}};
}

ConditionsBlock read_conditions(Reader r) {
    ConditionsBlock c;
    c.beta = r.num("beta", c.beta);
    if (r.has("eps")) c.eps = r.num("eps", 0.0);
    if (r.has("r0")) c.r0 = r.num("r0", 0.0);
    c.M_star = r.num("M_star", c.M_star);
    c.measure_moment = r.num("measure_moment", c.measure_moment);
    if (auto a = r.sub("appendix")) c.appendix = read_appendix(*a);
    c.ct_K1 = r.num("ct_K1", c.ct_K1);
    c.ct_times = r.vec("ct_times", c.ct_times);
    r.done();
    return c;
}

json write_conditions(const ConditionsBlock& c) {
    json j = {{"beta", c.beta}, {"M_star", c.M_star}, {"measure_moment", c.measure_moment},
              {"ct_K1", c.ct_K1}, {"ct_times", c.ct_times}};
    if (c.eps) j["eps"] = *c.eps;
    if (c.r0) j["r0"] = *c.r0;
    if (c.appendix) j["appendix"] = write_appendix(*c.appendix);
    return j;
}

}  // namespace

LevyKind levy_kind_from_name(const std::string& s) {
    if (s == "isotropic_stable" || s == "stable") return LevyKind::IsotropicStable;
    if (s == "truncated_stable") return LevyKind::TruncatedStable;
    if (s == "compound_poisson") return LevyKind::CompoundPoisson;
    fail(ErrorCode::UnsupportedFamily,
         "unknown levy kind '" + s + "' (isotropic_stable, truncated_stable, compound_poisson)");
}

const char* levy_kind_name(LevyKind k) {
    switch (k) {
        case LevyKind::IsotropicStable: return "isotropic_stable";
        case LevyKind::TruncatedStable: return "truncated_stable";
        case LevyKind::CompoundPoisson: return "compound_poisson";
    }
    return "?";
}

DriftFamily drift_family_from_name(const std::string& s) {
    if (s == "double_well") return DriftFamily::DoubleWell1D;
    if (s == "two_well") return DriftFamily::SymmetricTwoWell;
    if (s == "asymmetric_cubic") return DriftFamily::AsymmetricCubic1D;
    if (s == "mean_field_ou") return DriftFamily::MeanFieldOU;
    fail(ErrorCode::UnsupportedFamily,
         "unknown drift family '" + s + "' (double_well, two_well, asymmetric_cubic, mean_field_ou)");
}

std::vector<double> parse_scan(const std::string& spec) {
    double lo, hi, step;
    char c1, c2;
    std::istringstream in(spec);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
        fail(ErrorCode::InvalidArgument, "scan '" + spec + "' must have the form lo:hi:step");
    require(step > 0.0 && hi >= lo, "scan needs step > 0 and hi >= lo");
    std::vector<double> out;
    long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

void ExperimentConfig::validate() const {
    levy.validate();
    drift.validate();
    sim.validate();
    fixed_point.validate();
    if (levy.dim != drift.dim())
        fail(ErrorCode::DimensionMismatch, "levy.dim = " + std::to_string(levy.dim) + " but the drift has dimension " +
                                               std::to_string(drift.dim()));
    for (std::size_t i = 0; i < seeds.size(); ++i)
        if (static_cast<int>(seeds[i].size()) != drift.dim())
            fail(ErrorCode::DimensionMismatch, "seeds[" + std::to_string(i) + "] has the wrong dimension");
    require(init.kind == "dirac" || init.kind == "gaussian", "init.kind must be dirac or gaussian");
    if (init.kind == "gaussian") require(init.std > 0.0 && init.atoms >= 0, "gaussian init needs std > 0 and atoms >= 0");
    require(sample.n >= 2 && sample.dt > 0.0, "sample needs n >= 2 and dt > 0");
    require(self_consistent.gamma > 0.0 && self_consistent.beta > 0.0, "self_consistent gamma and beta must be positive");
    require(self_consistent.grid_n >= 1000, "self_consistent.grid_n must be at least 1000");
    require(self_consistent.h_points >= 2, "self_consistent.h_points must be at least 2");
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::InvalidArgument, std::string("config: malformed JSON: ") + e.what());
    }
    Reader r(j, "");
    ExperimentConfig c;
    if (auto s = r.sub("levy")) c.levy = read_levy(*s);
    if (auto s = r.sub("drift")) c.drift = read_drift(*s);
    auto sim = r.sub("sim");
    if (!sim) bad("sim", "required (sim.seed fixes every random stream)");
    c.sim = read_sim(*sim);
    if (auto s = r.sub("fixed_point")) c.fixed_point = read_fp(*s);
    c.fixed_point.sim = c.sim;
    c.seeds = r.mat("seeds");
    if (auto s = r.sub("init")) {
        c.init.kind = s->str("kind", c.init.kind);
        c.init.std = s->num("std", c.init.std);
        c.init.atoms = static_cast<int>(s->integer("atoms", c.init.atoms));
        s->done();
    }
    if (auto s = r.sub("conditions")) c.conditions = read_conditions(*s);
    if (auto s = r.sub("sample")) {
        c.sample.n = s->integer("n", c.sample.n);
        c.sample.dt = s->num("dt", c.sample.dt);
        s->done();
    }
    if (auto s = r.sub("self_consistent")) {
        auto& o = c.self_consistent;
        o.gamma = s->num("gamma", o.gamma);
        o.beta = s->num("beta", o.beta);
        o.beta_scan = s->vec("beta_scan", o.beta_scan);
        o.m_max = s->num("m_max", o.m_max);
        o.grid_n = static_cast<int>(s->integer("grid_n", o.grid_n));
        o.tol = s->num("tol", o.tol);
        o.h_points = static_cast<int>(s->integer("h_points", o.h_points));
        s->done();
    }
    c.output_dir = r.str("output_dir", c.output_dir);
    r.done();
    c.validate();
    return c;
}

std::string resolved_config_json(const ExperimentConfig& c) {
    json j;
    j["levy"] = write_levy(c.levy);
    j["drift"] = write_drift(c.drift);
    j["sim"] = write_sim(c.sim);
    j["fixed_point"] = write_fp(c.fixed_point);
    j["seeds"] = c.seeds;
    j["init"] = {{"kind", c.init.kind}, {"std", c.init.std}, {"atoms", c.init.atoms}};
    j["conditions"] = write_conditions(c.conditions);
    j["sample"] = {{"n", c.sample.n}, {"dt", c.sample.dt}};
    const auto& o = c.self_consistent;
    j["self_consistent"] = {{"gamma", o.gamma},   {"beta", o.beta}, {"beta_scan", o.beta_scan}, {"m_max", o.m_max},
                            {"grid_n", o.grid_n}, {"tol", o.tol},   {"h_points", o.h_points}};
    j["output_dir"] = c.output_dir;
    return j.dump(2) + "\n";
}

}  // namespace lmv
