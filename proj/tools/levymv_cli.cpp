// Command-line front end. Talks to the library only through levymv.h.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "levymv/levymv.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCondition = 4;

struct Options {
    std::string config_path;
    std::string output_dir;
    int threads = 0;
    double gamma = 0.0;
    double beta = 0.0;
    std::string beta_scan;
    bool strict = false;
    bool quiet = false;
};

// One JSON object per line on stderr.
void diag(const std::string& level, const std::string& code, const std::string& message) {
    nlohmann::json j{{"level", level}, {"code", code}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

int status_exit(lmv_status s) {
    diag("error", lmv_status_name(s), lmv_last_error());
    return lmv_status_is_numerical(s) ? kExitNumerical : kExitValidation;
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

std::string resolve_output_dir(const Options& o, const lmv_config* cfg) {
    if (!o.output_dir.empty()) return o.output_dir;
    std::string from_cfg = lmv_config_output_dir(cfg);
    if (!from_cfg.empty()) return from_cfg;
    if (const char* env = std::getenv("LEVYMV_OUTPUT_DIR"); env && *env) return env;
    return "out";
}

int run(const std::string& sub, const Options& o, bool config_required) {
    lmv_config* cfg = nullptr;
    lmv_status s;
    if (o.config_path.empty()) {
        if (config_required) {
            diag("error", "InvalidArgument", sub + " requires a configuration file");
            return kExitValidation;
        }
        s = lmv_config_default(&cfg);
    } else {
        std::string text;
        if (!read_file(o.config_path, text)) {
            diag("error", "Io", "cannot read " + o.config_path);
            return kExitValidation;
        }
        s = lmv_config_parse(text.c_str(), &cfg);
    }
    if (s != LMV_OK) return status_exit(s);

    auto cleanup = [&](int code) {
        lmv_config_free(cfg);
        return code;
    };
    if (o.threads > 0 && (s = lmv_config_set_threads(cfg, o.threads)) != LMV_OK) return cleanup(status_exit(s));
    if (o.gamma > 0.0 && (s = lmv_config_set_gamma(cfg, o.gamma)) != LMV_OK) return cleanup(status_exit(s));
    if (o.beta > 0.0 && (s = lmv_config_set_beta(cfg, o.beta)) != LMV_OK) return cleanup(status_exit(s));
    if (!o.beta_scan.empty() && (s = lmv_config_set_beta_scan(cfg, o.beta_scan.c_str())) != LMV_OK)
        return cleanup(status_exit(s));
    const std::string out_dir = resolve_output_dir(o, cfg);
    if ((s = lmv_config_set_output_dir(cfg, out_dir.c_str())) != LMV_OK) return cleanup(status_exit(s));

    lmv_result* res = nullptr;
    if ((s = lmv_run(cfg, sub.c_str(), &res)) != LMV_OK) return cleanup(status_exit(s));

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        diag("error", "Io", "cannot create " + out_dir + ": " + ec.message());
        lmv_result_free(res);
        return cleanup(kExitValidation);
    }
    const size_t n = lmv_result_artifact_count(res);
    for (size_t i = 0; i < n; ++i) {
        size_t len = 0;
        const char* data = lmv_result_artifact_data(res, i, &len);
        const auto path = std::filesystem::path(out_dir) / lmv_result_artifact_name(res, i);
        std::ofstream f(path, std::ios::binary);
        f.write(data, static_cast<std::streamsize>(len));
        if (!f) {
            diag("error", "Io", "cannot write " + path.string());
            lmv_result_free(res);
            return cleanup(kExitValidation);
        }
    }
    if (!o.quiet) std::cout << lmv_result_report(res) << "\n";
    const bool failed = lmv_result_condition_failed(res) != 0;
    lmv_result_free(res);
    if (failed) diag(o.strict ? "error" : "warning", "ConditionFailed", "a checked condition does not hold");
    return cleanup(failed && o.strict ? kExitCondition : kExitOk);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invariant measures of Levy-driven mean-field diffusions"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(lmv_version()));

    Options o;
    app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("-o,--output-dir", o.output_dir, "Output directory (default: config, $LEVYMV_OUTPUT_DIR, out)");
    app.add_flag("--strict", o.strict, "Exit 4 when a checked condition fails");
    app.add_flag("-q,--quiet", o.quiet, "Do not print the report");

    struct Sub {
        const char* name;
        const char* help;
        bool config_required;
    };
    const Sub subs[] = {
        {"sample", "Sample Levy increments and check the characteristic function", true},
        {"simulate", "Simulate the interacting particle system", true},
        {"fixpoint", "Iterate the frozen-measure map to a fixed point", true},
        {"multiplicity", "Search for distinct stationary distributions", true},
        {"check", "Check the sufficient conditions for the configured model", true},
        {"selfconsistent", "Self-consistency equation in the gradient case", false},
        {"constants", "Compute the quantitative constants", true},
    };
    std::string chosen;
    bool config_required = true;
    for (const auto& s : subs) {
        auto* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
        if (std::string(s.name) == "selfconsistent") {
            sc->add_option("--gamma", o.gamma, "Interaction strength")->check(CLI::PositiveNumber);
            sc->add_option("--beta", o.beta, "Quadratic coefficient")->check(CLI::PositiveNumber);
            sc->add_option("--beta-scan", o.beta_scan, "Root-count scan lo:hi:step");
        }
        sc->callback([&, s] {
            chosen = s.name;
            config_required = s.config_required;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }
    return run(chosen, o, config_required);
}
