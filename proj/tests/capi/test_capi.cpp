#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "levymv/levymv.h"

TEST_CASE("status names and classes") {
    CHECK(std::string(lmv_status_name(LMV_OK)) == "Ok");
    CHECK(std::string(lmv_status_name(LMV_BLOWUP)) == "Blowup");
    CHECK(std::string(lmv_status_name(LMV_INTERNAL)) == "Internal");
    CHECK(lmv_status_is_numerical(LMV_BLOWUP) == 1);
    CHECK(lmv_status_is_numerical(LMV_INVALID_ARGUMENT) == 0);
    CHECK(std::string(lmv_version()) == "0.1.0");
}

TEST_CASE("config handles and errors") {
    lmv_config* cfg = nullptr;
    CHECK(lmv_config_parse("{\"sim\": {\"seed\": 1}, \"levy\": {\"alhpa\": 1}}", &cfg) == LMV_INVALID_ARGUMENT);
    CHECK(cfg == nullptr);
    CHECK(std::string(lmv_last_error()).find("levy.alhpa") != std::string::npos);
    CHECK(lmv_config_parse(nullptr, &cfg) == LMV_INVALID_ARGUMENT);

    REQUIRE(lmv_config_default(&cfg) == LMV_OK);
    CHECK(std::string(lmv_last_error()).empty());
    CHECK(lmv_config_set_threads(cfg, 0) == LMV_INVALID_ARGUMENT);
    CHECK(lmv_config_set_beta_scan(cfg, "2:1:0.5") == LMV_INVALID_ARGUMENT);
    CHECK(lmv_config_set_beta_scan(cfg, "0.5:1:0.5") == LMV_OK);
    CHECK(lmv_config_set_output_dir(cfg, "x") == LMV_OK);
    CHECK(std::string(lmv_config_output_dir(cfg)) == "x");
    char* js = nullptr;
    REQUIRE(lmv_config_resolved_json(cfg, &js) == LMV_OK);
    CHECK(std::strstr(js, "\"beta_scan\"") != nullptr);
    lmv_string_free(js);

    lmv_result* res = nullptr;
    CHECK(lmv_run(cfg, "bogus", &res) == LMV_INVALID_ARGUMENT);
    REQUIRE(lmv_run(cfg, "selfconsistent", &res) == LMV_OK);
    REQUIRE(lmv_result_artifact_count(res) >= 2);
    CHECK(std::string(lmv_result_artifact_name(res, 0)) == "report.json");
    size_t len = 0;
    const char* data = lmv_result_artifact_data(res, 0, &len);
    CHECK(std::string(data, len) == lmv_result_report(res));
    CHECK(lmv_result_artifact_name(res, 1000) == nullptr);
    lmv_result_free(res);
    lmv_config_free(cfg);
    lmv_config_free(nullptr);
}

TEST_CASE("levy handles") {
    lmv_levy* l = nullptr;
    CHECK(lmv_levy_create("isotropic_stable", 2.5, 1.0, 1, 1.0, 1.0, 1.0, &l) == LMV_INVALID_ARGUMENT);
    REQUIRE(lmv_levy_create("isotropic_stable", 1.5, 1.0, 1, 1.0, 1.0, 1.0, &l) == LMV_OK);
    double v = 0.0;
    CHECK(lmv_levy_tail_moment(l, 1.5, 1, 1.0, &v) == LMV_DIVERGENT_MOMENT);
    CHECK(lmv_levy_tail_moment(l, 1.0, 1, 0.0, &v) == LMV_INVALID_REGION);
    REQUIRE(lmv_levy_tail_moment(l, 1.0, 1, 2.0, &v) == LMV_OK);
    CHECK(v > 0.0);
    CHECK(lmv_levy_overlap_J(l, 1.0, &v) == LMV_OK);
    CHECK(v > 0.0);
    std::vector<double> a(1000), b(1000);
    REQUIRE(lmv_levy_sample(l, 0.1, 7, 0, a.size(), a.data()) == LMV_OK);
    REQUIRE(lmv_levy_sample(l, 0.1, 7, 0, b.size(), b.data()) == LMV_OK);
    CHECK(a == b);
    lmv_levy_free(l);
}

TEST_CASE("measure handles") {
    const double x[] = {0.0, 1.0, 5.0}, y[] = {0.3, 1.3, 5.3};
    lmv_measure *a = nullptr, *b = nullptr, *c = nullptr;
    REQUIRE(lmv_measure_create(1, 3, x, nullptr, &a) == LMV_OK);
    REQUIRE(lmv_measure_create(1, 3, y, nullptr, &b) == LMV_OK);
    double w = 0.0;
    REQUIRE(lmv_measure_w1(a, b, &w) == LMV_OK);
    CHECK(w == doctest::Approx(0.3));
    CHECK(lmv_measure_create(1, 0, x, nullptr, &c) == LMV_EMPTY_MEASURE);
    const double p2[] = {0.0, 0.0};
    REQUIRE(lmv_measure_create(2, 1, p2, nullptr, &c) == LMV_OK);
    CHECK(lmv_measure_w1(a, c, &w) == LMV_DIMENSION_MISMATCH);
    REQUIRE(lmv_measure_moment(a, 1.0, &w) == LMV_OK);
    CHECK(w == doctest::Approx(2.0));
    lmv_measure_free(a);
    lmv_measure_free(b);
    lmv_measure_free(c);
}

TEST_CASE("self-consistent entry points") {
    double h = 1.0;
    REQUIRE(lmv_h(2.0, 1.0, 0.0, &h) == LMV_OK);
    CHECK(std::abs(h) < 1e-10);
    int n = 0;
    REQUIRE(lmv_root_count(2.0, 3.0, 0.0, 2000, &n) == LMV_OK);
    CHECK(n == 3);
    CHECK(lmv_root_count(-1.0, 3.0, 0.0, 2000, &n) == LMV_INVALID_ARGUMENT);
    double bc = 0.0;
    int above = -1;
    REQUIRE(lmv_beta_c(4.0, 1e-3, &bc, &above) == LMV_OK);
    CHECK(above == 1);
}
