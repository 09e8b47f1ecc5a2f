#include <doctest.h>

#include <cmath>
#include <map>

#include "levymv/errors.hpp"
#include "levymv/measures.hpp"
#include "levymv/rng.hpp"
#include "oracles.hpp"

using namespace lmv;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

std::vector<double> draw(Stream& r, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = 4.0 * r.uniform() - 2.0;
    return v;
}

}  // namespace

TEST_CASE("construction validates weights and shape") {
    CHECK(code_of([] { w1(EmpiricalMeasure(1, {}), EmpiricalMeasure::dirac({0.0})); }) == ErrorCode::EmptyMeasure);
    CHECK(code_of([] { EmpiricalMeasure(1, {0.0, 1.0}, {1.5, -0.5}); }) != ErrorCode::Ok);
    CHECK(code_of([] { EmpiricalMeasure(1, {0.0, 1.0}, {0.5, 0.6}); }) != ErrorCode::Ok);
    CHECK(code_of([] { EmpiricalMeasure(2, {0.0, 1.0, 2.0}); }) != ErrorCode::Ok);
    EmpiricalMeasure m(1, {0.0, 2.0}, {0.25, 0.75});
    CHECK(m.weights()[1] == doctest::Approx(0.75));
    CHECK(m.mean()[0] == doctest::Approx(1.5));
    CHECK(m.variance()[0] == doctest::Approx(0.75));
    CHECK(moment(m, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("w1 on the line equals brute-force assignment") {
    Stream r(2024, 0);
    for (int k = 0; k < 200; ++k) {
        int n = 1 + static_cast<int>(r.uniform() * 6.0);
        auto x = draw(r, n), y = draw(r, n);
        CHECK(std::abs(w1(EmpiricalMeasure(1, x), EmpiricalMeasure(1, y)) - oracle::w1_assignment(x, y)) < 1e-12);
    }
}

TEST_CASE("w1 metric axioms and translation") {
    Stream r(7, 1);
    for (int k = 0; k < 100; ++k) {
        auto a = EmpiricalMeasure(1, draw(r, 5)), b = EmpiricalMeasure(1, draw(r, 3)), c = EmpiricalMeasure(1, draw(r, 4));
        double ab = w1(a, b), ba = w1(b, a), bc = w1(b, c), ac = w1(a, c);
        CHECK(w1(a, a) == 0.0);
        CHECK(ab >= 0.0);
        CHECK(std::abs(ab - ba) < 1e-14);
        CHECK(ac <= ab + bc + 1e-12);
    }
    EmpiricalMeasure a(1, {0.0, 1.0, 5.0});
    EmpiricalMeasure s(1, {0.3, 1.3, 5.3});
    CHECK(w1(a, s) == doctest::Approx(0.3));
    CHECK(code_of([&] { w1(a, EmpiricalMeasure(2, {0.0, 0.0})); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("w1 with unequal weights") {
    // Mass 1/4 moves from 0 to 1: cost 1/4.
    CHECK(w1(EmpiricalMeasure(1, {0.0, 1.0}, {0.5, 0.5}), EmpiricalMeasure(1, {0.0, 1.0}, {0.25, 0.75})) ==
          doctest::Approx(0.25));
}

TEST_CASE("sliced w1 in two dimensions") {
    EmpiricalMeasure a(2, {0.0, 0.0, 1.0, 1.0});
    EmpiricalMeasure b(2, {0.0, 0.0, 1.0, 1.0});
    CHECK(w1(a, b) == doctest::Approx(0.0));
    EmpiricalMeasure s(2, {2.0, 0.0, 3.0, 1.0});
    double d = w1(a, s);
    CHECK(d > 0.0);
    CHECK(d <= 2.0 + 1e-12);
}

TEST_CASE("weighted_tv on shared atoms equals the discrete closed form") {
    Stream r(99, 0);
    for (int k = 0; k < 50; ++k) {
        const double beta0 = 0.5 + r.uniform();
        std::vector<double> pts{-2.0, -0.5, 0.0, 1.0, 3.5};
        std::vector<double> wm(5), wn(5);
        double sm = 0.0, sn = 0.0;
        for (int i = 0; i < 5; ++i) {
            sm += wm[i] = 0.1 + r.uniform();
            sn += wn[i] = 0.1 + r.uniform();
        }
        for (int i = 0; i < 5; ++i) {
            wm[i] /= sm;
            wn[i] /= sn;
        }
        EmpiricalMeasure mu(1, pts, wm), nu(1, pts, wn);
        // Ascending support order, as the atoms are visited.
        double want = 0.0, tv_want = 0.0;
        for (int i = 0; i < 5; ++i) {
            double d = std::abs(mu.weights()[i] - nu.weights()[i]);
            want += d * std::pow(1.0 + pts[i] * pts[i], 0.5 * beta0);
            tv_want += d;
        }
        CHECK(weighted_tv(mu, nu, beta0) == want);
        CHECK(tv(mu, nu) == tv_want);
    }
}

TEST_CASE("concentration, mixtures and resampling") {
    EmpiricalMeasure m(1, {-1.0, 0.0, 0.1, 3.0});
    CHECK(concentration(m, {0.0}, 0.5) == doctest::Approx(0.5));
    auto mix = mixture(EmpiricalMeasure::dirac({0.0}), EmpiricalMeasure::dirac({1.0}), 0.25);
    CHECK(mix.mean()[0] == doctest::Approx(0.25));
    auto rs = systematic_resample(EmpiricalMeasure(1, {0.0, 1.0}, {0.75, 0.25}), 8);
    CHECK(rs.size() == 8);
    CHECK(rs.mean()[0] == doctest::Approx(0.25));
}

TEST_CASE("two-sample KS") {
    std::vector<double> a, b;
    Stream r(1, 0);
    for (int i = 0; i < 2000; ++i) {
        a.push_back(r.normal());
        b.push_back(r.normal());
    }
    CHECK(ks_two_sample(a, a).statistic == 0.0);
    CHECK(ks_two_sample(a, b).p_value > 0.01);
    for (auto& x : b) x += 0.5;
    CHECK(ks_two_sample(a, b).p_value < 1e-6);
}

TEST_CASE("csv round trip keeps every bit") {
    EmpiricalMeasure m(2, {0.1, -1.0 / 3.0, 1e-300, 2.5e10}, {0.3, 0.7});
    auto back = measure_from_csv(measure_to_csv(m));
    CHECK(back.points() == m.points());
    CHECK(back.weights() == m.weights());
}
