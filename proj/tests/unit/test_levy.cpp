#include <doctest.h>

#include <cmath>
#include <vector>

#include "levymv/errors.hpp"
#include "levymv/levy.hpp"
#include "oracles.hpp"

using namespace lmv;

namespace {

LevyMeasureSpec stable(double alpha, double scale = 1.0, int dim = 1) {
    LevyMeasureSpec s;
    s.alpha = alpha;
    s.scale = scale;
    s.dim = dim;
    return s;
}

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("stable constant matches the gamma-function oracle") {
    for (int d : {1, 2, 3})
        for (double a : {0.5, 1.0, 1.5, 1.8, 1.95})
            CHECK(stable_constant(d, a) == doctest::Approx(oracle::stable_c(d, a)).epsilon(1e-13));
    // Cauchy: density 1 / (pi z^2).
    CHECK(stable_constant(1, 1.0) == doctest::Approx(1.0 / oracle::kPi).epsilon(1e-14));
}

TEST_CASE("tail moments agree with radial quadrature") {
    for (int d : {1, 2, 3}) {
        for (double a : {0.8, 1.5, 1.8}) {
            auto s = stable(a, 0.7, d);
            for (double l : {0.5, 1.0, 3.0}) {
                double p = 0.5 * a;
                CHECK(tail_moment(s, p, Region::complement(l)) ==
                      doctest::Approx(oracle::tail_moment_quad(d, a, 0.7, p, l)).epsilon(1e-8));
                CHECK(tail_moment(s, 2.0, Region::ball(l)) ==
                      doctest::Approx(oracle::ball_moment_quad(d, a, 0.7, 2.0, l)).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("divergent moments and bad regions are reported") {
    auto s = stable(1.5);
    CHECK(code_of([&] { tail_moment(s, 1.5, Region::complement(1.0)); }) == ErrorCode::DivergentMoment);
    CHECK(code_of([&] { tail_moment(s, 1.0, Region::ball(1.0)); }) == ErrorCode::DivergentMoment);
    CHECK(code_of([&] { tail_moment(s, 1.0, Region::complement(0.0)); }) == ErrorCode::InvalidRegion);
    CHECK(code_of([&] { stable(2.5).validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("shell additivity and scale covariance") {
    auto s = stable(1.3);
    for (double l : {0.3, 1.0, 2.5}) {
        double L = 4.0 * l;
        CHECK(shell_moment(s, 1.0, l, L) + tail_moment(s, 1.0, Region::complement(L)) ==
              doctest::Approx(tail_moment(s, 1.0, Region::complement(l))).epsilon(1e-12));
        CHECK(tail_moment(s, 2.0, Region::ball(l)) + shell_moment(s, 2.0, l, L) ==
              doctest::Approx(tail_moment(s, 2.0, Region::ball(L))).epsilon(1e-12));
    }
    for (double c : {0.25, 3.0}) {
        auto sc = stable(1.3, c);
        CHECK(tail_moment(sc, 0.6, Region::complement(1.7)) ==
              doctest::Approx(std::pow(c, 1.3) * tail_moment(s, 0.6, Region::complement(1.7))).epsilon(1e-12));
    }
}

TEST_CASE("truncated stable has no mass beyond the cutoff") {
    auto s = stable(1.5);
    s.kind = LevyKind::TruncatedStable;
    s.cutoff = 2.0;
    CHECK(tail_moment(s, 3.0, Region::complement(2.0)) == 0.0);
    CHECK(tail_moment(s, 3.0, Region::complement(1.0)) > 0.0);
    CHECK_FALSE(s.is_brownian());
}

TEST_CASE("compound Poisson tail mass is the rate times the gaussian tail") {
    LevyMeasureSpec s;
    s.kind = LevyKind::CompoundPoisson;
    s.rate = 3.0;
    s.jump_dist.std = 0.8;
    for (double l : {0.5, 1.0, 2.0})
        CHECK(tail_mass(s, l) == doctest::Approx(3.0 * std::erfc(l / (0.8 * std::sqrt(2.0)))).epsilon(1e-8));
    CHECK_FALSE(s.infinite_activity());
}

TEST_CASE("overlap J: one-dimensional closed form and monotonicity") {
    for (double a : {1.2, 1.5, 1.8}) {
        auto s = stable(a, 0.6);
        double prev = INFINITY;
        for (int i = 1; i <= 10; ++i) {
            double r = 0.2 * i;
            double j = J(s, r);
            CHECK(j == doctest::Approx(oracle::J_1d(a, 0.6, r)).epsilon(1e-8));
            CHECK(j <= prev);
            prev = j;
        }
    }
    CHECK(code_of([&] { overlap_mass(stable(1.5), {0.0}); }) == ErrorCode::InfiniteOverlap);
}

TEST_CASE("overlap in d >= 2 matches the one-dimensional projection") {
    // A far cutoff leaves the half-space mass within (cutoff / (r/2))^-alpha of the untruncated tail.
    for (int d : {2, 3}) {
        LevyMeasureSpec s;
        s.kind = LevyKind::TruncatedStable;
        s.alpha = 1.5;
        s.scale = 0.7;
        s.dim = d;
        s.cutoff = 1e5;
        for (double r : {0.5, 2.0}) CHECK(J(s, r) == doctest::Approx(oracle::J_1d(1.5, 0.7, r)).epsilon(1e-5));
        auto u = stable(1.5, 0.7);
        u.dim = d;
        CHECK(J(u, 1.0) == doctest::Approx(oracle::J_1d(1.5, 0.7, 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("increment sampler is a pure function of seed and stream") {
    auto s = stable(1.5);
    IncrementSampler inc(s, 0.1);
    Stream a(42, 3), b(42, 3), c(42, 4);
    double x = 0, y = 0, z = 0;
    int diff = 0;
    for (int i = 0; i < 100; ++i) {
        inc(a, &x);
        inc(b, &y);
        inc(c, &z);
        CHECK(x == y);
        diff += x != z;
    }
    CHECK(diff == 100);
}

TEST_CASE("empirical characteristic function of stable increments") {
    for (double a : {0.8, 1.5, 1.9}) {
        auto s = stable(a, 1.0);
        Stream rng(9, 0);
        const int n = 100000;
        std::vector<double> v(n);
        for (auto& x : v) sample_increment(s, 0.5, rng, &x);
        for (double t : {0.5, 1.0, 2.0}) {
            double emp = 0.0;
            for (double x : v) emp += std::cos(t * x);
            emp /= n;
            CHECK(std::abs(emp - std::exp(-0.5 * std::pow(t, a))) < 0.01);
        }
    }
}

TEST_CASE("Brownian increments have variance scale^2 dt") {
    auto s = stable(2.0, 0.5);
    IncrementSampler inc(s, 0.04);
    CHECK(inc.pure_gaussian());
    Stream rng(1, 0);
    double m2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double x;
        inc(rng, &x);
        m2 += x * x;
    }
    CHECK(m2 / n == doctest::Approx(0.25 * 0.04).epsilon(0.02));
}

TEST_CASE("sigma spec: shape, inverse integral, domination") {
    auto s = stable(1.5);
    const double kappa = 0.5, l0 = 2.0;
    const double cap = J(s, kappa) * kappa * kappa / (4.0 * l0);
    SigmaSpec sig{{0.0, 2.0 * l0}, {0.25 * cap, 0.5 * cap}};
    CHECK_NOTHROW(sig.validate_shape());
    CHECK_NOTHROW(sig.validate_h2(s, kappa));
    for (double t : {0.5, 2.0, 4.0})
        CHECK(sig.inverse_integral(t) == doctest::Approx(oracle::inv_sigma_integral(sig.r, sig.value, t)).epsilon(1e-10));

    SigmaSpec big{{0.0, 2.0 * l0}, {cap, 4.0 * cap}};
    CHECK(code_of([&] { big.validate_h2(s, kappa); }) == ErrorCode::SigmaViolatesH2);
    SigmaSpec convex{{0.0, 1.0, 4.0}, {0.1, 0.2, 0.9}};
    CHECK(code_of([&] { convex.validate_shape(); }) != ErrorCode::Ok);
    SigmaSpec shifted{{0.5, 4.0}, {0.1, 0.2}};
    CHECK(code_of([&] { shifted.validate_shape(); }) != ErrorCode::Ok);
}
