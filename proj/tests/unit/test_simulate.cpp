#include <doctest.h>

#include <cmath>

#include "levymv/errors.hpp"
#include "levymv/simulate.hpp"

using namespace lmv;

namespace {

LevyMeasureSpec brownian() {
    LevyMeasureSpec s;
    s.alpha = 2.0;
    return s;
}

SimConfig small(double T = 50.0) {
    SimConfig c;
    c.dt = 1e-2;
    c.T = T;
    c.burn_in = 0.2;
    c.thin = 5;
    c.n_chains = 100;
    c.seed = 3;
    return c;
}

}  // namespace

TEST_CASE("kept states per chain") {
    SimConfig c = small(50.0);
    CHECK(c.kept_per_chain() == static_cast<long>(0.8 * 50.0 / (1e-2 * 5)));
    c.thin = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("frozen OU: stationary law N(m / lambda, 1 / (2 lambda))") {
    // With frozen mean m the reference SDE is dX = (-lambda X + m) dt + dW.
    auto D = DriftSpec::mean_field_ou(2.0);
    auto frozen = EmpiricalMeasure::dirac({1.0});
    for (bool exact : {true, false}) {
        SimConfig c = small(100.0);
        c.exact_affine = exact;
        auto occ = frozen_trajectory(D, frozen, brownian(), EmpiricalMeasure::dirac({0.0}), c);
        double se = occ.mean_se()[0];
        CAPTURE(exact);
        CHECK(std::abs(occ.measure.mean()[0] - 0.5) < 4.0 * se + 1e-3);
        // Euler variance: 1 / (lambda (2 - lambda dt)).
        CHECK(occ.measure.variance()[0] == doctest::Approx(1.0 / (2.0 * (2.0 - 0.02))).epsilon(0.05));
    }
}

TEST_CASE("exact affine path and stepping agree in distribution") {
    auto D = DriftSpec::mean_field_ou(1.0);
    auto frozen = EmpiricalMeasure::dirac({0.5});
    SimConfig a = small(200.0), b = small(200.0);
    b.exact_affine = false;
    b.seed = 4;
    auto oa = frozen_trajectory(D, frozen, brownian(), EmpiricalMeasure::dirac({2.0}), a);
    auto ob = frozen_trajectory(D, frozen, brownian(), EmpiricalMeasure::dirac({2.0}), b);
    double se = std::hypot(oa.mean_se()[0], ob.mean_se()[0]);
    CHECK(std::abs(oa.measure.mean()[0] - ob.measure.mean()[0]) < 4.0 * se);
    CHECK(oa.measure.variance()[0] == doctest::Approx(ob.measure.variance()[0]).epsilon(0.05));
    CHECK(oa.measure.size() == ob.measure.size());
}

TEST_CASE("runs are reproducible and seeds matter") {
    LevyMeasureSpec L;
    L.alpha = 1.5;
    auto D = DriftSpec::double_well(1.0, -1.0, 1.0, 0.5);
    auto mu = EmpiricalMeasure::dirac({0.0});
    SimConfig c = small(20.0);
    auto x = frozen_trajectory(D, mu, L, mu, c);
    auto y = frozen_trajectory(D, mu, L, mu, c);
    CHECK(x.measure.points() == y.measure.points());
    c.seed = 4;
    auto z = frozen_trajectory(D, mu, L, mu, c);
    CHECK(z.measure.points() != x.measure.points());
}

TEST_CASE("thread count does not change the result") {
    LevyMeasureSpec L;
    L.alpha = 1.5;
    auto D = DriftSpec::double_well(1.0, -1.0, 1.0, 0.5);
    auto mu = EmpiricalMeasure::dirac({0.0});
    SimConfig c = small(20.0);
    auto one = frozen_trajectory(D, mu, L, mu, c);
    c.threads = 3;
    auto three = frozen_trajectory(D, mu, L, mu, c);
    CHECK(one.measure.points() == three.measure.points());
}

TEST_CASE("particle system: OU mean is conserved, snapshots land on requested times") {
    auto D = DriftSpec::mean_field_ou(1.0);
    SimConfig c = small(10.0);
    c.n_chains = 500;
    auto init = EmpiricalMeasure(1, std::vector<double>(500, 1.0));
    auto snaps = particle_system(D, brownian(), init, c, {2.5, 10.0});
    REQUIRE(snaps.size() == 2);
    CHECK(snaps[0].t == doctest::Approx(2.5));
    CHECK(snaps[1].t == doctest::Approx(10.0));
    // lambda = 1: d mean = (-mean + mean) dt + noise.
    CHECK(std::abs(snaps[1].particles.mean()[0] - 1.0) < 5.0 * std::sqrt(10.0 / 500.0));
    auto csv = snapshots_to_csv(snaps);
    CHECK(csv.rfind("chain_id,t,x_1\n", 0) == 0);
}

TEST_CASE("blowup is a numerical error") {
    auto D = DriftSpec::mean_field_ou(1e-3);
    SimConfig c = small(10.0);
    try {
        frozen_trajectory(D, EmpiricalMeasure::dirac({1e9}), brownian(), EmpiricalMeasure::dirac({1e9}), c);
        FAIL("expected Blowup");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Blowup);
    }
}
