#include <doctest.h>

#include <cmath>

#include "levymv/drift.hpp"
#include "levymv/errors.hpp"

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

EmpiricalMeasure two_atoms(double a, double b) { return EmpiricalMeasure(1, {a, b}); }

}  // namespace

TEST_CASE("double well drift") {
    auto D = DriftSpec::double_well(1.5, -1.0, 2.0, 0.7);
    auto mu = two_atoms(-1.0, 3.0);  // mean 1
    for (double x : {-2.0, 0.3, 1.7}) {
        double want = -1.5 * x * (x + 1.0) * (x - 2.0) - 0.7 * (x - 1.0);
        CHECK(eval_drift(D, {x}, mu)[0] == doctest::Approx(want).epsilon(1e-14));
    }
    CHECK(code_of([] { DriftSpec::double_well(1.0, 1.0, 2.0, 0.1).validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("symmetric two-well drift in two dimensions") {
    auto D = DriftSpec::two_well(1.0, {1.0, 0.0}, {-1.0, 0.0}, 0.3);
    EmpiricalMeasure mu(2, {0.5, 0.5});
    std::vector<double> x{0.2, -0.4};
    double n1 = std::pow(0.2 - 1.0, 2) + 0.16, n2 = std::pow(0.2 + 1.0, 2) + 0.16;
    auto b = eval_drift(D, x, mu);
    CHECK(b[0] == doctest::Approx(-0.5 * ((0.2 - 1.0) * n2 + (0.2 + 1.0) * n1) - 0.3 * (0.2 - 0.5)));
    CHECK(b[1] == doctest::Approx(-0.5 * (-0.4 * n2 + -0.4 * n1) - 0.3 * (-0.4 - 0.5)));
    // At a well with kappa = 0 the drift vanishes.
    auto D0 = DriftSpec::two_well(1.0, {1.0, 0.0}, {-1.0, 0.0}, 0.0);
    auto b0 = eval_drift(D0, {1.0, 0.0}, mu);
    CHECK(b0[0] == 0.0);
    CHECK(b0[1] == 0.0);
}

TEST_CASE("asymmetric cubic drift uses |y| and g averages") {
    GSpec g{GKind::TanhScaled, 0.5, 1.0, 0.0};
    auto D = DriftSpec::asymmetric_cubic(1.0, 0.2, 1.4, g);
    auto mu = two_atoms(-2.0, 1.0);
    double mabs = 1.5, mg = 0.5 * (0.5 * std::tanh(-2.0) + 0.5 * std::tanh(1.0));
    for (double x : {-1.5, 0.0, 2.0}) {
        double want = -x * (x - 1.0) * (x + 2.0) + 0.2 * (std::pow(1.0 + x * x, 0.2) * mabs + mg);
        CHECK(eval_drift(D, {x}, mu)[0] == doctest::Approx(want).epsilon(1e-14));
    }
    CHECK(g.sup_abs() == 0.5);
    GSpec c{GKind::Cosine, 2.0, 3.0, 0.5};
    CHECK(c(1.0) == doctest::Approx(2.0 * std::cos(3.5)));
}

TEST_CASE("mean-field OU drift and measure checks") {
    auto D = DriftSpec::mean_field_ou(2.0);
    auto mu = two_atoms(0.0, 1.0);
    CHECK(eval_drift(D, {3.0}, mu)[0] == doctest::Approx(-6.0 + 0.5));
    CHECK(code_of([&] { eval_drift(D, {0.0}, EmpiricalMeasure(2, {0.0, 0.0})); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { eval_drift(D, {0.0, 1.0}, mu); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("A1 parameter regimes") {
    // beta* (1 - gamma1) > theta3 theta4: case (i).
    A1Params a(1.0, 1.0, 0.5, 3.0, 1.0, 1.0, 1.0, 1.5);
    CHECK(a.beta_star == doctest::Approx(3.5));
    CHECK(a.gamma1 == doctest::Approx(0.5 / 3.5));
    CHECK(a.gamma2 == doctest::Approx(0.5 / 3.5));
    CHECK(a.regime == A1Case::CaseI);
    // Equality with lambda1 > lambda2: case (ii).
    const double t4 = a.beta_star * (1.0 - a.gamma1);
    A1Params b(1.0, 1.0, 0.5, 3.0, 1.0, 1.0, t4, 1.5);
    CHECK(b.regime == A1Case::CaseII);
    A1Params c(1.0, 0.5, 1.0, 3.0, 1.0, 1.0, t4, 1.5);
    CHECK(c.regime == A1Case::None);
    CHECK(code_of([&] { c.require_case(); }) == ErrorCode::CaseViolation);
    CHECK(code_of([] { A1Params(1.0, 1.0, 0.5, 0.1, 0.0, 0.5, 1.0, 1.0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { A1Params(1.0, 1.0, 0.5, 1.0, 2.5, 0.5, 1.0, 1.0); }) == ErrorCode::InvalidArgument);
    CHECK(default_beta(1.5) == 1.25);
}

TEST_CASE("built-in families satisfy their A1 inequality on the canonical grid") {
    GSpec g{GKind::TanhScaled, 0.5, 1.0, 0.0};
    for (const auto& D : {DriftSpec::double_well(1.0, -1.0, 1.0, 4.5), DriftSpec::asymmetric_cubic(1.0, 0.05, 1.2, g),
                          DriftSpec::mean_field_ou(2.0), DriftSpec::two_well(1.0, {1.0, 0.0}, {-1.0, 0.0}, 0.5)}) {
        CAPTURE(D.family_name());
        A1Params p = lyapunov_params(D, 1.25);
        auto rep = verify_E12(D, p, canonical_grid(D.dim()), canonical_measures(D.dim()));
        CHECK(rep.ok);
        CHECK(rep.worst_slack >= 0.0);
    }
    CHECK(lyapunov_params(DriftSpec::double_well(1.0, -1.0, 1.0, 4.5), 1.5).regime == A1Case::CaseI);
}
