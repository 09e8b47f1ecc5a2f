#include <doctest.h>

#include <cmath>

#include "levymv/conditions.hpp"
#include "levymv/errors.hpp"
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

LevyMeasureSpec stable(double alpha, double scale = 1.0) {
    LevyMeasureSpec s;
    s.alpha = alpha;
    s.scale = scale;
    return s;
}

oracle::Params mirror(const A1Params& p) {
    return {p.C_b, p.lambda1, p.lambda2, p.theta1, p.theta2, p.theta3, p.theta4, p.beta};
}

}  // namespace

TEST_CASE("gamma_fn examples") {
    CHECK(gamma_fn(0.0, 7.0, 0.3) == doctest::Approx(0.7));
    CHECK(gamma_fn(0.0, 1e-3, 0.3) == gamma_fn(0.0, 1e3, 0.3));
    CHECK(gamma_fn(0.5, 1.0, 0.5) == doctest::Approx(0.5));
    CHECK(gamma_fn(0.5, 4.0, 0.5) == doctest::Approx(2.0));
    CHECK(code_of([] { gamma_fn(1.0, 1.0, 0.5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("phi_fn against the quadrature transcription") {
    A1Params p(2.0, 1.0, 0.5, 3.0, 1.0, 1.0, 1.0, 1.5);
    auto L = stable(1.8);
    double want = oracle::Phi(mirror(p), 1, 1.8, 1.0, 0.1, 1.0, 2.0);
    CHECK(phi_fn(p, L, 0.1, 1.0, 2.0) == doctest::Approx(want).epsilon(1e-8));
    // Small r: only C_b and the two Levy moments remain.
    double base = 1.5 * 2.0 + 0.75 * tail_moment(L, 2.0, Region::ball(2.0)) + tail_moment(L, 1.5, Region::complement(2.0));
    CHECK(phi_fn(p, L, 0.1, 1e-6, 2.0) == doctest::Approx(base).epsilon(1e-10));
    // Non-decreasing in r and C_b.
    double prev = 0.0;
    for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        double v = phi_fn(p, L, 0.1, r, 2.0);
        CHECK(v >= prev);
        prev = v;
    }
    A1Params q(3.0, 1.0, 0.5, 3.0, 1.0, 1.0, 1.0, 1.5);
    CHECK(phi_fn(q, L, 0.1, 1.0, 2.0) > phi_fn(p, L, 0.1, 1.0, 2.0));
}

TEST_CASE("Theta membership") {
    A1Params p(1.0, 2.0, 0.5, 3.0, 1.0, 1.0, 1.0, 1.5);
    auto L = stable(1.8, 0.5);
    CHECK_FALSE(theta_member(p, L, {1e6, 1e6, 1.0, 2.0}));
    CHECK(theta_member(p, L, {1e-3, 1e-3, 1.0, 64.0}));
    CHECK(code_of([&] { moment_bound(p, L, {1e6, 1e6, 1.0, 2.0}, 1.0); }) == ErrorCode::NotInTheta);

    // Brownian noise has no tail term, so eps2 = lambda1 h(1) makes the margin exactly 0.
    A1Params b(1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0);
    REQUIRE(b.gamma1 == 0.0);
    CHECK(theta_margin(b, stable(2.0), {0.0, 0.5, 1.0, 2.0}) == 0.0);
    CHECK_FALSE(theta_member(b, stable(2.0), {0.0, 0.5, 1.0, 2.0}));
    CHECK(theta_member(b, stable(2.0), {0.0, 0.4999, 1.0, 2.0}));

    const ThetaTuple t{0.05, 0.05, 1.0, 16.0};
    CHECK(theta_margin(p, L, t) ==
          doctest::Approx(oracle::theta_lhs(mirror(p), 1, 1.8, 0.5, t.eps1, t.eps2, t.r0, t.l)).epsilon(1e-8));
}

TEST_CASE("moment_bound: oracle agreement and monotonicity") {
    A1Params p(1.0, 2.0, 0.5, 3.0, 1.0, 1.0, 1.0, 1.5);
    auto L = stable(1.8, 0.5);
    const ThetaTuple t{0.05, 0.05, 1.0, 16.0};
    double prev = 0.0;
    for (double m : {0.0, 0.5, 1.0, 4.0, 10.0}) {
        double v = moment_bound(p, L, t, m);
        CHECK(v == doctest::Approx(oracle::moment_bound(mirror(p), 1, 1.8, 0.5, t.eps1, t.eps2, t.r0, t.l, m)).epsilon(1e-8));
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("M_star thresholds and invariance") {
    auto L = stable(1.8);
    A1Params p(1.0, 1.0, 0.25, 3.0, 1.0, 1.0, 1.0, 1.5);
    REQUIRE(p.regime == A1Case::CaseI);
    MStar m = m_star(p, L);
    CHECK(m.has_M1);
    CHECK(m.M_star > 0.0);
    // The printed prefactor is 2/3 of the one used.
    CHECK(m.M1_short_prefactor == doctest::Approx(m.M1 * 2.0 / 3.0).epsilon(1e-12));
    ThetaTuple t = m.chosen;
    t.l = m.chosen_l;
    double mu = std::pow(m.M_star, p.theta3 / p.beta_star);
    CHECK(moment_bound(p, L, t, mu) <= m.M_star * (1.0 + 1e-10));

    A1Params q(1.0, 1.0, 0.25, 3.0, 1.0, 1.0, p.beta_star * (1.0 - p.gamma1), 1.5);
    REQUIRE(q.regime == A1Case::CaseII);
    MStar m2 = m_star(q, L);
    CHECK(m2.has_M2);
    CHECK(m2.M2 == doctest::Approx(4.0 * phi_fn(q, L, m2.chosen.eps2, m2.chosen.r0, m2.chosen_l) / (1.5 * 0.75)).epsilon(1e-12));
    A1Params none(1.0, 0.25, 1.0, 3.0, 1.0, 1.0, p.beta_star * (1.0 - p.gamma1), 1.5);
    CHECK(code_of([&] { m_star(none, L); }) == ErrorCode::CaseViolation);
}

TEST_CASE("double well: threshold, witness and sigma halving") {
    auto L = stable(1.8, 0.2);
    auto r = ex14_check(1.0, 4.5, 1.5, 1e-2, 0.2, -1.0, 1.0, L);
    CHECK(r.we_threshold == doctest::Approx(1.0 + 6.0 / 1.75));
    CHECK(r.we_ok);
    CHECK_FALSE(ex14_check(1.0, 4.0, 1.5, 1e-2, 0.2, -1.0, 1.0, L).we_ok);
    CHECK(ex14_pairs(-1.0, 1.0).size() == 6);

    Witness w = ex14_sigma_search(1.0, 4.5, 1.5, -1.0, 1.0, L);
    REQUIRE(w.found);
    CHECK(w.sigma <= 0.2);
    CHECK(w.sigma == doctest::Approx(0.2 * std::pow(0.5, w.halvings)));
    auto Lw = stable(1.8, w.sigma);
    auto at = ex14_check(1.0, 4.5, 1.5, w.eps, w.r0, -1.0, 1.0, Lw);
    CHECK(at.we2_ok);
    CHECK(at.we2_lhs <= at.we2_rhs);
    // g brackets a root on (0, r0) for the two well-to-well pairs.
    for (auto [a, b] : {std::pair{-1.0, 1.0}, std::pair{1.0, -1.0}}) {
        CHECK(at.g(a, b, 0.0, w.r0) < 0.0);
        CHECK(at.g(a, b, w.r0, w.r0) > 0.0);
    }
}

TEST_CASE("ct_fn") {
    CHECK(ct_fn(1.3, 0.7, 0.0) == 0.0);
    CHECK(ct_fn(0.0, 0.0, 2.0) == 0.0);
    for (double t : {0.1, 1.0, 3.0})
        CHECK(ct_fn(0.5, 0.8, t) == doctest::Approx(oracle::C_t(0.5, 0.8, t)).epsilon(1e-12));
}

TEST_CASE("appendix constants") {
    auto L = stable(1.5);
    AppendixParams ap;
    ap.kappa = 0.5;
    ap.l0 = 2.0;
    const double Jk = J(L, ap.kappa);
    const double s = 0.5 * Jk * ap.kappa * ap.kappa / (4.0 * ap.l0);
    ap.sigma = SigmaSpec{{0.0, 2.0 * ap.l0}, {0.5 * s, s}};
    auto c = appendix_constants(ap, L);
    auto o = oracle::appendix(ap.K, ap.K1, ap.K2, ap.kappa, ap.l0, ap.C_V, ap.lambda_V, Jk, ap.sigma.r, ap.sigma.value);
    CHECK(c.J_kappa == Jk);
    CHECK(c.c == doctest::Approx(o.c).epsilon(1e-12));
    CHECK(c.a == doctest::Approx(o.a).epsilon(1e-12));
    CHECK(c.eps == doctest::Approx(o.eps).epsilon(1e-12));
    CHECK(c.lambda0 == doctest::Approx(o.lambda0).epsilon(1e-12));
    CHECK(c.lambda0 > 0.0);
    REQUIRE(c.has_contraction);
    CHECK(c.c2 == doctest::Approx(o.c2).epsilon(1e-10));
    CHECK(c.C_contr == doctest::Approx(o.C).epsilon(1e-10));
    CHECK(c.C_contr >= 1.0);
    CHECK(c.lambda_contr == doctest::Approx(o.lambda).epsilon(1e-10));

    ap.sigma = SigmaSpec{{0.0, 2.0 * ap.l0}, {4.0 * s, 8.0 * s}};
    CHECK(code_of([&] { appendix_constants(ap, L); }) == ErrorCode::SigmaViolatesH2);
    ap.sigma = {};
    ap.kappa = 1.5;
    CHECK(code_of([&] { appendix_constants(ap, L); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Lyapunov candidates and l0") {
    auto L = stable(1.8);
    A1Params p(1.0, 1.0, 0.25, 3.0, 1.0, 1.0, 1.0, 1.5);
    auto lc = drift_lyapunov_candidates(p, L, 2.0);
    CHECK(lc.C_V > 0.0);
    CHECK(lc.lambda_V == doctest::Approx(std::pow(2.0, -4.0) * 1.5));
    // Symmetric extremal pair x = -y: 2 V(R) = 16 C_V / lambda_V.
    const double C = 3.0, lam = 0.5, b = 1.5;
    double l0 = l0_from_lyapunov(C, lam, b);
    double R = 0.5 * (l0 - 1.0);
    CHECK(2.0 * std::pow(1.0 + R * R, 0.5 * b) == doctest::Approx(16.0 * C / lam).epsilon(1e-12));
    CHECK(l0_from_lyapunov(0.01, 1.0, 1.5) == 1.0);
}
