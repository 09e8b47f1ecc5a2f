#include "levymv/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levymv/errors.hpp"

namespace lmv {

double gamma_fn(double gamma, double a, double eps) {
    require(gamma >= 0.0 && gamma < 1.0, "gamma_fn: gamma must lie in [0, 1)");
    require(eps >= 0.0 && eps < 1.0, "gamma_fn: eps must lie in [0, 1)");
    if (gamma == 0.0) return 1.0 - eps;
    require(a > 0.0, "gamma_fn: a must be positive");
    return (1.0 - eps) * std::pow(a, eps / (1.0 - eps));
}

namespace {

double tail_beyond(const LevyMeasureSpec& levy, double p, double l) {
    return tail_moment(levy, p, Region::complement(l));
}

double small_second(const LevyMeasureSpec& levy, double l) {
    if (levy.is_brownian()) return 0.0;
    return tail_moment(levy, 2.0, Region::ball(l));
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Gamma(gamma1, gamma1 / eps1, gamma1), with the a-argument irrelevant when gamma1 = 0.
double gamma_eps1(const A1Params& p, double eps1) {
    if (p.gamma1 == 0.0) return gamma_fn(0.0, 1.0, 0.0);
    require(eps1 > 0.0, "eps1 must be positive when gamma1 > 0");
    return gamma_fn(p.gamma1, p.gamma1 / eps1, p.gamma1);
}

double l_on_grid(const LevyMeasureSpec& levy, double beta, double threshold) {
    for (int k = 1; k <= 20; ++k) {
        double l = std::ldexp(1.0, k);
        if (std::pow(2.0, 0.5 * beta) * tail_beyond(levy, 0.5 * beta, l) <= threshold) return l;
    }
    fail(ErrorCode::CaseViolation, "no l <= 2^20 brings the tail term below its threshold");
}

}  // namespace

double phi_fn(const A1Params& p, const LevyMeasureSpec& levy, double eps2, double r, double l) {
    require(eps2 > 0.0, "phi_fn: eps2 must be positive");
    require(r > 0.0, "phi_fn: r must be positive");
    require(l > 1.0, "phi_fn: l must exceed 1");
    const double b = p.beta;
    double out = b * p.C_b;
    double drift_moment = norm(first_moment_vector(levy, l));
    if (drift_moment > 0.0) {
        double g = gamma_fn(std::max(0.0, b - 1.0), p.gamma2 > 0.0 ? p.gamma2 / eps2 : 1.0, p.gamma2);
        out += b * g * std::pow(drift_moment, 1.0 / (1.0 - p.gamma2));
    }
    out += b * p.lambda1 * std::pow(A1Params::h(r * r), 0.5 * (1.0 + p.theta1)) * std::pow(1.0 + r * r, 0.5 * p.beta_star);
    out += 0.5 * b * small_second(levy, l);
    out += tail_beyond(levy, b, l);
    return out;
}

double theta_margin(const A1Params& p, const LevyMeasureSpec& levy, const ThetaTuple& t) {
    require(t.r0 > 0.0 && t.eps2 > 0.0 && t.eps1 >= 0.0, "theta tuple: eps2, r0 must be positive, eps1 nonnegative");
    require(t.l >= 1.0, "theta tuple: l must be >= 1");
    const double b = p.beta;
    double ind = (p.gamma1 > 0.0 && p.gamma1 < 1.0) ? 1.0 : 0.0;
    double inner = p.lambda1 * std::pow(A1Params::h(t.r0 * t.r0), 0.5 * (1.0 + p.theta1)) - t.eps1 * p.lambda2 * ind - t.eps2;
    return b * inner - std::pow(2.0, 0.5 * b) * tail_beyond(levy, 0.5 * b, t.l);
}

bool theta_member(const A1Params& p, const LevyMeasureSpec& levy, const ThetaTuple& t) {
    return theta_margin(p, levy, t) > 0.0;
}

double moment_bound(const A1Params& p, const LevyMeasureSpec& levy, const ThetaTuple& t, double m) {
    require(m >= 0.0, "moment_bound: measure moment must be nonnegative");
    double D = theta_margin(p, levy, t);
    if (!(D > 0.0))
        fail(ErrorCode::NotInTheta, "tuple is not in Theta (margin " + std::to_string(D) + ")");
    double num = phi_fn(p, levy, t.eps2, t.r0, t.l) +
                 p.beta * p.lambda2 * gamma_eps1(p, t.eps1) * std::pow(m, p.theta4 / (1.0 - p.gamma1));
    return num / D;
}

MStar m_star(const A1Params& p, const LevyMeasureSpec& levy) {
    p.require_case();
    MStar out;
    out.regime = p.regime;
    const double b = p.beta;
    const double t1 = p.theta1;
    if (p.regime == A1Case::CaseI) {
        require(p.lambda1 > 0.0, "case (i) needs lambda1 > 0");
        double l = l_on_grid(levy, b, std::pow(2.0, -0.5 * (7.0 + t1)) * b * p.lambda1);
        ThetaTuple t;
        t.l = l;
        t.r0 = 1.0;
        t.eps1 = p.lambda2 > 0.0 ? p.lambda1 / (std::pow(2.0, 0.5 * (3.0 + t1)) * p.lambda2) : 0.0;
        t.eps2 = p.lambda1 / std::pow(2.0, 0.5 * (7.0 + t1));
        double g3 = p.theta3 * p.theta4 / (p.beta_star * (1.0 - p.gamma1));
        double C1 = 0.0;
        if (p.lambda2 > 0.0) {
            double A = b * p.lambda2 * gamma_eps1(p, t.eps1);
            C1 = (1.0 - g3) * std::pow(A, 1.0 / (1.0 - g3)) *
                 std::pow(std::pow(2.0, 0.5 * (7.0 + t1)) * g3 / (b * p.lambda1), g3 / (1.0 - g3));
        }
        double phi = phi_fn(p, levy, t.eps2, 1.0, l);
        out.has_M1 = true;
        out.C1 = C1;
        out.M1 = std::pow(2.0, 0.5 * (7.0 + t1)) * (phi + C1) / (b * p.lambda1);
        out.M1_short_prefactor = std::pow(2.0, 2.0 + 0.5 * (5.0 + t1)) * (phi + C1) / (3.0 * b * p.lambda1);
        out.M_star = out.M1;
        out.chosen_l = l;
        out.chosen = t;
        return out;
    }
    double gap = p.lambda1 - p.lambda2;
    double l = l_on_grid(levy, b, 0.125 * b * gap);
    double q = 0.5 * (p.lambda1 + p.lambda2) / p.lambda1;
    double qq = std::pow(q, 2.0 / (1.0 + t1));
    ThetaTuple t;
    t.l = l;
    t.eps1 = p.gamma1;
    t.eps2 = 0.125 * gap;
    t.r0 = std::pow(q, 1.0 / (1.0 + t1)) / std::sqrt(1.0 - qq);
    out.has_M2 = true;
    out.M2 = 4.0 * phi_fn(p, levy, t.eps2, t.r0, l) / (b * gap);
    out.M_star = out.M2;
    out.chosen_l = l;
    out.chosen = t;
    return out;
}

std::vector<std::pair<double, double>> ex14_pairs(double a1, double a2) {
    return {{a1, a2}, {a2, a1}, {0.0, a1}, {a1, 0.0}, {0.0, a2}, {a2, 0.0}};
}

namespace {

void check_beta_alpha(double beta, const LevyMeasureSpec& levy) {
    require(beta > 1.0, "beta must exceed 1");
    if (levy.kind != LevyKind::CompoundPoisson)
        require(beta < levy.alpha, "beta must lie below alpha");
}

}  // namespace

Ex14Result ex14_check(double lambda, double kappa, double beta, double eps, double r0, double a1, double a2,
                      const LevyMeasureSpec& levy) {
    require(lambda > 0.0 && kappa >= 0.0 && eps > 0.0, "ex14: lambda, eps must be positive, kappa nonnegative");
    require(a1 * a2 < 0.0, "ex14: requires a1 * a2 < 0");
    check_beta_alpha(beta, levy);
    require(r0 > 0.0 && r0 < 0.25 * std::min(std::abs(a1), std::abs(a2)), "ex14: r0 must lie in (0, (|a1| ^ |a2|) / 4)");
    const double nu_half = tail_beyond(levy, 0.5 * beta, 1.0);
    const double nu_beta = tail_beyond(levy, beta, 1.0);
    const double nu_two = small_second(levy, 1.0);
    const double k = kappa / lambda;

    Ex14Result r;
    r.we_threshold = 1.0 + 2.0 * (a1 * a1 - a1 * a2 + a2 * a2) / ((beta - 1.0) * (2.0 + beta));
    r.we_ok = k >= r.we_threshold;

    r.we2_lhs = (kappa * beta * std::pow(r0, beta) + std::pow(2.0, 0.5 * beta) * nu_half * std::pow(r0, 0.5 * beta) +
                 std::pow(eps, 0.5 * beta) * beta * (lambda * (std::max(a1 * a1, a2 * a2) - a1 * a2) + kappa) + nu_beta +
                 0.5 * beta * std::pow(eps, 0.5 * beta - 1.0) * nu_two) /
                (lambda * beta);
    r.we2_rhs = std::pow(r0, beta) *
                ((r0 - std::min(std::abs(a1), std::abs(a2))) * (r0 - std::abs(a1 - a2)) + (k - 1.0));
    r.we2_ok = r.we2_lhs <= r.we2_rhs;

    r.convex_ok = true;
    for (auto [a, b] : ex14_pairs(a1, a2)) {
        double m = (a * (a - b) + k - 1.0) * beta * (beta - 1.0) / ((2.0 + beta) * (1.0 + beta)) -
                   beta * beta * (2.0 * a - b) * (2.0 * a - b) / (4.0 * (2.0 + beta) * (2.0 + beta));
        r.convex_margins.push_back(m);
        r.convex_ok = r.convex_ok && m >= 0.0;
    }
    r.g = [=](double a, double b, double r1, double r2) {
        return lambda * beta * std::pow(r1, beta) * (r1 * r1 - std::abs(2.0 * a - b) * r1 + a * (a - b) + k - 1.0) -
               kappa * beta * std::pow(r1, beta - 1.0) * r2 - std::pow(2.0, 0.5 * beta) * nu_half * std::pow(r1, 0.5 * beta) -
               std::pow(eps, 0.5 * beta) * beta * (lambda * a * (a - b) + kappa) - nu_beta -
               0.5 * beta * std::pow(eps, 0.5 * beta - 1.0) * nu_two;
    };
    return r;
}

Ex15Result ex15_check(double lambda, double kappa, double beta, double eps, double r0, const std::vector<double>& y1,
                      const std::vector<double>& y2, const LevyMeasureSpec& levy) {
    require(lambda > 0.0 && kappa >= 0.0 && eps > 0.0, "ex15: lambda, eps must be positive, kappa nonnegative");
    require(!y1.empty() && y1.size() == y2.size(), "ex15: y1 and y2 must have equal nonzero dimension");
    check_beta_alpha(beta, levy);
    double D2 = 0.0;
    for (std::size_t i = 0; i < y1.size(); ++i) D2 += (y1[i] - y2[i]) * (y1[i] - y2[i]);
    const double D = std::sqrt(D2);
    require(r0 > 0.0 && r0 < 0.25 * D, "ex15: r0 must lie in (0, |y1 - y2| / 4)");
    const double nu_half = tail_beyond(levy, 0.5 * beta, 1.0);
    const double nu_beta = tail_beyond(levy, beta, 1.0);
    const double nu_two = small_second(levy, 1.0);
    const double k = kappa / lambda;

    Ex15Result r;
    r.eq1_threshold = eps + (beta * beta + beta + 16.0) * D2 / (16.0 * (beta + 2.0) * (beta - 1.0));
    r.eq1_ok = k >= r.eq1_threshold;
    r.wq2_lhs = (lambda * beta * eps * std::pow(r0, beta) + std::pow(2.0, 0.5 * beta) * nu_half * std::pow(r0, 0.5 * beta) +
                 lambda * beta * std::pow(eps, 0.5 * beta) * (0.5 * D2 + k) + nu_beta +
                 0.5 * beta * std::pow(eps, 0.5 * (beta - 2.0)) * nu_two) /
                (lambda * beta);
    r.wq2_rhs = std::pow(r0, beta) * (r0 - D) * (r0 - 0.5 * D);
    r.wq2_ok = r.wq2_lhs <= r.wq2_rhs;
    r.g = [=](double r1, double r2) {
        return lambda * beta *
                   (std::pow(r1, beta + 2.0) - 1.5 * std::pow(r1, beta + 1.0) * D + (0.5 * D2 + k - eps) * std::pow(r1, beta) -
                    (0.5 * D2 + k) * std::pow(eps, 0.5 * beta) - k * std::pow(r1, beta - 1.0) * r2) -
               std::pow(2.0, 0.5 * beta) * nu_half * std::pow(r1, 0.5 * beta) -
               0.5 * beta * std::pow(eps, 0.5 * (beta - 2.0)) * nu_two - nu_beta;
    };
    return r;
}

namespace {

template <class Check>
Witness grid_witness(double r_max, int n_eps, int n_r, Check check) {
    Witness best;
    double best_margin = 0.0;
    for (int i = 0; i < n_eps; ++i) {
        double eps = std::pow(10.0, -4.0 + 4.0 * i / std::max(1, n_eps - 1));
        for (int j = 1; j <= n_r; ++j) {
            double r0 = r_max * j / (n_r + 1.0);
            auto [lhs, rhs] = check(eps, r0);
            double margin = rhs - lhs;
            if (margin >= 0.0 && (!best.found || margin > best_margin)) {
                best.found = true;
                best.eps = eps;
                best.r0 = r0;
                best_margin = margin;
            }
        }
    }
    return best;
}

}  // namespace

Witness we2_feasible(double lambda, double kappa, double beta, double a1, double a2, const LevyMeasureSpec& levy,
                     int n_eps, int n_r) {
    double r_max = 0.25 * std::min(std::abs(a1), std::abs(a2));
    Witness w = grid_witness(r_max, n_eps, n_r, [&](double eps, double r0) {
        Ex14Result r = ex14_check(lambda, kappa, beta, eps, r0, a1, a2, levy);
        return std::make_pair(r.we2_lhs, r.we2_rhs);
    });
    w.sigma = levy.scale;
    return w;
}

Witness wq2_feasible(double lambda, double kappa, double beta, const std::vector<double>& y1,
                     const std::vector<double>& y2, const LevyMeasureSpec& levy, int n_eps, int n_r) {
    double D2 = 0.0;
    for (std::size_t i = 0; i < y1.size() && i < y2.size(); ++i) D2 += (y1[i] - y2[i]) * (y1[i] - y2[i]);
    require(D2 > 0.0, "wq2_feasible: y1 and y2 must differ");
    Witness w = grid_witness(0.25 * std::sqrt(D2), n_eps, n_r, [&](double eps, double r0) {
        Ex15Result r = ex15_check(lambda, kappa, beta, eps, r0, y1, y2, levy);
        return std::make_pair(r.wq2_lhs, r.wq2_rhs);
    });
    w.sigma = levy.scale;
    return w;
}

Witness ex14_sigma_search(double lambda, double kappa, double beta, double a1, double a2, LevyMeasureSpec levy,
                          int max_halvings) {
    for (int h = 0; h <= max_halvings; ++h) {
        Witness w = we2_feasible(lambda, kappa, beta, a1, a2, levy);
        if (w.found) {
            w.halvings = h;
            return w;
        }
        levy.scale *= 0.5;
    }
    Witness none;
    none.sigma = levy.scale;
    none.halvings = max_halvings;
    return none;
}

double ct_fn(double K1, double m, double t) {
    require(K1 >= 0.0 && m >= 0.0 && t >= 0.0, "ct_fn: inputs must be nonnegative");
    double e = std::exp(K1 * t);
    return std::sqrt(2.0) * m * std::sqrt(t) * std::exp((K1 - m) * t) * (1.0 + m * t * e) * std::exp(m * t * e);
}

AppendixConstants appendix_constants(const AppendixParams& ap, const LevyMeasureSpec& levy) {
    require(ap.K > 0.0 && ap.K1 > 0.0 && ap.K2 > 0.0 && ap.K3 > 0.0, "appendix: K constants must be positive");
    require(ap.kappa > 0.0 && ap.kappa <= 1.0, "appendix: kappa must lie in (0, 1]");
    require(ap.l0 >= 1.0, "appendix: l0 must be >= 1");
    require(ap.C_V > 0.0 && ap.lambda_V > 0.0, "appendix: C_V and lambda_V must be positive");
    require(ap.beta0 > 0.0, "appendix: beta0 must be positive");
    AppendixConstants out;
    const double Jk = J(levy, ap.kappa);
    if (!(Jk > 0.0)) fail(ErrorCode::ZeroOverlap, "J(kappa) = 0: the overlap condition fails");
    out.J_kappa = Jk;
    const double k2 = ap.kappa * ap.kappa;
    out.c = 1.0 + 16.0 * ap.K * ap.l0 / (Jk * k2);
    const double decay = k2 * out.c * out.c * std::exp(-out.c * ap.l0);
    out.a = 8.0 * ap.K * out.c * (1.0 + ap.kappa) / Jk + decay;
    out.eps = decay * Jk / (16.0 * ap.C_V);
    out.lambda0 = 0.25 * std::min(Jk * decay / (2.0 * (2.0 + out.a)), 3.0 * ap.lambda_V);
    if (!ap.sigma.r.empty()) {
        if (ap.sigma.r.back() < 2.0 * ap.l0)
            fail(ErrorCode::SigmaViolatesH2, "sigma knots must cover [0, 2 l0]");
        ap.sigma.validate_h2(levy, ap.kappa);
        double g1 = ap.sigma.inverse_integral(2.0 * ap.l0);
        double g2 = ap.K1 * g1;
        out.c2 = std::min(2.0 * ap.K2, 1.0 / g1);
        out.g_2l0 = g1 + (2.0 / out.c2) * g2;
        out.c1 = std::exp(-out.c2 * out.g_2l0);
        out.C_contr = 0.5 * (1.0 + 1.0 / out.c1);
        out.lambda_contr = out.c2 / (1.0 + std::exp(2.0 * out.g_2l0));
        out.has_contraction = true;
    }
    return out;
}

LyapunovCandidates drift_lyapunov_candidates(const A1Params& p, const LevyMeasureSpec& levy, double M) {
    require(p.theta1 >= 1.0, "Lyapunov candidates need theta1 >= 1");
    require(p.lambda1 > 0.0, "Lyapunov candidates need lambda1 > 0");
    require(M >= 0.0, "measure moment must be nonnegative");
    const double t1 = p.theta1;
    LyapunovCandidates out;
    out.l = l_on_grid(levy, p.beta, std::pow(2.0, -0.5 * (7.0 + t1)) * p.beta * p.lambda1);
    double eps1 = p.lambda2 > 0.0 ? p.lambda1 / (std::pow(2.0, 0.5 * (3.0 + t1)) * p.lambda2) : 0.0;
    double eps2 = p.lambda1 / std::pow(2.0, 0.5 * (7.0 + t1));
    double expo = p.theta3 * p.theta4 / (p.beta_star * (1.0 - p.gamma1));
    out.lambda_V = std::pow(2.0, -0.5 * (5.0 + t1)) * p.beta * p.lambda1;
    out.C_V = phi_fn(p, levy, eps2, 1.0, out.l);
    if (p.lambda2 > 0.0) out.C_V += p.beta * p.lambda2 * gamma_eps1(p, eps1) * std::pow(M, expo);
    return out;
}

double l0_from_lyapunov(double C_V, double lambda_V, double beta) {
    require(C_V > 0.0 && lambda_V > 0.0 && beta > 0.0, "l0_from_lyapunov: inputs must be positive");
    double v = 8.0 * C_V / lambda_V;
    double R = v > 1.0 ? std::sqrt(std::pow(v, 2.0 / beta) - 1.0) : 0.0;
    return 1.0 + 2.0 * R;
}

}  // namespace lmv
