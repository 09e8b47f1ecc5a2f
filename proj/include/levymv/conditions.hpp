#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levymv/drift.hpp"
#include "levymv/levy.hpp"

namespace lmv {

struct ThetaTuple {
    double eps1 = 0.0;
    double eps2 = 0.0;
    double r0 = 1.0;
    double l = 2.0;
};

double gamma_fn(double gamma, double a, double eps);

double phi_fn(const A1Params& p, const LevyMeasureSpec& levy, double eps2, double r, double l);

// beta (lambda1 h(r0^2)^{(1+theta1)/2} - eps1 lambda2 1{gamma1 in (0,1)} - eps2) - 2^{beta/2} nu(|.|^{beta/2} 1{>l})
double theta_margin(const A1Params& p, const LevyMeasureSpec& levy, const ThetaTuple& t);
bool theta_member(const A1Params& p, const LevyMeasureSpec& levy, const ThetaTuple& t);

double moment_bound(const A1Params& p, const LevyMeasureSpec& levy, const ThetaTuple& t, double mu_theta3_moment);

struct MStar {
    bool has_M1 = false;
    bool has_M2 = false;
    double M1 = 0.0;
    // The case (i) threshold with the prefactor 2^{2+(5+theta1)/2} / 3 instead
    // of 2^{(7+theta1)/2}; reported for comparison, never used as M_star.
    double M1_short_prefactor = 0.0;
    double C1 = 0.0;
    double M2 = 0.0;
    double M_star = 0.0;
    double chosen_l = 0.0;
    ThetaTuple chosen;
    A1Case regime = A1Case::None;
};

MStar m_star(const A1Params& p, const LevyMeasureSpec& levy);

struct Ex14Result {
    bool we_ok = false;
    bool we2_ok = false;
    bool convex_ok = false;
    double we_threshold = 0.0;
    double we2_lhs = 0.0;
    double we2_rhs = 0.0;
    std::vector<double> convex_margins;  // one per (a, b) pair
    // g_{eps,a,b}(r1, r2)
    std::function<double(double a, double b, double r1, double r2)> g;
};

// The six (a, b) pairs {(a1,a2),(a2,a1),(0,a1),(a1,0),(0,a2),(a2,0)}.
std::vector<std::pair<double, double>> ex14_pairs(double a1, double a2);

Ex14Result ex14_check(double lambda, double kappa, double beta, double eps, double r0, double a1, double a2,
                      const LevyMeasureSpec& levy);

struct Ex15Result {
    bool eq1_ok = false;
    bool wq2_ok = false;
    double eq1_threshold = 0.0;
    double wq2_lhs = 0.0;
    double wq2_rhs = 0.0;
    std::function<double(double r1, double r2)> g;
};

Ex15Result ex15_check(double lambda, double kappa, double beta, double eps, double r0, const std::vector<double>& y1,
                      const std::vector<double>& y2, const LevyMeasureSpec& levy);

struct Witness {
    bool found = false;
    double eps = 0.0;
    double r0 = 0.0;
    double sigma = 0.0;
    int halvings = 0;
};

// Grid search over eps in logspace(1e-4, 1) and r0 in (0, (|a1| ^ |a2|) / 4).
Witness we2_feasible(double lambda, double kappa, double beta, double a1, double a2, const LevyMeasureSpec& levy,
                     int n_eps = 81, int n_r = 80);
// Same for (WQ2) with r0 in (0, |y1 - y2| / 4).
Witness wq2_feasible(double lambda, double kappa, double beta, const std::vector<double>& y1,
                     const std::vector<double>& y2, const LevyMeasureSpec& levy, int n_eps = 81, int n_r = 80);
// Halves levy.scale from its given value until a (WE2) witness exists.
Witness ex14_sigma_search(double lambda, double kappa, double beta, double a1, double a2, LevyMeasureSpec levy,
                          int max_halvings = 12);

double ct_fn(double K1, double nu_tail_mass, double t);

struct AppendixParams {
    double K = 1.0;
    double K1 = 1.0;
    double K2 = 1.0;
    double K3 = 1.0;
    double kappa = 0.5;
    double l0 = 2.0;
    double C_V = 1.0;
    double lambda_V = 1.0;
    double beta0 = 1.0;
    SigmaSpec sigma;  // optional: empty knots skip the contraction constants
};

struct AppendixConstants {
    double J_kappa = 0.0;
    double c = 0.0;
    double a = 0.0;
    double eps = 0.0;
    double lambda0 = 0.0;
    bool has_contraction = false;
    double c1 = 0.0;
    double c2 = 0.0;
    double g_2l0 = 0.0;
    double C_contr = 0.0;
    double lambda_contr = 0.0;
};

AppendixConstants appendix_constants(const AppendixParams& ap, const LevyMeasureSpec& levy);

// Conservative (C_V, lambda_V) for V = (1 + |x|^2)^{beta/2} and a frozen measure
// with beta*-moment M, using the case (i) tuple (r0 = 1). Needs theta1 >= 1.
struct LyapunovCandidates {
    double C_V = 0.0;
    double lambda_V = 0.0;
    double l = 0.0;
};
LyapunovCandidates drift_lyapunov_candidates(const A1Params& p, const LevyMeasureSpec& levy, double M);

// 1 + sup{|x - y| : lambda_V (V(x) + V(y)) <= 16 C_V} for V = (1 + |x|^2)^{beta/2}.
double l0_from_lyapunov(double C_V, double lambda_V, double beta);

}  // namespace lmv
