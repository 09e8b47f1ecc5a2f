#pragma once
// Independent reference implementations used by the unit and acceptance tests.
// Nothing here calls library numerics: tail moments come from Boost.Math
// quadrature of the radial density, and every long formula is transcribed
// a second time from its written form.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

inline constexpr double kPi = boost::math::constants::pi<double>();

// c_{d,alpha} such that the unit process has characteristic function exp(-|xi|^alpha).
inline double stable_c(int d, double alpha) {
    using boost::math::tgamma;
    return alpha * std::exp2(alpha - 1.0) * tgamma((d + alpha) / 2.0) /
           (std::pow(kPi, d / 2.0) * tgamma(1.0 - alpha / 2.0));
}

inline double sphere(int d) { return 2.0 * std::pow(kPi, d / 2.0) / boost::math::tgamma(d / 2.0); }

// Stable Levy density per unit radius, integrated over the sphere.
inline double radial_density(int d, double alpha, double scale, double r) {
    return sphere(d) * stable_c(d, alpha) * std::pow(scale, alpha) * std::pow(r, -1.0 - alpha);
}

// r^p times the radial density, with the powers merged so small r does not hit 0 * inf.
inline double radial_weighted(int d, double alpha, double scale, double p, double r) {
    return sphere(d) * stable_c(d, alpha) * std::pow(scale, alpha) * std::pow(r, p - 1.0 - alpha);
}

// nu(|z|^p 1{|z| > l}) by exp-sinh quadrature.
inline double tail_moment_quad(int d, double alpha, double scale, double p, double l) {
    boost::math::quadrature::exp_sinh<double> q;
    auto f = [&](double t) { return radial_weighted(d, alpha, scale, p, l + t); };
    return q.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-15);
}

// nu(|z|^p 1{|z| <= l}) by tanh-sinh quadrature.
inline double ball_moment_quad(int d, double alpha, double scale, double p, double l) {
    boost::math::quadrature::tanh_sinh<double> q;
    auto f = [&](double r) { return r <= 0.0 ? 0.0 : radial_weighted(d, alpha, scale, p, r); };
    return q.integrate(f, 0.0, l, 1e-15);
}

// 1-D Levy-Khintchine exponent: 2 c int_0^inf (1 - cos(xi z)) z^{-1-alpha} dz.
inline double lk_exponent_1d(double alpha, double xi) {
    const double c = stable_c(1, alpha);
    boost::math::quadrature::tanh_sinh<double> head;
    auto near = [&](double z) { return z <= 0.0 ? 0.0 : (1.0 - std::cos(xi * z)) * std::pow(z, -1.0 - alpha); };
    const double A = 1.0;
    double s = head.integrate(near, 0.0, A, 1e-14);
    // Tail: int_A^inf z^{-1-alpha} dz - int_A^inf cos(xi z) z^{-1-alpha} dz.
    s += std::pow(A, -alpha) / alpha;
    boost::math::quadrature::ooura_fourier_cos<double> four;
    auto shifted = [&](double t) { return std::pow(A + t, -1.0 - alpha); };
    // cos(xi (A + t)) = cos(xi A) cos(xi t) - sin(xi A) sin(xi t)
    boost::math::quadrature::ooura_fourier_sin<double> fours;
    double ic = four.integrate(shifted, xi).first;
    double is = fours.integrate(shifted, xi).first;
    s -= std::cos(xi * A) * ic - std::sin(xi * A) * is;
    return 2.0 * c * s;
}

// In one dimension min(nu(z), nu(z - r)) is nu(z) for z > r/2 and its mirror
// image below, so the overlap mass is the two-sided tail beyond r/2.
inline double J_1d(double alpha, double scale, double r) {
    return 2.0 * stable_c(1, alpha) * std::pow(scale, alpha) * std::pow(r / 2.0, -alpha) / alpha;
}

inline double h(double r) { return r / (1.0 + r); }

struct Params {
    double C_b, lambda1, lambda2, theta1, theta2, theta3, theta4, beta;
    double beta_star() const { return beta + theta1 - 1.0; }
    double gamma1() const { return std::max(beta + theta2 - 2.0, 0.0) / beta_star(); }
    double gamma2() const { return std::max(beta - 1.0, 0.0) / beta_star(); }
};

// (1 - eps) * (1 if gamma = 0 else a^(eps / (1 - eps)))
inline double Gamma(double gamma, double a, double eps) {
    const double factor = gamma == 0.0 ? 1.0 : std::pow(a, eps / (1.0 - eps));
    return (1.0 - eps) * factor;
}

// Symmetric stable noise: the first-moment vector term is zero.
inline double Phi(const Params& P, int d, double alpha, double scale, double eps2, double r, double l) {
    const double b = P.beta;
    (void)eps2;
    return b * P.C_b + b * P.lambda1 * std::pow(h(r * r), (1.0 + P.theta1) / 2.0) * std::pow(1.0 + r * r, P.beta_star() / 2.0) +
           b / 2.0 * ball_moment_quad(d, alpha, scale, 2.0, l) + tail_moment_quad(d, alpha, scale, b, l);
}

inline double theta_lhs(const Params& P, int d, double alpha, double scale, double eps1, double eps2, double r0,
                        double l) {
    const double g1 = P.gamma1();
    const double ind = (g1 > 0.0 && g1 < 1.0) ? 1.0 : 0.0;
    const double b = P.beta;
    return b * (P.lambda1 * std::pow(h(r0 * r0), (1.0 + P.theta1) / 2.0) - eps1 * P.lambda2 * ind - eps2) -
           std::pow(2.0, b / 2.0) * tail_moment_quad(d, alpha, scale, b / 2.0, l);
}

inline double moment_bound(const Params& P, int d, double alpha, double scale, double eps1, double eps2, double r0,
                           double l, double mu_moment) {
    const double g1 = P.gamma1();
    const double G = g1 == 0.0 ? Gamma(0.0, 1.0, 0.0) : Gamma(g1, g1 / eps1, g1);
    const double top = Phi(P, d, alpha, scale, eps2, r0, l) + P.beta * P.lambda2 * G * std::pow(mu_moment, P.theta4 / (1.0 - g1));
    return top / theta_lhs(P, d, alpha, scale, eps1, eps2, r0, l);
}

// C_t in log form: log sqrt2 + log m + log t / 2 + (K1 - m) t + log(1 + m t e^{K1 t}) + m t e^{K1 t}
inline double C_t(double K1, double m, double t) {
    if (t == 0.0 || m == 0.0) return 0.0;
    const double u = m * t * std::exp(K1 * t);
    return std::exp(0.5 * std::log(2.0) + std::log(m) + 0.5 * std::log(t) + (K1 - m) * t + std::log1p(u) + u);
}

struct Appendix {
    double c, a, eps, lambda0;
    double c1, c2, g, C, lambda;
};

// Piecewise-linear sigma: int_0^T dr / sigma(r), segment by segment in closed form.
inline double inv_sigma_integral(const std::vector<double>& r, const std::vector<double>& v, double T) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < r.size() && r[i] < T; ++i) {
        const double hi = std::min(r[i + 1], T);
        const double slope = (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
        const double v_hi = v[i] + slope * (hi - r[i]);
        s += slope == 0.0 ? (hi - r[i]) / v[i] : std::log(v_hi / v[i]) / slope;
    }
    if (T > r.back()) s += (T - r.back()) / v.back();
    return s;
}

inline Appendix appendix(double K, double K1, double K2, double kappa, double l0, double C_V, double lambda_V,
                         double Jk, const std::vector<double>& sr, const std::vector<double>& sv) {
    Appendix o{};
    const double k2 = kappa * kappa;
    o.c = 1.0 + 16.0 * K * l0 / (Jk * k2);
    const double e = std::exp(-o.c * l0);
    o.a = 8.0 * K * o.c * (1.0 + kappa) / Jk + k2 * o.c * o.c * e;
    o.eps = k2 * o.c * o.c * e * Jk / (16.0 * C_V);
    o.lambda0 = std::min(Jk * k2 * o.c * o.c * e / (2.0 * (2.0 + o.a)), 3.0 * lambda_V) / 4.0;
    if (!sr.empty()) {
        const double g1 = inv_sigma_integral(sr, sv, 2.0 * l0);
        const double g2 = K1 * g1;
        o.c2 = std::min(2.0 * K2, 1.0 / g1);
        o.g = g1 + 2.0 / o.c2 * g2;
        o.c1 = std::exp(-o.c2 * o.g);
        o.C = (1.0 + 1.0 / o.c1) / 2.0;
        o.lambda = o.c2 / (1.0 + std::exp(2.0 * o.g));
    }
    return o;
}

// Exact 1-D W1 between equal-size uniform measures by enumerating all matchings.
inline double w1_assignment(std::vector<double> x, const std::vector<double>& y) {
    std::vector<int> perm(x.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[static_cast<std::size_t>(perm[i])]);
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(x.size());
}

}  // namespace oracle
