#include "levymv/drift.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "levymv/errors.hpp"

namespace lmv {

double GSpec::operator()(double y) const {
    switch (kind) {
        case GKind::TanhScaled: return amp * std::tanh(rate * y);
        case GKind::Cosine: return amp * std::cos(rate * y + phase);
        case GKind::Constant: return amp;
    }
    return 0.0;
}

double GSpec::sup_abs() const { return std::abs(amp); }

DriftSpec DriftSpec::double_well(double lambda, double a1, double a2, double kappa) {
    DriftSpec s;
    s.family = DriftFamily::DoubleWell1D;
    s.lambda = lambda;
    s.a1 = a1;
    s.a2 = a2;
    s.kappa = kappa;
    return s;
}

DriftSpec DriftSpec::two_well(double lambda, std::vector<double> y1, std::vector<double> y2, double kappa) {
    DriftSpec s;
    s.family = DriftFamily::SymmetricTwoWell;
    s.lambda = lambda;
    s.y1 = std::move(y1);
    s.y2 = std::move(y2);
    s.kappa = kappa;
    return s;
}

DriftSpec DriftSpec::asymmetric_cubic(double lambda, double kappa, double beta, GSpec g) {
    DriftSpec s;
    s.family = DriftFamily::AsymmetricCubic1D;
    s.lambda = lambda;
    s.kappa = kappa;
    s.beta = beta;
    s.g = g;
    return s;
}

DriftSpec DriftSpec::mean_field_ou(double lambda) {
    DriftSpec s;
    s.family = DriftFamily::MeanFieldOU;
    s.lambda = lambda;
    return s;
}

int DriftSpec::dim() const {
    return family == DriftFamily::SymmetricTwoWell ? static_cast<int>(y1.size()) : 1;
}

const char* DriftSpec::family_name() const {
    switch (family) {
        case DriftFamily::DoubleWell1D: return "double_well";
        case DriftFamily::SymmetricTwoWell: return "two_well";
        case DriftFamily::AsymmetricCubic1D: return "asymmetric_cubic";
        case DriftFamily::MeanFieldOU: return "mean_field_ou";
    }
    return "?";
}

void DriftSpec::validate() const {
    require(lambda > 0.0 && std::isfinite(lambda), "drift lambda must be positive");
    require(kappa >= 0.0 && std::isfinite(kappa), "drift kappa must be nonnegative");
    switch (family) {
        case DriftFamily::DoubleWell1D:
            require(a1 * a2 < 0.0, "double_well requires a1 * a2 < 0");
            break;
        case DriftFamily::SymmetricTwoWell:
            require(!y1.empty() && y1.size() == y2.size(), "two_well needs y1, y2 of equal nonzero dimension");
            break;
        case DriftFamily::AsymmetricCubic1D:
            require(beta >= 1.0, "asymmetric_cubic requires beta >= 1");
            require(std::isfinite(g.amp) && std::isfinite(g.rate) && std::isfinite(g.phase), "g parameters must be finite");
            break;
        case DriftFamily::MeanFieldOU:
            break;
    }
}

MeasureStats measure_stats(const DriftSpec& spec, const EmpiricalMeasure& mu) {
    if (mu.empty()) fail(ErrorCode::EmptyMeasure, "drift evaluated against an empty measure");
    if (mu.dim() != spec.dim()) fail(ErrorCode::DimensionMismatch, "measure dimension does not match drift");
    MeasureStats st;
    st.mean = mu.mean();
    if (spec.family == DriftFamily::AsymmetricCubic1D) {
        for (std::size_t i = 0; i < mu.size(); ++i) {
            double y = mu.point(i)[0];
            st.mean_abs += mu.weights()[i] * std::abs(y);
            st.mean_g += mu.weights()[i] * spec.g(y);
        }
    }
    return st;
}

void eval_drift(const DriftSpec& s, const double* x, const MeasureStats& st, double* out) {
    switch (s.family) {
        case DriftFamily::DoubleWell1D: {
            double v = x[0];
            out[0] = -s.lambda * v * (v - s.a1) * (v - s.a2) - s.kappa * (v - st.mean[0]);
            return;
        }
        case DriftFamily::SymmetricTwoWell: {
            const std::size_t d = s.y1.size();
            double n1 = 0.0, n2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                n1 += (x[k] - s.y1[k]) * (x[k] - s.y1[k]);
                n2 += (x[k] - s.y2[k]) * (x[k] - s.y2[k]);
            }
            for (std::size_t k = 0; k < d; ++k)
                out[k] = -0.5 * s.lambda * ((x[k] - s.y1[k]) * n2 + (x[k] - s.y2[k]) * n1) -
                         s.kappa * (x[k] - st.mean[k]);
            return;
        }
        case DriftFamily::AsymmetricCubic1D: {
            double v = x[0];
            out[0] = -s.lambda * v * (v - 1.0) * (v + 2.0) +
                     s.kappa * (std::pow(1.0 + v * v, 0.5 * (s.beta - 1.0)) * st.mean_abs + st.mean_g);
            return;
        }
        case DriftFamily::MeanFieldOU:
            out[0] = -s.lambda * x[0] + st.mean[0];
            return;
    }
}

std::vector<double> eval_drift(const DriftSpec& spec, const std::vector<double>& x, const EmpiricalMeasure& mu) {
    if (static_cast<int>(x.size()) != spec.dim()) fail(ErrorCode::DimensionMismatch, "x dimension does not match drift");
    MeasureStats st = measure_stats(spec, mu);
    std::vector<double> out(x.size());
    eval_drift(spec, x.data(), st, out.data());
    return out;
}

const char* a1_case_name(A1Case c) {
    switch (c) {
        case A1Case::CaseI: return "i";
        case A1Case::CaseII: return "ii";
        case A1Case::None: return "none";
    }
    return "?";
}

A1Params::A1Params(double C_b_, double lambda1_, double lambda2_, double theta1_, double theta2_,
                   double theta3_, double theta4_, double beta_)
    : C_b(C_b_), lambda1(lambda1_), lambda2(lambda2_), theta1(theta1_), theta2(theta2_), theta3(theta3_),
      theta4(theta4_), beta(beta_) {
    require(C_b >= 0.0 && lambda1 >= 0.0 && lambda2 >= 0.0, "C_b, lambda1, lambda2 must be nonnegative");
    require(theta1 > 0.0 && theta3 > 0.0 && theta4 > 0.0, "theta1, theta3, theta4 must be positive");
    require(theta2 >= 0.0, "theta2 must be nonnegative");
    require(beta > 0.0, "beta must be positive");
    require(theta1 >= 1.0 - 0.5 * beta, "theta1 >= 1 - beta/2 violated");
    require(theta2 < 1.0 + theta1, "theta2 < 1 + theta1 violated");
    beta_star = beta + theta1 - 1.0;
    require(theta3 <= beta_star, "theta3 must lie in (0, beta*]");
    gamma1 = std::max(0.0, beta + theta2 - 2.0) / beta_star;
    gamma2 = std::max(0.0, beta - 1.0) / beta_star;
    require(gamma1 < 1.0, "gamma1 must lie in [0, 1)");
    double lhs = beta_star * (1.0 - gamma1);
    double rhs = theta3 * theta4;
    if (std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)))
        regime = lambda1 > lambda2 ? A1Case::CaseII : A1Case::None;
    else
        regime = lhs > rhs ? A1Case::CaseI : A1Case::None;
}

void A1Params::require_case() const {
    if (regime == A1Case::None)
        fail(ErrorCode::CaseViolation,
             "A1 parameters satisfy neither case (i) beta*(1-gamma1) > theta3*theta4 nor case (ii) "
             "beta*(1-gamma1) = theta3*theta4 with lambda1 > lambda2");
}

double default_beta(double alpha) { return 0.5 * (1.0 + alpha); }

namespace {

// Measure-free part f of the bound <x, b(x, mu)> <= f(x) + lambda2 (1+|x|^2)^{theta2/2} mu(|.|).
double free_part(const DriftSpec& s, const double* x) {
    switch (s.family) {
        case DriftFamily::DoubleWell1D: {
            double v = x[0];
            return -s.lambda * v * v * (v - s.a1) * (v - s.a2) - s.kappa * v * v;
        }
        case DriftFamily::SymmetricTwoWell: {
            MeasureStats st;
            st.mean.assign(s.y1.size(), 0.0);
            std::vector<double> b(s.y1.size());
            eval_drift(s, x, st, b.data());
            double ip = 0.0;
            for (std::size_t k = 0; k < b.size(); ++k) ip += x[k] * b[k];
            return ip;
        }
        case DriftFamily::AsymmetricCubic1D: {
            double v = x[0];
            return -s.lambda * v * v * (v - 1.0) * (v + 2.0) + s.kappa * std::abs(v) * s.g.sup_abs();
        }
        case DriftFamily::MeanFieldOU:
            return -s.lambda * x[0] * x[0];
    }
    return 0.0;
}

double grid_sup(const std::function<double(const double*)>& F, int d) {
    const double lo = -50.0, hi = 50.0;
    long n = d == 1 ? 10001 : std::min<long>(2001, static_cast<long>(std::pow(2.0e6, 1.0 / d)));
    double step = (hi - lo) / static_cast<double>(n - 1);
    std::vector<double> x(static_cast<std::size_t>(d)), best_x(static_cast<std::size_t>(d));
    std::vector<long> idx(static_cast<std::size_t>(d), 0);
    double best = -INFINITY;
    for (;;) {
        for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = lo + step * static_cast<double>(idx[static_cast<std::size_t>(k)]);
        double v = F(x.data());
        if (v > best) {
            best = v;
            best_x = x;
        }
        int k = 0;
        while (k < d && ++idx[static_cast<std::size_t>(k)] == n) idx[static_cast<std::size_t>(k++)] = 0;
        if (k == d) break;
    }
    // Compass search around the best node.
    double h = step;
    x = best_x;
    while (h > 1e-10) {
        bool moved = false;
        for (int k = 0; k < d; ++k) {
            for (double sgn : {-1.0, 1.0}) {
                std::vector<double> y = x;
                y[static_cast<std::size_t>(k)] += sgn * h;
                double v = F(y.data());
                if (v > best) {
                    best = v;
                    x = y;
                    moved = true;
                }
            }
        }
        if (!moved) h *= 0.5;
    }
    return best;
}

}  // namespace

A1Params lyapunov_params(const DriftSpec& spec, double beta) {
    if (spec.family == DriftFamily::MeanFieldOU && !(spec.lambda > 0.0))
        fail(ErrorCode::UnsupportedFamily, "mean_field_ou requires lambda > 0");
    spec.validate();
    require(beta > 0.0, "lyapunov beta must be positive");
    double lambda1, lambda2, theta1, theta2;
    switch (spec.family) {
        case DriftFamily::DoubleWell1D:
        case DriftFamily::SymmetricTwoWell:
            lambda1 = 0.5 * spec.lambda;
            lambda2 = spec.kappa;
            theta1 = 3.0;
            theta2 = 1.0;
            break;
        case DriftFamily::AsymmetricCubic1D:
            lambda1 = 0.5 * spec.lambda;
            lambda2 = spec.kappa;
            theta1 = 3.0;
            theta2 = spec.beta;
            break;
        case DriftFamily::MeanFieldOU:
        default:
            lambda1 = spec.lambda;
            lambda2 = 1.0;
            theta1 = 1.0;
            theta2 = 1.0;
            break;
    }
    const int d = spec.dim();
    auto F = [&](const double* x) {
        double n2 = 0.0;
        for (int k = 0; k < d; ++k) n2 += x[k] * x[k];
        return free_part(spec, x) + lambda1 * std::pow(n2, 0.5 * (1.0 + theta1));
    };
    double sup = grid_sup(F, d);
    double C_b = 1.05 * std::max(0.0, sup);
    return A1Params(C_b, lambda1, lambda2, theta1, theta2, 1.0, 1.0, beta);
}

E12Report verify_E12(const DriftSpec& spec, const A1Params& p, const std::vector<std::vector<double>>& grid,
                     const std::vector<EmpiricalMeasure>& measures) {
    require(!grid.empty(), "verify_E12 needs a nonempty grid");
    require(!measures.empty(), "verify_E12 needs at least one measure");
    E12Report rep;
    rep.worst_slack = INFINITY;
    const int d = spec.dim();
    std::vector<double> b(static_cast<std::size_t>(d));
    for (std::size_t m = 0; m < measures.size(); ++m) {
        MeasureStats st = measure_stats(spec, measures[m]);
        double mom = moment(measures[m], p.theta3);
        double inter = std::pow(mom, p.theta4);
        for (const auto& x : grid) {
            if (static_cast<int>(x.size()) != d) fail(ErrorCode::DimensionMismatch, "grid point dimension");
            eval_drift(spec, x.data(), st, b.data());
            double ip = 0.0, n2 = 0.0;
            for (int k = 0; k < d; ++k) {
                ip += x[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)];
                n2 += x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
            }
            double rhs = p.C_b - p.lambda1 * std::pow(n2, 0.5 * (1.0 + p.theta1)) +
                         p.lambda2 * std::pow(1.0 + n2, 0.5 * p.theta2) * inter;
            double slack = rhs - ip;
            rep.worst_slack = std::min(rep.worst_slack, slack);
            double tol = 1e-10 * (1.0 + std::abs(ip) + std::abs(rhs));
            if (slack < -tol) {
                rep.ok = false;
                rep.violations.push_back({x, m, slack});
            }
        }
    }
    return rep;
}

std::vector<std::vector<double>> canonical_grid(int dim) {
    std::vector<std::vector<double>> g;
    if (dim == 1) {
        for (int i = -100; i <= 100; ++i) g.push_back({0.1 * i});
        return g;
    }
    int n = dim == 2 ? 41 : 11;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    for (;;) {
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (int k = 0; k < dim; ++k) x[static_cast<std::size_t>(k)] = -10.0 + 20.0 * idx[static_cast<std::size_t>(k)] / (n - 1);
        g.push_back(x);
        int k = 0;
        while (k < dim && ++idx[static_cast<std::size_t>(k)] == n) idx[static_cast<std::size_t>(k++)] = 0;
        if (k == dim) break;
    }
    return g;
}

std::vector<EmpiricalMeasure> canonical_measures(int dim) {
    std::vector<double> z(static_cast<std::size_t>(dim), 0.0), f = z;
    f[0] = 5.0;
    return {EmpiricalMeasure::dirac(z), EmpiricalMeasure::dirac(f)};
}

}  // namespace lmv
