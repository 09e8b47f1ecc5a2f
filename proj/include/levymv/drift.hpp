#pragma once

#include <string>
#include <vector>

#include "levymv/measures.hpp"

namespace lmv {

enum class DriftFamily { DoubleWell1D, SymmetricTwoWell, AsymmetricCubic1D, MeanFieldOU };

enum class GKind { TanhScaled, Cosine, Constant };

// g(y) = amp * tanh(rate * y), amp * cos(rate * y + phase), or amp.
struct GSpec {
    GKind kind = GKind::TanhScaled;
    double amp = 0.5;
    double rate = 1.0;
    double phase = 0.0;

    double operator()(double y) const;
    double sup_abs() const;
};

struct DriftSpec {
    DriftFamily family = DriftFamily::MeanFieldOU;
    double lambda = 1.0;
    double kappa = 0.0;
    double a1 = -1.0, a2 = 1.0;     // DoubleWell1D
    std::vector<double> y1, y2;     // SymmetricTwoWell
    double beta = 1.2;              // AsymmetricCubic1D
    GSpec g;                        // AsymmetricCubic1D

    static DriftSpec double_well(double lambda, double a1, double a2, double kappa);
    static DriftSpec two_well(double lambda, std::vector<double> y1, std::vector<double> y2, double kappa);
    static DriftSpec asymmetric_cubic(double lambda, double kappa, double beta, GSpec g);
    static DriftSpec mean_field_ou(double lambda);

    int dim() const;
    void validate() const;
    const char* family_name() const;
};

// The measure enters every built-in drift only through these averages.
struct MeasureStats {
    std::vector<double> mean;
    double mean_abs = 0.0;
    double mean_g = 0.0;
};

MeasureStats measure_stats(const DriftSpec& spec, const EmpiricalMeasure& mu);
// out[0..dim) = b(x, stats).
void eval_drift(const DriftSpec& spec, const double* x, const MeasureStats& stats, double* out);
std::vector<double> eval_drift(const DriftSpec& spec, const std::vector<double>& x, const EmpiricalMeasure& mu);

enum class A1Case { CaseI, CaseII, None };

const char* a1_case_name(A1Case c);

struct A1Params {
    double C_b = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double theta1 = 1.0;
    double theta2 = 0.0;
    double theta3 = 1.0;
    double theta4 = 1.0;
    double beta = 1.0;
    // derived
    double beta_star = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    A1Case regime = A1Case::None;

    A1Params() = default;
    A1Params(double C_b, double lambda1, double lambda2, double theta1, double theta2, double theta3,
             double theta4, double beta);

    // h(r) = r / (1 + r)
    static double h(double r) { return r / (1.0 + r); }
    // Throws CaseViolation unless regime is case (i) or (ii).
    void require_case() const;
};

double default_beta(double alpha);

// Known (A1) parameters of a built-in family, with C_b from a grid supremum.
A1Params lyapunov_params(const DriftSpec& spec, double beta);

struct E12Report {
    bool ok = true;
    double worst_slack = 0.0;
    struct Violation {
        std::vector<double> x;
        std::size_t measure_index;
        double slack;
    };
    std::vector<Violation> violations;
};

E12Report verify_E12(const DriftSpec& spec, const A1Params& params, const std::vector<std::vector<double>>& grid,
                     const std::vector<EmpiricalMeasure>& measures);

// Grid [-10, 10] (step 0.1 in 1-D) and measures {delta_0, delta_5 e1}.
std::vector<std::vector<double>> canonical_grid(int dim);
std::vector<EmpiricalMeasure> canonical_measures(int dim);

}  // namespace lmv
