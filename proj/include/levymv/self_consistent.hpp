#pragma once

#include <string>
#include <vector>

namespace lmv {

// Stationary family pi_m(dx) proportional to exp(gamma m x - x^4 + beta x^2) dx.
struct GradientCase {
    double gamma = 1.0;
    double beta = 1.0;

    void validate() const;
};

// exponent(x) = gamma m x - x^4 + beta x^2
double gradient_exponent(const GradientCase& c, double m, double x);
// Maximum of the exponent over x and the half-width X beyond which it lies
// more than 60 below that maximum (on both sides).
struct Truncation {
    double max_exponent = 0.0;
    double argmax = 0.0;
    double x_max = 0.0;
};
Truncation truncation(const GradientCase& c, double m);

// Integral of (x - m) exp(gamma m x - x^4 + beta x^2) over the line.
double h_fn(const GradientCase& c, double m);
// h(m) / Z(m) = mean(pi_m) - m; same sign and roots as h, bounded in size.
double h_normalized(const GradientCase& c, double m);

struct RootCountResult {
    std::vector<double> roots;       // sign-crossing roots, ascending
    std::vector<double> tangential;  // near-zero extrema without a sign flip
    int count = 0;
};

// Sign-change scan of h on a uniform grid of grid_n cells over [-m_max, m_max],
// bisection to 1e-8. Throws GridTooCoarse when two roots are within 3 cells.
RootCountResult root_count(const GradientCase& c, double m_max, int grid_n = 2000);

// Half-width that contains every root of h for this case.
double default_m_max(const GradientCase& c);

struct BetaCResult {
    double beta_c = 0.0;
    bool above_gamma_c = false;  // gamma >= 2 sqrt(3): returned 0
    double formula_value = 0.0;  // (12 - gamma^2) / (2 gamma)
    int bisection_steps = 0;
};

// Smallest beta in [1e-3, 1e2] where the root count switches from 1 to 3,
// bisected to tol. NoTransition when the count never changes on the scan.
BetaCResult beta_c(double gamma, double tol = 1e-3);

double beta_c_formula(double gamma);

struct OuClass {
    std::string kind;      // "unique" or "continuum"
    std::string mean_set;  // description of the admissible means
    double variance = 0.0;
};
OuClass ou_classify(double lambda);

// exp(exponent) / Z on the grid; the grid must cover [-X, X] from truncation().
std::vector<double> stationary_density(const GradientCase& c, double m, const std::vector<double>& grid);

}  // namespace lmv
