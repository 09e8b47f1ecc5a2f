#pragma once

#include <functional>
#include <vector>

namespace lmv {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

// Globally adaptive Gauss-Kronrod (7, 15) bisection on [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

// Sum of integrals over consecutive pieces of a sorted breakpoint list.
QuadResult integrate_pieces(const std::function<double(double)>& f,
                            const std::vector<double>& breaks, const QuadOptions& opt = {});

// Integral over [a, inf) through x = a + t / (1 - t).
QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            const QuadOptions& opt = {});

// Throwing convenience wrappers (QuadratureFailure on non-convergence).
double quad(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt = {});
double quad_inf(const std::function<double(double)>& f, double a, const QuadOptions& opt = {});

}  // namespace lmv
