#include "levymv/self_consistent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levymv/errors.hpp"
#include "levymv/quadrature.hpp"

namespace lmv {

namespace {

constexpr double kDrop = 60.0;
constexpr double kZero = 1e-12;
constexpr double kRootTol = 1e-8;

// Real roots of 4 x^3 - 2 beta x - gamma m = 0.
std::vector<double> critical_points(double beta, double gm) {
    const double p = -0.5 * beta;  // x^3 + p x + q = 0
    const double q = -0.25 * gm;
    std::vector<double> xs;
    double disc = -(4.0 * p * p * p + 27.0 * q * q);
    if (disc > 0.0) {
        double r = 2.0 * std::sqrt(-p / 3.0);
        double phi = std::acos(std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0));
        for (int k = 0; k < 3; ++k) xs.push_back(r * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0));
    } else {
        double s = std::sqrt(std::max(0.0, q * q / 4.0 + p * p * p / 27.0));
        xs.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s));
    }
    // One Newton polish per root.
    for (double& x : xs) {
        double f = 4.0 * x * x * x - 2.0 * beta * x - gm;
        double fp = 12.0 * x * x - 2.0 * beta;
        if (fp != 0.0) x -= f / fp;
    }
    return xs;
}

struct Moments {
    double z = 0.0;   // integral of exp(E - Emax)
    double m1 = 0.0;  // integral of (x - m) exp(E - Emax)
    double shift = 0.0;
};

Moments moments(const GradientCase& c, double m) {
    Truncation t = truncation(c, m);
    const double X = t.x_max;
    const double xp = std::abs(t.argmax);
    std::vector<double> breaks{-X, 0.0, X};
    if (xp > 0.0 && xp < X) {
        breaks.push_back(-xp);
        breaks.push_back(xp);
    }
    std::sort(breaks.begin(), breaks.end());
    auto w = [&](double x) { return std::exp(gradient_exponent(c, m, x) - t.max_exponent); };
    QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-13;
    QuadResult z = integrate_pieces(w, breaks, opt);
    // The normalizing mass is at least of order exp(-1) * (peak width), so
    // 1e-10 of it is a safe absolute target for the first moment.
    opt.abs_tol = 1e-10 * z.value;
    opt.rel_tol = 0.0;
    QuadResult h = integrate_pieces([&](double x) { return (x - m) * w(x); }, breaks, opt);
    if (!z.converged || !h.converged)
        fail(ErrorCode::QuadratureFailure, "h quadrature did not converge at m = " + std::to_string(m));
    return {z.value, h.value, t.max_exponent};
}

int sign_of(double v) { return v > kZero ? 1 : (v < -kZero ? -1 : 0); }

double bisect(const GradientCase& c, double a, double b, double fa) {
    while (b - a > kRootTol) {
        double mid = 0.5 * (a + b);
        double fm = h_normalized(c, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section minimum of |H| on [a, b].
std::pair<double, double> min_abs(const GradientCase& c, double a, double b) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = std::abs(h_normalized(c, x1)), f2 = std::abs(h_normalized(c, x2));
    while (b - a > kRootTol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = std::abs(h_normalized(c, x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = std::abs(h_normalized(c, x2));
        }
    }
    return f1 < f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// Count with grid refinement when roots are too close; a grid of 64000 cells
// that is still too coarse means at least two roots, reported as count 3.
int count_at(const GradientCase& c, double m_max) {
    for (int n = 2000; n <= 64000; n *= 2) {
        try {
            return root_count(c, m_max, n).count;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::GridTooCoarse) throw;
        }
    }
    return 3;
}

}  // namespace

void GradientCase::validate() const {
    require(gamma > 0.0 && std::isfinite(gamma), "gamma must be positive");
    require(beta > 0.0 && std::isfinite(beta), "beta must be positive");
}

double gradient_exponent(const GradientCase& c, double m, double x) {
    double x2 = x * x;
    return c.gamma * m * x - x2 * x2 + c.beta * x2;
}

Truncation truncation(const GradientCase& c, double m) {
    c.validate();
    Truncation t;
    t.max_exponent = -INFINITY;
    for (double x : critical_points(c.beta, c.gamma * m)) {
        double e = gradient_exponent(c, m, x);
        if (e > t.max_exponent) {
            t.max_exponent = e;
            t.argmax = x;
        }
    }
    // Largest |x| where the envelope gamma |m| |x| - x^4 + beta x^2 reaches Emax - 60.
    const double gm = c.gamma * std::abs(m);
    auto env = [&](double x) { return gm * x - x * x * x * x + c.beta * x * x; };
    const double target = t.max_exponent - kDrop;
    double hi = std::max(1.0, std::abs(t.argmax));
    while (env(hi) > target) hi *= 2.0;
    double lo = std::abs(t.argmax);
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (env(mid) > target ? lo : hi) = mid;
    }
    t.x_max = hi;
    return t;
}

double h_fn(const GradientCase& c, double m) {
    Moments mo = moments(c, m);
    return mo.m1 * std::exp(mo.shift);
}

double h_normalized(const GradientCase& c, double m) {
    Moments mo = moments(c, m);
    return mo.m1 / mo.z;
}

RootCountResult root_count(const GradientCase& c, double m_max, int grid_n) {
    c.validate();
    require(m_max > 0.0, "m_max must be positive");
    require(grid_n >= 1000, "grid_n must be at least 1000");
    if (grid_n % 2 == 1) ++grid_n;
    const double step = 2.0 * m_max / grid_n;
    std::vector<double> ms(static_cast<std::size_t>(grid_n) + 1), hs(ms.size());
    for (int i = 0; i <= grid_n; ++i) {
        ms[static_cast<std::size_t>(i)] = m_max * (2.0 * i - grid_n) / grid_n;
        hs[static_cast<std::size_t>(i)] = h_normalized(c, ms[static_cast<std::size_t>(i)]);
    }
    RootCountResult out;
    const auto n = static_cast<std::size_t>(grid_n);
    for (std::size_t i = 0; i <= n; ++i) {
        int s = sign_of(hs[i]);
        if (s == 0) {
            if (i == 0 || i == n) continue;
            int sl = sign_of(hs[i - 1]), sr = sign_of(hs[i + 1]);
            if (sl * sr < 0)
                out.roots.push_back(ms[i]);
            else
                out.tangential.push_back(ms[i]);
            continue;
        }
        if (i < n && s * sign_of(hs[i + 1]) < 0) out.roots.push_back(bisect(c, ms[i], ms[i + 1], hs[i]));
        if (i > 0 && i < n && sign_of(hs[i - 1]) == s && sign_of(hs[i + 1]) == s &&
            std::abs(hs[i]) < std::abs(hs[i - 1]) && std::abs(hs[i]) <= std::abs(hs[i + 1]) && std::abs(hs[i]) < 1e-3) {
            auto [x, f] = min_abs(c, ms[i - 1], ms[i + 1]);
            if (f <= kRootTol) out.tangential.push_back(x);
        }
    }
    std::sort(out.roots.begin(), out.roots.end());
    for (std::size_t i = 1; i < out.roots.size(); ++i)
        if (out.roots[i] - out.roots[i - 1] < 3.0 * step)
            fail(ErrorCode::GridTooCoarse, "roots " + std::to_string(out.roots[i - 1]) + " and " +
                                                std::to_string(out.roots[i]) + " are closer than 3 grid cells");
    out.count = static_cast<int>(out.roots.size());
    return out;
}

double default_m_max(const GradientCase& c) { return 1.0 + 1.5 * std::sqrt(0.25 * (c.gamma + 2.0 * c.beta)); }

double beta_c_formula(double gamma) { return (12.0 - gamma * gamma) / (2.0 * gamma); }

BetaCResult beta_c(double gamma, double tol) {
    require(gamma > 0.0 && std::isfinite(gamma), "gamma must be positive");
    require(tol > 0.0, "tol must be positive");
    BetaCResult r;
    r.formula_value = beta_c_formula(gamma);
    if (gamma >= 2.0 * std::sqrt(3.0)) {
        r.above_gamma_c = true;
        return r;
    }
    auto many = [&](double beta) {
        GradientCase c{gamma, beta};
        return count_at(c, default_m_max(c)) >= 3;
    };
    const int n = 51;
    double lo = 0.0, hi = 0.0;
    bool prev = false;
    bool found = false;
    for (int i = 0; i < n; ++i) {
        double b = std::pow(10.0, -3.0 + 5.0 * i / (n - 1));
        bool m = many(b);
        if (i == 0 && m)
            fail(ErrorCode::NoTransition, "root count is already 3 at beta = 1e-3 for gamma = " + std::to_string(gamma));
        if (i > 0 && m && !prev) {
            hi = b;
            found = true;
            break;
        }
        prev = m;
        lo = b;
    }
    if (!found) fail(ErrorCode::NoTransition, "root count never reaches 3 on [1e-3, 1e2]");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (many(mid) ? hi : lo) = mid;
        ++r.bisection_steps;
    }
    r.beta_c = 0.5 * (lo + hi);
    return r;
}

OuClass ou_classify(double lambda) {
    require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
    OuClass c;
    c.variance = 1.0 / (2.0 * lambda);
    if (lambda == 1.0) {
        c.kind = "continuum";
        c.mean_set = "every real mean m: N(m, 1/2) is stationary";
    } else {
        c.kind = "unique";
        c.mean_set = "mean 0 only";
    }
    return c;
}

std::vector<double> stationary_density(const GradientCase& c, double m, const std::vector<double>& grid) {
    require(!grid.empty(), "density grid is empty");
    Truncation t = truncation(c, m);
    auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
    require(*lo <= -t.x_max && *hi >= t.x_max,
            "grid must cover [-" + std::to_string(t.x_max) + ", " + std::to_string(t.x_max) + "]");
    Moments mo = moments(c, m);
    std::vector<double> out;
    out.reserve(grid.size());
    for (double x : grid) out.push_back(std::exp(gradient_exponent(c, m, x) - mo.shift) / mo.z);
    return out;
}

}  // namespace lmv
