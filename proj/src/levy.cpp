#include "levymv/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "levymv/errors.hpp"
#include "levymv/quadrature.hpp"

namespace lmv {

namespace {

constexpr double kPi = std::numbers::pi;

// sigma^alpha * c_{d,alpha} * |S^{d-1}|, so nu(|z| in dr) = radial_constant * r^{-1-alpha} dr.
double radial_constant(const LevyMeasureSpec& s) {
    return std::pow(s.scale, s.alpha) * stable_constant(s.dim, s.alpha) * sphere_area(s.dim);
}

// Integral of r^{q-1} over [a, b] (b may be inf when q < 0).
double power_integral(double q, double a, double b) {
    if (q == 0.0) return std::log(b / a);
    double hi = std::isinf(b) ? 0.0 : std::pow(b, q);
    return (hi - std::pow(a, q)) / q;
}

void check_region(double l) {
    if (!(l > 0.0) || std::isnan(l))
        fail(ErrorCode::InvalidRegion, "region radius must be positive, got " + std::to_string(l));
}

// Radial density of |Z| for nu = rate * N(0, s^2 I_d).
double chi_density(int d, double s, double r) {
    double half_d = 0.5 * d;
    double log_norm = (half_d - 1.0) * std::log(2.0) + std::lgamma(half_d) + d * std::log(s);
    return std::exp((d - 1) * std::log(r) - 0.5 * r * r / (s * s) - log_norm);
}

double cp_moment(const LevyMeasureSpec& spec, double p, double lo, double hi) {
    double s = spec.scale * spec.jump_dist.std;
    // Beyond r_max the radial density is below 1e-30 relative to its peak.
    double r_max = s * (std::sqrt(static_cast<double>(spec.dim)) + std::sqrt(2.0 * 70.0) + 2.0);
    hi = std::min(hi, r_max);
    if (hi <= lo) return 0.0;
    auto f = [&](double r) { return r <= 0.0 ? 0.0 : std::pow(r, p) * chi_density(spec.dim, s, r); };
    QuadOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;
    std::vector<double> br{lo, hi};
    double mode = s * std::sqrt(std::max(0.0, spec.dim - 1.0 + p));
    if (mode > lo && mode < hi) br.push_back(mode);
    QuadResult r = integrate_pieces(f, br, opt);
    if (!r.converged) fail(ErrorCode::QuadratureFailure, "compound Poisson moment quadrature failed");
    return spec.rate * r.value;
}

}  // namespace

void LevyMeasureSpec::validate() const {
    require(dim >= 1, "levy dim must be >= 1");
    require(scale > 0.0 && std::isfinite(scale), "levy scale must be positive");
    switch (kind) {
        case LevyKind::IsotropicStable:
            require(alpha > 0.0 && alpha <= 2.0, "stable alpha must lie in (0, 2]");
            break;
        case LevyKind::TruncatedStable:
            require(alpha > 0.0 && alpha <= 2.0, "stable alpha must lie in (0, 2]");
            require(cutoff > 0.0 && std::isfinite(cutoff), "truncation cutoff must be positive");
            break;
        case LevyKind::CompoundPoisson:
            require(rate > 0.0 && std::isfinite(rate), "compound Poisson rate must be positive");
            require(jump_dist.name == "gaussian", "only gaussian jump_dist is supported");
            require(jump_dist.std > 0.0, "jump_dist std must be positive");
            break;
    }
}

bool LevyMeasureSpec::infinite_activity() const {
    return kind != LevyKind::CompoundPoisson && alpha < 2.0;
}

double stable_constant(int d, double alpha) {
    return alpha * std::pow(2.0, alpha - 1.0) * std::tgamma(0.5 * (d + alpha)) /
           (std::pow(kPi, 0.5 * d) * std::tgamma(1.0 - 0.5 * alpha));
}

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

double levy_density_radial(const LevyMeasureSpec& spec, double r) {
    switch (spec.kind) {
        case LevyKind::IsotropicStable:
        case LevyKind::TruncatedStable: {
            if (spec.alpha >= 2.0) return 0.0;
            if (spec.kind == LevyKind::TruncatedStable && r > spec.cutoff) return 0.0;
            if (r <= 0.0) return INFINITY;
            return std::pow(spec.scale, spec.alpha) * stable_constant(spec.dim, spec.alpha) *
                   std::pow(r, -spec.dim - spec.alpha);
        }
        case LevyKind::CompoundPoisson: {
            double s = spec.scale * spec.jump_dist.std;
            return spec.rate * std::exp(-0.5 * r * r / (s * s) - 0.5 * spec.dim * std::log(2.0 * kPi * s * s));
        }
    }
    return 0.0;
}

double tail_moment(const LevyMeasureSpec& spec, double p, Region region) {
    spec.validate();
    check_region(region.l);
    require(p >= 0.0, "moment order must be nonnegative");
    const double l = region.l;
    if (spec.kind == LevyKind::CompoundPoisson) {
        return region.kind == RegionKind::Complement ? cp_moment(spec, p, l, INFINITY)
                                                     : cp_moment(spec, p, 0.0, l);
    }
    if (spec.alpha >= 2.0) return 0.0;
    const double a = spec.alpha;
    const double cr = radial_constant(spec);
    if (spec.kind == LevyKind::IsotropicStable) {
        if (region.kind == RegionKind::Complement) {
            if (p >= a)
                fail(ErrorCode::DivergentMoment,
                     "nu(|z|^p 1{|z|>l}) diverges for p >= alpha (p=" + std::to_string(p) +
                         ", alpha=" + std::to_string(a) + ")");
            return cr * std::pow(l, p - a) / (a - p);
        }
        if (p <= a)
            fail(ErrorCode::DivergentMoment, "nu(|z|^p 1{|z|<=l}) diverges for p <= alpha (p=" +
                                                 std::to_string(p) + ", alpha=" + std::to_string(a) + ")");
        return cr * std::pow(l, p - a) / (p - a);
    }
    // Truncated stable: support is the closed ball of radius cutoff.
    const double cut = spec.cutoff;
    if (region.kind == RegionKind::Complement) {
        if (l >= cut) return 0.0;
        return cr * power_integral(p - a, l, cut);
    }
    if (p <= a)
        fail(ErrorCode::DivergentMoment, "nu(|z|^p 1{|z|<=l}) diverges for p <= alpha");
    return cr * std::pow(std::min(l, cut), p - a) / (p - a);
}

double shell_moment(const LevyMeasureSpec& spec, double p, double l, double L) {
    spec.validate();
    check_region(l);
    require(L > l, "shell requires L > l");
    if (spec.kind == LevyKind::CompoundPoisson) return cp_moment(spec, p, l, L);
    if (spec.alpha >= 2.0) return 0.0;
    if (spec.kind == LevyKind::TruncatedStable) {
        L = std::min(L, spec.cutoff);
        if (L <= l) return 0.0;
    }
    return radial_constant(spec) * power_integral(p - spec.alpha, l, L);
}

std::vector<double> first_moment_vector(const LevyMeasureSpec& spec, double l) {
    spec.validate();
    check_region(l);
    return std::vector<double>(static_cast<std::size_t>(spec.dim), 0.0);
}

double tail_mass(const LevyMeasureSpec& spec, double l) {
    return tail_moment(spec, 0.0, Region::complement(l));
}

double overlap_mass_radial(const LevyMeasureSpec& spec, double r) {
    spec.validate();
    if (spec.kind != LevyKind::CompoundPoisson && spec.alpha >= 2.0) return 0.0;
    if (r == 0.0) {
        if (spec.infinite_activity())
            fail(ErrorCode::InfiniteOverlap, "overlap at x = 0 is infinite for an infinite-activity measure");
        return spec.rate;
    }
    r = std::abs(r);
    auto f = [&](double t) { return levy_density_radial(spec, std::abs(t)); };
    QuadOptions opt;
    opt.abs_tol = 1e-10;
    opt.rel_tol = 1e-11;
    opt.max_intervals = 2000;
    if (spec.dim == 1) {
        auto g = [&](double z) { return std::min(f(z), f(z - r)); };
        std::vector<double> br{0.0, 0.5 * r, r};
        if (spec.kind == LevyKind::TruncatedStable) {
            for (double b : {-spec.cutoff, spec.cutoff, r - spec.cutoff, r + spec.cutoff}) br.push_back(b);
        }
        std::sort(br.begin(), br.end());
        QuadResult left = integrate_to_inf([&](double z) { return g(br.front() - z); }, 0.0, opt);
        QuadResult mid = integrate_pieces(g, br, opt);
        QuadResult right = integrate_to_inf([&](double z) { return g(br.back() + z); }, 0.0, opt);
        if (!(left.converged && mid.converged && right.converged))
            fail(ErrorCode::QuadratureFailure, "overlap quadrature did not converge");
        return left.value + mid.value + right.value;
    }
    // d >= 2: every supported density is radially non-increasing, so min(f(z), f(z - x)) picks the point
    // farther from the origin and the overlap is twice the mass of the half-space {z.e > r/2}.
    // For the isotropic stable measure that half-space mass is the one-dimensional tail (projection).
    if (spec.kind == LevyKind::IsotropicStable)
        return 2.0 * std::pow(spec.scale, spec.alpha) * stable_constant(1, spec.alpha) *
               std::pow(0.5 * r, -spec.alpha) / spec.alpha;
    const double area = sphere_area(spec.dim - 1);
    const int dm2 = spec.dim - 2;
    const bool truncated = spec.kind == LevyKind::TruncatedStable;
    const double h0 = 0.5 * r;
    if (truncated && h0 >= spec.cutoff) return 0.0;
    QuadOptions inner_opt = opt;
    inner_opt.abs_tol = 1e-13;
    bool ok = true;
    auto slab = [&](double s) {
        auto g = [&](double rho) {
            double v = f(std::hypot(s, rho));
            return v == 0.0 ? 0.0 : area * std::pow(rho, dm2) * v;
        };
        if (truncated) {
            if (s >= spec.cutoff) return 0.0;
            QuadResult a = integrate_pieces(g, {0.0, std::sqrt(spec.cutoff * spec.cutoff - s * s)}, inner_opt);
            ok = ok && a.converged;
            return a.value;
        }
        QuadResult a = integrate_pieces(g, {0.0, s}, inner_opt);
        QuadResult b = integrate_to_inf([&](double rho) { return g(s + rho); }, 0.0, inner_opt);
        ok = ok && a.converged && b.converged;
        return a.value + b.value;
    };
    QuadResult outer = truncated ? integrate_pieces(slab, {h0, spec.cutoff}, opt)
                                 : integrate_to_inf([&](double t) { return slab(h0 + t); }, 0.0, opt);
    if (!(ok && outer.converged)) fail(ErrorCode::QuadratureFailure, "overlap quadrature did not converge");
    return 2.0 * outer.value;
}

double overlap_mass(const LevyMeasureSpec& spec, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != spec.dim)
        fail(ErrorCode::DimensionMismatch, "overlap_mass: x has wrong dimension");
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    return overlap_mass_radial(spec, std::sqrt(n2));
}

double J(const LevyMeasureSpec& spec, double r) {
    require(r > 0.0, "J requires r > 0");
    double best = overlap_mass_radial(spec, r);
    for (int k = 1; k <= 4; ++k) {
        double v = overlap_mass_radial(spec, r * k / 5.0);
        if (v < best * (1.0 - 1e-9)) best = v;
    }
    return best;
}

void sample_unit_stable(int dim, double alpha, Stream& rng, double* out) {
    if (alpha >= 2.0) {
        for (int i = 0; i < dim; ++i) out[i] = std::numbers::sqrt2 * rng.normal();
        return;
    }
    if (dim == 1) {
        double v = kPi * (rng.uniform() - 0.5);
        double w = rng.exponential();
        if (alpha == 1.0) {
            out[0] = std::tan(v);
            return;
        }
        out[0] = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                 std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
        return;
    }
    // Sub-gaussian: sqrt(A) * N(0, 2 I) with A positive (alpha/2)-stable, E exp(-sA) = exp(-s^(alpha/2)).
    const double a = 0.5 * alpha;
    double u = kPi * rng.uniform();
    double w = rng.exponential();
    double A = std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) *
               std::pow(std::sin((1.0 - a) * u) / w, (1.0 - a) / a);
    double f = std::sqrt(2.0 * A);
    for (int i = 0; i < dim; ++i) out[i] = f * rng.normal();
}

IncrementSampler::IncrementSampler(const LevyMeasureSpec& spec, double dt) : spec_(spec), dt_(dt) {
    spec.validate();
    require(dt > 0.0, "dt must be positive");
    switch (spec.kind) {
        case LevyKind::IsotropicStable:
            factor_ = spec.alpha >= 2.0 ? spec.scale * std::sqrt(dt) : spec.scale * std::pow(dt, 1.0 / spec.alpha);
            break;
        case LevyKind::TruncatedStable:
            if (spec.alpha >= 2.0) {
                factor_ = spec.scale * std::sqrt(dt);
            } else {
                delta_ = 0.01 * spec.cutoff;
                small_std_ = std::sqrt(tail_moment(spec, 2.0, Region::ball(delta_)) * dt / spec.dim);
                big_rate_dt_ = shell_moment(spec, 0.0, delta_, spec.cutoff) * dt;
            }
            break;
        case LevyKind::CompoundPoisson:
            big_rate_dt_ = spec.rate * dt;
            factor_ = spec.scale * spec.jump_dist.std;
            break;
    }
}

void IncrementSampler::operator()(Stream& rng, double* out) const {
    const int d = spec_.dim;
    switch (spec_.kind) {
        case LevyKind::IsotropicStable:
            if (spec_.alpha >= 2.0) {
                for (int i = 0; i < d; ++i) out[i] = factor_ * rng.normal();
            } else {
                sample_unit_stable(d, spec_.alpha, rng, out);
                for (int i = 0; i < d; ++i) out[i] *= factor_;
            }
            return;
        case LevyKind::TruncatedStable: {
            if (spec_.alpha >= 2.0) {
                for (int i = 0; i < d; ++i) out[i] = factor_ * rng.normal();
                return;
            }
            for (int i = 0; i < d; ++i) out[i] = small_std_ * rng.normal();
            std::uint64_t n = rng.poisson(big_rate_dt_);
            const double a = spec_.alpha;
            const double lo = std::pow(delta_, -a);
            const double hi = std::pow(spec_.cutoff, -a);
            double dir[16];
            double* dv = d <= 16 ? dir : new double[static_cast<std::size_t>(d)];
            for (std::uint64_t k = 0; k < n; ++k) {
                double radius = std::pow(lo - rng.uniform() * (lo - hi), -1.0 / a);
                if (d == 1) {
                    out[0] += rng.uniform() < 0.5 ? -radius : radius;
                    continue;
                }
                double nn = 0.0;
                for (int i = 0; i < d; ++i) {
                    dv[i] = rng.normal();
                    nn += dv[i] * dv[i];
                }
                double inv = radius / std::sqrt(nn);
                for (int i = 0; i < d; ++i) out[i] += dv[i] * inv;
            }
            if (dv != dir) delete[] dv;
            return;
        }
        case LevyKind::CompoundPoisson: {
            std::uint64_t n = rng.poisson(big_rate_dt_);
            double f = factor_ * std::sqrt(static_cast<double>(n));
            for (int i = 0; i < d; ++i) out[i] = n == 0 ? 0.0 : f * rng.normal();
            return;
        }
    }
}

void sample_increment(const LevyMeasureSpec& spec, double dt, Stream& rng, double* out) {
    IncrementSampler(spec, dt)(rng, out);
}

std::vector<double> sample_increment(const LevyMeasureSpec& spec, double dt, Stream& rng) {
    std::vector<double> out(static_cast<std::size_t>(spec.dim));
    sample_increment(spec, dt, rng, out.data());
    return out;
}

double SigmaSpec::operator()(double s) const {
    if (s <= r.front()) return value.front();
    if (s >= r.back()) return value.back();
    auto it = std::upper_bound(r.begin(), r.end(), s);
    std::size_t i = static_cast<std::size_t>(it - r.begin());
    double t = (s - r[i - 1]) / (r[i] - r[i - 1]);
    return value[i - 1] + t * (value[i] - value[i - 1]);
}

void SigmaSpec::validate_shape() const {
    auto bad = [](const std::string& m) { fail(ErrorCode::SigmaViolatesH2, "sigma: " + m); };
    if (r.size() < 2 || r.size() != value.size()) bad("need at least two knots with matching values");
    if (r.front() != 0.0) bad("first knot must be at r = 0");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(value[i] > 0.0)) bad("values must be positive");
        if (i > 0 && !(r[i] > r[i - 1])) bad("knots must be strictly increasing");
        if (i > 0 && value[i] < value[i - 1]) bad("sigma must be non-decreasing");
    }
    for (std::size_t i = 2; i < r.size(); ++i) {
        double s1 = (value[i - 1] - value[i - 2]) / (r[i - 1] - r[i - 2]);
        double s2 = (value[i] - value[i - 1]) / (r[i] - r[i - 1]);
        if (s2 > s1 * (1.0 + 1e-12) + 1e-15) bad("sigma must be concave");
    }
}

void SigmaSpec::validate_h2(const LevyMeasureSpec& levy, double kappa, int grid_n) const {
    validate_shape();
    const double top = r.back();
    for (int k = 1; k <= grid_n; ++k) {
        double s = top * k / grid_n;
        double m = std::min(kappa, s);
        double bound = J(levy, m) * m * m / (2.0 * s);
        if ((*this)(s) > bound)
            fail(ErrorCode::SigmaViolatesH2, "sigma(" + std::to_string(s) + ") = " + std::to_string((*this)(s)) +
                                                 " exceeds J-bound " + std::to_string(bound));
    }
}

double SigmaSpec::inverse_integral(double t) const {
    require(t >= 0.0, "inverse_integral needs t >= 0");
    if (t == 0.0) return 0.0;
    std::vector<double> br{0.0, t};
    for (double k : r)
        if (k > 0.0 && k < t) br.push_back(k);
    QuadOptions opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-14;
    QuadResult res = integrate_pieces([this](double s) { return 1.0 / (*this)(s); }, br, opt);
    if (!res.converged) fail(ErrorCode::QuadratureFailure, "sigma inverse integral failed");
    return res.value;
}

}  // namespace lmv
