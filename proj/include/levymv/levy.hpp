#pragma once

#include <string>
#include <vector>

#include "levymv/rng.hpp"

namespace lmv {

enum class LevyKind { IsotropicStable, TruncatedStable, CompoundPoisson };

struct JumpDist {
    std::string name = "gaussian";  // only centred gaussians are supported
    double std = 1.0;
};

struct LevyMeasureSpec {
    LevyKind kind = LevyKind::IsotropicStable;
    double alpha = 1.5;
    double scale = 1.0;
    int dim = 1;
    double cutoff = 1.0;  // TruncatedStable
    double rate = 1.0;    // CompoundPoisson
    JumpDist jump_dist;   // CompoundPoisson

    void validate() const;
    bool is_brownian() const { return kind != LevyKind::CompoundPoisson && alpha == 2.0; }
    bool infinite_activity() const;
};

enum class RegionKind { Ball, Complement };

struct Region {
    RegionKind kind;
    double l;
    static Region ball(double l) { return {RegionKind::Ball, l}; }
    static Region complement(double l) { return {RegionKind::Complement, l}; }
};

// c_{d,alpha} such that the unit process has characteristic exponent |xi|^alpha.
double stable_constant(int d, double alpha);
// Surface area of the unit sphere in R^d.
double sphere_area(int d);

// Radial profile f(|z|) of the Levy density nu(dz) = f(|z|) dz.
double levy_density_radial(const LevyMeasureSpec& spec, double r);

double tail_moment(const LevyMeasureSpec& spec, double p, Region region);
// nu(|z|^p 1{l < |z| <= L}).
double shell_moment(const LevyMeasureSpec& spec, double p, double l, double L);
// nu(z 1{1 < |z| <= l}); zero for every supported (symmetric) kind.
std::vector<double> first_moment_vector(const LevyMeasureSpec& spec, double l);
// nu(B_1^c), the large-jump rate.
double tail_mass(const LevyMeasureSpec& spec, double l = 1.0);

double overlap_mass(const LevyMeasureSpec& spec, const std::vector<double>& x);
double overlap_mass_radial(const LevyMeasureSpec& spec, double r);
double J(const LevyMeasureSpec& spec, double r);

// One increment of the scaled process over a window of length dt, written to out[0..dim).
void sample_increment(const LevyMeasureSpec& spec, double dt, Stream& rng, double* out);
std::vector<double> sample_increment(const LevyMeasureSpec& spec, double dt, Stream& rng);

// Unit-scale, unit-time isotropic stable draw.
void sample_unit_stable(int dim, double alpha, Stream& rng, double* out);

// Precomputed sampler for repeated increments with a fixed dt.
class IncrementSampler {
public:
    IncrementSampler(const LevyMeasureSpec& spec, double dt);
    void operator()(Stream& rng, double* out) const;
    // True when every increment is gaussian_factor() * N(0, I).
    bool pure_gaussian() const { return spec_.is_brownian(); }
    double gaussian_factor() const { return factor_; }

private:
    LevyMeasureSpec spec_;
    double dt_;
    double factor_ = 0.0;        // stable: scale * dt^(1/alpha); brownian: scale * sqrt(dt)
    double small_std_ = 0.0;     // truncated: per-coordinate std of the gaussian substitute
    double big_rate_dt_ = 0.0;   // truncated / compound: expected jump count in dt
    double delta_ = 0.0;
};

// SigmaSpec: piecewise-linear sigma on [0, 2 l0].
struct SigmaSpec {
    std::vector<double> r;
    std::vector<double> value;

    double operator()(double s) const;
    void validate_shape() const;
    // Validates domination by s -> J(kappa ^ s) (kappa ^ s)^2 / (2 s) on a grid.
    void validate_h2(const LevyMeasureSpec& levy, double kappa, int grid_n = 20) const;
    // Integral of 1 / sigma over [0, t].
    double inverse_integral(double t) const;
};

}  // namespace lmv
