#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lmv {

// Weighted point cloud; points are stored row-major (n x dim).
class EmpiricalMeasure {
public:
    EmpiricalMeasure() = default;
    EmpiricalMeasure(int dim, std::vector<double> points);  // uniform weights
    EmpiricalMeasure(int dim, std::vector<double> points, std::vector<double> weights);

    static EmpiricalMeasure dirac(const std::vector<double>& x);

    int dim() const { return dim_; }
    std::size_t size() const { return weights_.size(); }
    bool empty() const { return weights_.empty(); }
    const double* point(std::size_t i) const { return points_.data() + i * static_cast<std::size_t>(dim_); }
    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    bool uniform_weights() const { return uniform_; }

    std::vector<double> mean() const;
    // Per-coordinate variance about the mean.
    std::vector<double> variance() const;

private:
    void validate();

    int dim_ = 0;
    std::vector<double> points_;
    std::vector<double> weights_;
    bool uniform_ = true;
};

// (1 - t) * a + t * b as a mixture (atoms concatenated).
EmpiricalMeasure mixture(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double t);

// n uniformly weighted atoms picked at cumulative weights (i + 1/2) / n, in stored order.
EmpiricalMeasure systematic_resample(const EmpiricalMeasure& mu, std::size_t n);

double moment(const EmpiricalMeasure& mu, double p, const std::vector<double>& center = {});

struct W1Options {
    int projections = 64;
    std::uint64_t projection_seed = 0x5eed5eedULL;
};

double w1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const W1Options& opt = {});
// Exact one-dimensional W1 between weighted samples on the line.
double w1_line(const std::vector<double>& x, const std::vector<double>& wx,
               const std::vector<double>& y, const std::vector<double>& wy);

// Binned estimate of sup_{|psi| <= U} |mu(psi) - nu(psi)|, U = (1 + |x|^2)^(beta0 / 2).
double weighted_tv(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double beta0);
// Same binning with U = 1.
double tv(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

double concentration(const EmpiricalMeasure& mu, const std::vector<double>& y, double r);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// CSV with header weight,x_1..x_d and 17 significant digits.
std::string measure_to_csv(const EmpiricalMeasure& mu);
EmpiricalMeasure measure_from_csv(const std::string& text);

}  // namespace lmv
