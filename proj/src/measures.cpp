#include "levymv/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/sort/spreadsort/spreadsort.hpp>

#include "levymv/errors.hpp"
#include "levymv/rng.hpp"

namespace lmv {

EmpiricalMeasure::EmpiricalMeasure(int dim, std::vector<double> points)
    : dim_(dim), points_(std::move(points)) {
    require(dim >= 1, "measure dim must be >= 1");
    require(points_.size() % static_cast<std::size_t>(dim) == 0, "point buffer not a multiple of dim");
    std::size_t n = points_.size() / static_cast<std::size_t>(dim);
    weights_.assign(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
    validate();
}

EmpiricalMeasure::EmpiricalMeasure(int dim, std::vector<double> points, std::vector<double> weights)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)) {
    require(dim >= 1, "measure dim must be >= 1");
    require(points_.size() == weights_.size() * static_cast<std::size_t>(dim),
            "point buffer does not match weight count");
    uniform_ = std::all_of(weights_.begin(), weights_.end(), [&](double w) { return w == weights_.front(); });
    validate();
}

EmpiricalMeasure EmpiricalMeasure::dirac(const std::vector<double>& x) {
    return EmpiricalMeasure(static_cast<int>(x.size()), x, {1.0});
}

void EmpiricalMeasure::validate() {
    for (double v : points_)
        require(std::isfinite(v), "measure points must be finite");
    if (weights_.empty()) return;
    // Neumaier summation keeps the 1e-12 check meaningful for large clouds.
    double s = 0.0, comp = 0.0;
    for (double w : weights_) {
        require(w >= 0.0 && std::isfinite(w), "weights must be nonnegative");
        double t = s + w;
        comp += std::abs(s) >= std::abs(w) ? (s - t) + w : (w - t) + s;
        s = t;
    }
    require(std::abs(s + comp - 1.0) <= 1e-12, "weights must sum to 1");
}

std::vector<double> EmpiricalMeasure::mean() const {
    if (empty()) fail(ErrorCode::EmptyMeasure, "mean of an empty measure");
    std::vector<double> m(static_cast<std::size_t>(dim_), 0.0);
    for (std::size_t i = 0; i < size(); ++i)
        for (int k = 0; k < dim_; ++k) m[static_cast<std::size_t>(k)] += weights_[i] * point(i)[k];
    return m;
}

std::vector<double> EmpiricalMeasure::variance() const {
    std::vector<double> m = mean();
    std::vector<double> v(m.size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i)
        for (int k = 0; k < dim_; ++k) {
            double d = point(i)[k] - m[static_cast<std::size_t>(k)];
            v[static_cast<std::size_t>(k)] += weights_[i] * d * d;
        }
    return v;
}

EmpiricalMeasure mixture(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double t) {
    if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "mixture of measures with different dims");
    require(t >= 0.0 && t <= 1.0, "mixture weight must lie in [0, 1]");
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    std::vector<double> pts = a.points();
    pts.insert(pts.end(), b.points().begin(), b.points().end());
    std::vector<double> w;
    w.reserve(a.size() + b.size());
    for (double x : a.weights()) w.push_back((1.0 - t) * x);
    for (double x : b.weights()) w.push_back(t * x);
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= s;
    return EmpiricalMeasure(a.dim(), std::move(pts), std::move(w));
}

EmpiricalMeasure systematic_resample(const EmpiricalMeasure& mu, std::size_t n) {
    if (mu.empty()) fail(ErrorCode::EmptyMeasure, "cannot resample an empty measure");
    require(n >= 1, "resample size must be positive");
    const auto d = static_cast<std::size_t>(mu.dim());
    std::vector<double> pts;
    pts.reserve(n * d);
    std::size_t j = 0;
    double cum = mu.weights()[0];
    for (std::size_t i = 0; i < n; ++i) {
        double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        while (cum < q && j + 1 < mu.size()) cum += mu.weights()[++j];
        pts.insert(pts.end(), mu.point(j), mu.point(j) + d);
    }
    return EmpiricalMeasure(mu.dim(), std::move(pts));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), "KS test needs two nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    // Q(lam) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lam^2)
    double q = 0.0;
    if (lam < 0.2) {
        q = 1.0;
    } else {
        for (int k = 1; k <= 100; ++k) {
            double term = std::exp(-2.0 * k * k * lam * lam);
            q += (k % 2 == 1 ? 2.0 : -2.0) * term;
            if (term < 1e-16) break;
        }
    }
    return {d, std::clamp(q, 0.0, 1.0)};
}

double moment(const EmpiricalMeasure& mu, double p, const std::vector<double>& center) {
    require(p > 0.0, "moment order must be positive");
    const int d = mu.dim();
    if (!center.empty() && static_cast<int>(center.size()) != d)
        fail(ErrorCode::DimensionMismatch, "moment center has wrong dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double n2 = 0.0;
        for (int k = 0; k < d; ++k) {
            double c = center.empty() ? 0.0 : center[static_cast<std::size_t>(k)];
            double v = mu.point(i)[k] - c;
            n2 += v * v;
        }
        s += mu.weights()[i] * (p == 2.0 ? n2 : std::pow(n2, 0.5 * p));
    }
    return s;
}

namespace {

struct Atom {
    double x;
    double w;
};

std::vector<Atom> sorted_atoms(const std::vector<double>& x, const std::vector<double>& w) {
    std::vector<Atom> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = {x[i], w[i]};
    std::sort(a.begin(), a.end(), [](const Atom& p, const Atom& q) { return p.x < q.x; });
    return a;
}

}  // namespace

double w1_line(const std::vector<double>& x, const std::vector<double>& wx, const std::vector<double>& y,
               const std::vector<double>& wy) {
    if (x.empty() || y.empty()) fail(ErrorCode::EmptyMeasure, "w1 of an empty measure");
    auto same = [&](const std::vector<double>& w) {
        return std::all_of(w.begin(), w.end(), [&](double v) { return v == wx[0]; });
    };
    if (x.size() == y.size() && same(wx) && same(wy)) {
        // Equal atom masses: the monotone coupling pairs order statistics.
        std::vector<double> a(x), b(y);
        boost::sort::spreadsort::float_sort(a.begin(), a.end());
        boost::sort::spreadsort::float_sort(b.begin(), b.end());
        double total = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
        return total * wx[0];
    }
    std::vector<Atom> a = sorted_atoms(x, wx);
    std::vector<Atom> b = sorted_atoms(y, wy);
    // Integral of |F - G| over the merged support.
    std::size_t i = 0, j = 0;
    double F = 0.0, G = 0.0, total = 0.0;
    double prev = std::min(a.front().x, b.front().x);
    while (i < a.size() || j < b.size()) {
        double next;
        if (j >= b.size() || (i < a.size() && a[i].x <= b[j].x))
            next = a[i].x;
        else
            next = b[j].x;
        total += std::abs(F - G) * (next - prev);
        while (i < a.size() && a[i].x == next) F += a[i++].w;
        while (j < b.size() && b[j].x == next) G += b[j++].w;
        prev = next;
    }
    return total;
}

double w1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const W1Options& opt) {
    if (mu.dim() != nu.dim()) fail(ErrorCode::DimensionMismatch, "w1: dimension mismatch");
    if (mu.empty() || nu.empty()) fail(ErrorCode::EmptyMeasure, "w1 of an empty measure");
    const int d = mu.dim();
    if (d == 1) return w1_line(mu.points(), mu.weights(), nu.points(), nu.weights());
    require(opt.projections >= 1, "w1: need at least one projection");
    Stream rng(opt.projection_seed, 0);
    std::vector<double> dir(static_cast<std::size_t>(d));
    std::vector<double> px(mu.size()), py(nu.size());
    double acc = 0.0;
    for (int k = 0; k < opt.projections; ++k) {
        double n2 = 0.0;
        for (double& v : dir) {
            v = rng.normal();
            n2 += v * v;
        }
        double inv = 1.0 / std::sqrt(n2);
        for (double& v : dir) v *= inv;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) s += dir[static_cast<std::size_t>(c)] * mu.point(i)[c];
            px[i] = s;
        }
        for (std::size_t i = 0; i < nu.size(); ++i) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) s += dir[static_cast<std::size_t>(c)] * nu.point(i)[c];
            py[i] = s;
        }
        acc += w1_line(px, mu.weights(), py, nu.weights());
    }
    return acc / opt.projections;
}

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
    double pos = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Returns, per bin, (center, mass of mu, mass of nu).
struct Bin {
    std::vector<double> center;
    double p = 0.0;
    double q = 0.0;
};

std::vector<Bin> shared_bins(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    if (mu.dim() != nu.dim()) fail(ErrorCode::DimensionMismatch, "weighted_tv: dimension mismatch");
    if (mu.empty() || nu.empty()) fail(ErrorCode::EmptyMeasure, "weighted_tv of an empty measure");
    const int d = mu.dim();
    if (d > 3) fail(ErrorCode::InvalidArgument, "weighted_tv supports dim <= 3");
    const std::size_t n = mu.size() + nu.size();
    auto pooled_point = [&](std::size_t i) { return i < mu.size() ? mu.point(i) : nu.point(i - mu.size()); };
    auto pooled_weight = [&](std::size_t i, bool& first) {
        first = i < mu.size();
        return first ? mu.weights()[i] : nu.weights()[i - mu.size()];
    };

    std::vector<double> lo(static_cast<std::size_t>(d)), h(static_cast<std::size_t>(d));
    std::vector<long long> nb(static_cast<std::size_t>(d));
    bool degenerate = false;
    for (int k = 0; k < d; ++k) {
        std::vector<double> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = pooled_point(i)[k];
        std::sort(c.begin(), c.end());
        double iqr = quantile_sorted(c, 0.75) - quantile_sorted(c, 0.25);
        double fd = 2.0 * iqr / std::cbrt(static_cast<double>(n));
        double range = c.back() - c.front();
        lo[static_cast<std::size_t>(k)] = c.front();
        if (range == 0.0) {
            nb[static_cast<std::size_t>(k)] = 0;
            h[static_cast<std::size_t>(k)] = 1.0;
            continue;
        }
        if (!(fd > 0.0)) {
            degenerate = true;
            break;
        }
        long long m = std::max<long long>(1, std::llround(range / fd));
        nb[static_cast<std::size_t>(k)] = m;
        h[static_cast<std::size_t>(k)] = range / static_cast<double>(m);
    }

    // Atomic inputs (repeated support points) are binned on their own support.
    std::map<std::vector<double>, Bin> atoms;
    bool atomic = degenerate;
    if (!atomic) {
        std::set<std::vector<double>> distinct;
        for (std::size_t i = 0; i < n && distinct.size() <= n / 2; ++i)
            distinct.insert(std::vector<double>(pooled_point(i), pooled_point(i) + d));
        atomic = distinct.size() <= n / 2;
    }
    std::vector<Bin> out;
    if (atomic) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> key(pooled_point(i), pooled_point(i) + d);
            bool first;
            double w = pooled_weight(i, first);
            Bin& b = atoms[key];
            b.center = key;
            (first ? b.p : b.q) += w;
        }
        for (auto& kv : atoms) out.push_back(std::move(kv.second));
        return out;
    }
    std::map<std::vector<long long>, Bin> grid;
    std::vector<long long> idx(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
            auto uk = static_cast<std::size_t>(k);
            long long j = nb[uk] == 0 ? 0 : std::llround((pooled_point(i)[k] - lo[uk]) / h[uk]);
            idx[uk] = std::clamp<long long>(j, 0, nb[uk]);
        }
        bool first;
        double w = pooled_weight(i, first);
        Bin& b = grid[idx];
        if (b.center.empty()) {
            b.center.resize(static_cast<std::size_t>(d));
            for (int k = 0; k < d; ++k) {
                auto uk = static_cast<std::size_t>(k);
                b.center[uk] = lo[uk] + static_cast<double>(idx[uk]) * h[uk];
            }
        }
        (first ? b.p : b.q) += w;
    }
    for (auto& kv : grid) out.push_back(std::move(kv.second));
    return out;
}

}  // namespace

double weighted_tv(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double beta0) {
    require(beta0 > 0.0, "weighted_tv requires beta0 > 0");
    double s = 0.0;
    for (const Bin& b : shared_bins(mu, nu)) {
        double n2 = 0.0;
        for (double c : b.center) n2 += c * c;
        s += std::abs(b.p - b.q) * std::pow(1.0 + n2, 0.5 * beta0);
    }
    return s;
}

double tv(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    double s = 0.0;
    for (const Bin& b : shared_bins(mu, nu)) s += std::abs(b.p - b.q);
    return s;
}

double concentration(const EmpiricalMeasure& mu, const std::vector<double>& y, double r) {
    require(r > 0.0, "concentration radius must be positive");
    if (static_cast<int>(y.size()) != mu.dim()) fail(ErrorCode::DimensionMismatch, "concentration: center dim");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double n2 = 0.0;
        for (int k = 0; k < mu.dim(); ++k) {
            double v = mu.point(i)[k] - y[static_cast<std::size_t>(k)];
            n2 += v * v;
        }
        if (std::sqrt(n2) >= r) s += mu.weights()[i];
    }
    return s;
}

std::string measure_to_csv(const EmpiricalMeasure& mu) {
    std::string out = "weight";
    for (int k = 1; k <= mu.dim(); ++k) out += ",x_" + std::to_string(k);
    out += '\n';
    char buf[64];
    for (std::size_t i = 0; i < mu.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", mu.weights()[i]);
        out += buf;
        for (int k = 0; k < mu.dim(); ++k) {
            std::snprintf(buf, sizeof buf, ",%.17g", mu.point(i)[k]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

EmpiricalMeasure measure_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::Io, "measure csv: missing header");
    int dim = static_cast<int>(std::count(line.begin(), line.end(), ','));
    if (dim < 1 || line.rfind("weight", 0) != 0) fail(ErrorCode::Io, "measure csv: bad header");
    std::vector<double> pts, w;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        int col = 0;
        while (std::getline(row, cell, ',')) {
            double v = std::stod(cell);
            if (col == 0)
                w.push_back(v);
            else
                pts.push_back(v);
            ++col;
        }
        if (col != dim + 1) fail(ErrorCode::Io, "measure csv: ragged row");
    }
    return EmpiricalMeasure(dim, std::move(pts), std::move(w));
}

}  // namespace lmv
