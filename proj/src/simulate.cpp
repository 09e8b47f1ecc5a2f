#include "levymv/simulate.hpp"

#include <barrier>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

#include "levymv/errors.hpp"
#include "levymv/parallel.hpp"
#include "levymv/rng.hpp"

namespace lmv {

namespace {

constexpr double kBlowup = 1e8;
constexpr long kMaxSubsteps = 1000000;

struct BlowupAt {
    long step;
    std::size_t chain;
};

// Euler drift update over dt. When dt |b| is large compared with 1 + |x| the
// update is split into sub-steps of length 0.25 (1 + |x|) / |b|, so a single
// huge jump cannot be amplified by the cubic drift into an overflow.
// Returns the number of extra sub-steps taken.
inline long drift_update(const DriftSpec& drift, const MeasureStats& st, int d, double dt, double* x, double* b) {
    eval_drift(drift, x, st, b);
    double nb = 0.0, nx = 0.0;
    for (int k = 0; k < d; ++k) {
        nb += b[k] * b[k];
        nx += x[k] * x[k];
    }
    nb = std::sqrt(nb);
    nx = std::sqrt(nx);
    if (dt * nb <= 0.25 * (1.0 + nx)) {
        for (int k = 0; k < d; ++k) x[k] += dt * b[k];
        return 0;
    }
    double rem = dt;
    long extra = 0;
    for (;;) {
        double h = std::min(rem, 0.25 * (1.0 + nx) / nb);
        for (int k = 0; k < d; ++k) x[k] += h * b[k];
        rem -= h;
        if (rem <= 0.0 || ++extra > kMaxSubsteps) break;
        eval_drift(drift, x, st, b);
        nb = 0.0;
        nx = 0.0;
        for (int k = 0; k < d; ++k) {
            nb += b[k] * b[k];
            nx += x[k] * x[k];
        }
        nb = std::sqrt(nb);
        nx = std::sqrt(nx);
        if (!(nb > 0.0)) break;
    }
    return extra;
}

inline bool blown(const double* x, int d) {
    double n2 = 0.0;
    for (int k = 0; k < d; ++k) n2 += x[k] * x[k];
    return !(n2 <= kBlowup * kBlowup);
}

// Index of the ((i + 1/2) / n)-quantile atom.
std::vector<std::size_t> quantile_atoms(const EmpiricalMeasure& init, std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::size_t j = 0;
    double cum = init.weights()[0];
    for (std::size_t i = 0; i < n; ++i) {
        double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        while (cum < q && j + 1 < init.size()) cum += init.weights()[++j];
        idx[i] = j;
    }
    return idx;
}

OccupationMeasure run_frozen(const DriftSpec& drift, const EmpiricalMeasure& frozen, const LevyMeasureSpec& levy,
                             const EmpiricalMeasure& init, const SimConfig& cfg) {
    const int d = drift.dim();
    const auto n_chains = static_cast<std::size_t>(cfg.n_chains);
    const long steps = cfg.steps();
    const long keep = cfg.kept_per_chain();
    const long first_kept = steps - (keep - 1) * cfg.thin;
    const MeasureStats st = measure_stats(drift, frozen);
    const IncrementSampler inc(levy, cfg.dt);
    const std::vector<std::size_t> start = quantile_atoms(init, n_chains);

    std::vector<double> pts(n_chains * static_cast<std::size_t>(keep) * static_cast<std::size_t>(d));
    std::vector<double> chain_means(n_chains * static_cast<std::size_t>(d), 0.0);
    std::vector<long> substeps(n_chains, 0);
    std::vector<long> blow_step(n_chains, -1);

    auto keep_state = [&](long n) { return n >= first_kept && (n - first_kept) % cfg.thin == 0; };

    // Scalar path: same arithmetic as the general path with the drift and the
    // increment inlined.
    auto run_scalar = [&](std::size_t c, auto&& bfun, auto&& noise) {
        Stream rng(cfg.seed, c);
        double x = init.point(start[c])[0];
        double* out = pts.data() + c * static_cast<std::size_t>(keep);
        double acc = 0.0;
        long extra = 0;
        long next_keep = first_kept;
        const double dt = cfg.dt;
        for (long n = 1; n <= steps; ++n) {
            double b = bfun(x);
            if (dt * std::abs(b) <= 0.25 * (1.0 + std::abs(x))) {
                x += dt * b;
            } else {
                extra += drift_update(drift, st, 1, dt, &x, &b);
            }
            x += noise(rng);
            if (!(std::abs(x) <= kBlowup)) {
                blow_step[c] = n;
                return;
            }
            if (n == next_keep) {
                *out++ = x;
                acc += x;
                next_keep += cfg.thin;
            }
        }
        substeps[c] = extra;
        chain_means[c] = acc / static_cast<double>(keep);
    };

    // Affine drift a x + b per step with Gaussian noise s Z: the k-step Euler map is
    // x -> a^k x + b (1 - a^k) / (1 - a) + s sqrt((1 - a^2k) / (1 - a^2)) Z, so kept
    // states are drawn directly with the law of the stepwise chain.
    auto run_affine = [&](std::size_t c, double lam_dt, double b, double s) {
        struct Hop {
            double ak, shift, sd;
        };
        const double la = std::log1p(-lam_dt);
        const double one_minus_a2 = lam_dt * (2.0 - lam_dt);
        auto hop = [&](long k) {
            const double kk = static_cast<double>(k);
            const double one_minus_ak = -std::expm1(kk * la);
            return Hop{1.0 - one_minus_ak, b * one_minus_ak / lam_dt,
                       s * std::sqrt(-std::expm1(2.0 * kk * la) / one_minus_a2)};
        };
        const Hop first = hop(first_kept), next = hop(cfg.thin);
        Stream rng(cfg.seed, c);
        double x = init.point(start[c])[0];
        double* out = pts.data() + c * static_cast<std::size_t>(keep);
        double acc = 0.0;
        long n = first_kept;
        for (long i = 0; i < keep; ++i, n += cfg.thin) {
            const Hop& h = i == 0 ? first : next;
            x = h.ak * x + h.shift + h.sd * rng.normal();
            if (!(std::abs(x) <= kBlowup)) {
                blow_step[c] = n;
                return;
            }
            *out++ = x;
            acc += x;
        }
        chain_means[c] = acc / static_cast<double>(keep);
    };

    auto run_general = [&](std::size_t c) {
        Stream rng(cfg.seed, c);
        std::vector<double> x(init.point(start[c]), init.point(start[c]) + d), b(static_cast<std::size_t>(d)),
            dz(static_cast<std::size_t>(d));
        double* out = pts.data() + c * static_cast<std::size_t>(keep) * static_cast<std::size_t>(d);
        long extra = 0;
        for (long n = 1; n <= steps; ++n) {
            extra += drift_update(drift, st, d, cfg.dt, x.data(), b.data());
            inc(rng, dz.data());
            for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] += dz[static_cast<std::size_t>(k)];
            if (blown(x.data(), d)) {
                blow_step[c] = n;
                return;
            }
            if (keep_state(n)) {
                for (int k = 0; k < d; ++k) {
                    *out++ = x[static_cast<std::size_t>(k)];
                    chain_means[c * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] += x[static_cast<std::size_t>(k)];
                }
            }
        }
        substeps[c] = extra;
        for (int k = 0; k < d; ++k) chain_means[c * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] /= static_cast<double>(keep);
    };

    auto with_noise = [&](std::size_t c, auto&& bfun) {
        if (inc.pure_gaussian()) {
            const double f = inc.gaussian_factor();
            run_scalar(c, bfun, [f](Stream& r) { return f * r.normal(); });
        } else {
            run_scalar(c, bfun, [&inc](Stream& r) {
                double z;
                inc(r, &z);
                return z;
            });
        }
    };

    parallel_for(n_chains, cfg.threads, [&](std::size_t c) {
        if (d != 1) return run_general(c);
        double buf = 0.0;
        switch (drift.family) {
            case DriftFamily::MeanFieldOU: {
                const double lam = drift.lambda, m = st.mean[0];
                // Here dt |b(x)| <= 0.25 (1 + |x|) always holds, so no step is ever substepped.
                if (cfg.exact_affine && inc.pure_gaussian() && cfg.dt * lam <= 0.25 && cfg.dt * std::abs(m) <= 0.25)
                    return run_affine(c, lam * cfg.dt, m * cfg.dt, inc.gaussian_factor());
                return with_noise(c, [lam, m](double x) { return -lam * x + m; });
            }
            case DriftFamily::DoubleWell1D: {
                const double lam = drift.lambda, a1 = drift.a1, a2 = drift.a2, k = drift.kappa, m = st.mean[0];
                return with_noise(c, [=](double x) { return -lam * x * (x - a1) * (x - a2) - k * (x - m); });
            }
            default:
                return with_noise(c, [&](double x) {
                    eval_drift(drift, &x, st, &buf);
                    return buf;
                });
        }
    });
    for (std::size_t c = 0; c < n_chains; ++c)
        if (blow_step[c] >= 0) throw BlowupAt{blow_step[c], c};

    OccupationMeasure occ;
    occ.measure = EmpiricalMeasure(d, std::move(pts));
    occ.T = cfg.T;
    occ.dt = cfg.dt;
    occ.n_chains = cfg.n_chains;
    occ.chain_means = std::move(chain_means);
    for (long s : substeps) occ.drift_substeps += s;
    // Effective sample size from the spread of chain averages (first coordinate).
    double var_pts = occ.measure.variance()[0];
    double cm = 0.0, cv = 0.0;
    for (std::size_t c = 0; c < n_chains; ++c) cm += occ.chain_means[c * static_cast<std::size_t>(d)];
    cm /= static_cast<double>(n_chains);
    for (std::size_t c = 0; c < n_chains; ++c) {
        double v = occ.chain_means[c * static_cast<std::size_t>(d)] - cm;
        cv += v * v;
    }
    cv /= std::max<double>(1.0, static_cast<double>(n_chains) - 1.0);
    double n_total = static_cast<double>(occ.measure.size());
    occ.ess = cv > 0.0 ? std::min(n_total, var_pts * static_cast<double>(n_chains) / cv) : n_total;
    return occ;
}

template <class Run>
auto with_retry(const SimConfig& cfg, Run run) {
    try {
        return run(cfg);
    } catch (const BlowupAt&) {
        SimConfig half = cfg;
        half.dt = 0.5 * cfg.dt;
        half.thin = 2 * cfg.thin;
        try {
            auto r = run(half);
            r.dt_halvings = 1;
            return r;
        } catch (const BlowupAt& b) {
            fail(ErrorCode::Blowup, "state exceeded 1e8 at step " + std::to_string(b.step) + " of chain " +
                                        std::to_string(b.chain) + " even after halving dt to " +
                                        std::to_string(half.dt));
        }
    }
}

}  // namespace

void SimConfig::validate() const {
    require(dt > 0.0 && dt <= 0.01, "dt must lie in (0, 0.01]");
    require(T > 0.0 && std::isfinite(T), "horizon T must be positive");
    require(burn_in >= 0.0 && burn_in < 1.0, "burn_in fraction must lie in [0, 1)");
    require(thin >= 1, "thin must be >= 1");
    require(n_chains >= 1, "n_chains must be >= 1");
    require(T / dt >= 1e3 * (1.0 - 1e-12), "T / dt must be at least 1000");
    require(kept_per_chain() >= 1, "no states survive burn-in and thinning");
}

long SimConfig::steps() const { return std::lround(T / dt); }

long SimConfig::kept_per_chain() const {
    return static_cast<long>(std::floor((1.0 - burn_in) * T / (dt * thin) + 1e-9));
}

std::vector<double> OccupationMeasure::mean_se() const {
    const int d = measure.dim();
    const auto n = static_cast<std::size_t>(n_chains);
    std::vector<double> se(static_cast<std::size_t>(d), 0.0);
    if (n < 2) return se;
    for (int k = 0; k < d; ++k) {
        double m = 0.0, v = 0.0;
        for (std::size_t c = 0; c < n; ++c) m += chain_means[c * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
        m /= static_cast<double>(n);
        for (std::size_t c = 0; c < n; ++c) {
            double e = chain_means[c * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] - m;
            v += e * e;
        }
        v /= static_cast<double>(n - 1);
        se[static_cast<std::size_t>(k)] = std::sqrt(v / static_cast<double>(n));
    }
    return se;
}

OccupationMeasure frozen_trajectory(const DriftSpec& drift, const EmpiricalMeasure& frozen, const LevyMeasureSpec& levy,
                                    const EmpiricalMeasure& init, const SimConfig& cfg) {
    drift.validate();
    levy.validate();
    cfg.validate();
    const int d = drift.dim();
    if (levy.dim != d || frozen.dim() != d || init.dim() != d)
        fail(ErrorCode::DimensionMismatch, "drift, levy, frozen and initial measure dimensions must agree");
    if (init.empty()) fail(ErrorCode::EmptyMeasure, "initial measure is empty");
    if (drift.family != DriftFamily::MeanFieldOU && levy.kind != LevyKind::CompoundPoisson)
        require(levy.alpha > 1.0, "cubic drifts need alpha in (1, 2]");
    return with_retry(cfg, [&](const SimConfig& c) { return run_frozen(drift, frozen, levy, init, c); });
}

OccupationMeasure frozen_trajectory(const DriftSpec& drift, const EmpiricalMeasure& frozen, const LevyMeasureSpec& levy,
                                    const std::vector<double>& x0, const SimConfig& cfg) {
    return frozen_trajectory(drift, frozen, levy, EmpiricalMeasure::dirac(x0), cfg);
}

namespace {

struct ParticleRun {
    std::vector<Snapshot> snaps;
    int dt_halvings = 0;
};

ParticleRun run_particles(const DriftSpec& drift, const LevyMeasureSpec& levy, const EmpiricalMeasure& init,
                          const SimConfig& cfg, const std::vector<double>& times) {
    const int d = drift.dim();
    const auto n = static_cast<std::size_t>(cfg.n_chains);
    const long steps = cfg.steps();
    const IncrementSampler inc(levy, cfg.dt);
    const std::vector<std::size_t> start = quantile_atoms(init, n);
    std::vector<double> x(n * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k) x[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] = init.point(start[i])[k];

    std::vector<long> snap_steps;
    if (times.empty())
        snap_steps.push_back(steps);
    else
        for (double t : times) snap_steps.push_back(std::clamp<long>(std::lround(t / cfg.dt), 0, steps));

    std::vector<Stream> rng;
    rng.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rng.emplace_back(cfg.seed, i);

    // Fixed-size chunks make the reduction order independent of the worker count.
    constexpr std::size_t kChunk = 256;
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    const std::size_t width = static_cast<std::size_t>(d) + 2;
    std::vector<double> partial(n_chunks * width);
    const bool need_cubic_stats = drift.family == DriftFamily::AsymmetricCubic1D;

    ParticleRun out;
    auto take_snapshots = [&](long step) {
        for (long s : snap_steps)
            if (s == step) out.snaps.push_back({static_cast<double>(step) * cfg.dt, EmpiricalMeasure(d, x)});
    };
    take_snapshots(0);

    std::vector<long> blow(n, -1);
    auto chunk_sums = [&](std::size_t ch) {
        double* p = partial.data() + ch * width;
        std::fill(p, p + width, 0.0);
        std::size_t hi = std::min(n, (ch + 1) * kChunk);
        for (std::size_t i = ch * kChunk; i < hi; ++i) {
            const double* xi = x.data() + i * static_cast<std::size_t>(d);
            for (int k = 0; k < d; ++k) p[k] += xi[k];
            if (need_cubic_stats) {
                p[d] += std::abs(xi[0]);
                p[d + 1] += drift.g(xi[0]);
            }
        }
    };
    auto reduce = [&]() {
        MeasureStats st;
        st.mean.assign(static_cast<std::size_t>(d), 0.0);
        for (std::size_t ch = 0; ch < n_chunks; ++ch) {
            const double* p = partial.data() + ch * width;
            for (int k = 0; k < d; ++k) st.mean[static_cast<std::size_t>(k)] += p[k];
            st.mean_abs += p[d];
            st.mean_g += p[d + 1];
        }
        double inv = 1.0 / static_cast<double>(n);
        for (double& m : st.mean) m *= inv;
        st.mean_abs *= inv;
        st.mean_g *= inv;
        return st;
    };
    auto advance = [&](std::size_t i, const MeasureStats& st, long step) {
        double b[16], dz[16];
        std::vector<double> bv, dzv;
        double* bp = b;
        double* dp = dz;
        if (d > 16) {
            bv.resize(static_cast<std::size_t>(d));
            dzv.resize(static_cast<std::size_t>(d));
            bp = bv.data();
            dp = dzv.data();
        }
        double* xi = x.data() + i * static_cast<std::size_t>(d);
        drift_update(drift, st, d, cfg.dt, xi, bp);
        inc(rng[i], dp);
        for (int k = 0; k < d; ++k) xi[k] += dp[k];
        if (blown(xi, d) && blow[i] < 0) blow[i] = step;
    };

    const int workers = std::max(1, std::min<int>(cfg.threads, static_cast<int>(n_chunks)));
    if (workers == 1) {
        for (long s = 1; s <= steps; ++s) {
            for (std::size_t ch = 0; ch < n_chunks; ++ch) chunk_sums(ch);
            MeasureStats st = reduce();
            for (std::size_t i = 0; i < n; ++i) advance(i, st, s);
            for (std::size_t i = 0; i < n; ++i)
                if (blow[i] >= 0) throw BlowupAt{blow[i], i};
            take_snapshots(s);
        }
        return out;
    }
    std::barrier sync(workers);
    std::vector<std::thread> pool;
    bool stop = false;
    auto worker = [&](int w) {
        for (long s = 1; s <= steps; ++s) {
            for (std::size_t ch = static_cast<std::size_t>(w); ch < n_chunks; ch += static_cast<std::size_t>(workers))
                chunk_sums(ch);
            sync.arrive_and_wait();
            MeasureStats st = reduce();
            for (std::size_t ch = static_cast<std::size_t>(w); ch < n_chunks; ch += static_cast<std::size_t>(workers)) {
                std::size_t hi = std::min(n, (ch + 1) * kChunk);
                for (std::size_t i = ch * kChunk; i < hi; ++i) advance(i, st, s);
            }
            sync.arrive_and_wait();
            if (w == 0) {
                for (std::size_t i = 0; i < n && !stop; ++i)
                    if (blow[i] >= 0) stop = true;
                if (!stop) take_snapshots(s);
            }
            sync.arrive_and_wait();
            if (stop) return;
        }
    };
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < n; ++i)
        if (blow[i] >= 0) throw BlowupAt{blow[i], i};
    return out;
}

}  // namespace

std::vector<Snapshot> particle_system(const DriftSpec& drift, const LevyMeasureSpec& levy, const EmpiricalMeasure& init,
                                      const SimConfig& cfg, const std::vector<double>& snapshot_times) {
    drift.validate();
    levy.validate();
    cfg.validate();
    require(cfg.n_chains >= 100, "particle_system needs at least 100 particles");
    const int d = drift.dim();
    if (levy.dim != d || init.dim() != d)
        fail(ErrorCode::DimensionMismatch, "drift, levy and initial measure dimensions must agree");
    if (init.empty()) fail(ErrorCode::EmptyMeasure, "initial measure is empty");
    for (double t : snapshot_times) require(t >= 0.0 && t <= cfg.T, "snapshot times must lie in [0, T]");
    ParticleRun r = with_retry(cfg, [&](const SimConfig& c) { return run_particles(drift, levy, init, c, snapshot_times); });
    return r.snaps;
}

std::string snapshots_to_csv(const std::vector<Snapshot>& snaps) {
    if (snaps.empty()) return "chain_id,t\n";
    const int d = snaps.front().particles.dim();
    std::string out = "chain_id,t";
    for (int k = 1; k <= d; ++k) out += ",x_" + std::to_string(k);
    out += '\n';
    char buf[64];
    for (const Snapshot& s : snaps) {
        for (std::size_t i = 0; i < s.particles.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g", i, s.t);
            out += buf;
            for (int k = 0; k < d; ++k) {
                std::snprintf(buf, sizeof buf, ",%.17g", s.particles.point(i)[k]);
                out += buf;
            }
            out += '\n';
        }
    }
    return out;
}

}  // namespace lmv
