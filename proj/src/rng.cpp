#include "levymv/rng.hpp"

#include <cmath>

namespace lmv {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Marsaglia-Tsang ziggurat tables, 128 layers, for a 25-bit signed abscissa.
struct Ziggurat {
    std::int32_t kn[128];
    double wn[128];
    double fn[128];

    Ziggurat() {
        const double m1 = 16777216.0;
        double dn = 3.442619855899;
        double tn = dn;
        const double vn = 9.91256303526217e-3;
        double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<std::int32_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<std::int32_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

const Ziggurat kZig;

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag + 0x632BE59BD9B4E019ull));
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_id_(stream_id) {}

void Stream::refill() {
    const auto s_lo = static_cast<std::uint32_t>(stream_id_);
    const auto s_hi = static_cast<std::uint32_t>(stream_id_ >> 32);
    for (int j = 0; j < kBlocks; ++j) {
        std::uint64_t b = block_ + static_cast<std::uint64_t>(j);
        PhiloxCounter r = philox4x32_10({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32), s_lo, s_hi}, key_);
        for (int k = 0; k < 4; ++k) buf_[4 * j + k] = r[static_cast<std::size_t>(k)];
    }
    block_ += kBlocks;
    pos_ = 0;
}

double Stream::normal() {
    const Ziggurat& z = kZig;
    for (;;) {
        // One 32-bit draw: low 7 bits pick the layer, the high 25 bits are the
        // signed abscissa, so the two never share bits.
        std::uint32_t u = next_u32();
        int iz = static_cast<int>(u & 127u);
        std::int32_t hz = static_cast<std::int32_t>(u) >> 7;
        std::int32_t ahz = hz < 0 ? -hz : hz;
        if (ahz < z.kn[iz]) return hz * z.wn[iz];
        double x = hz * z.wn[iz];
        if (iz == 0) {
            const double r = 3.442619855899;
            double xt, y;
            do {
                xt = -std::log(uniform()) / r;
                y = -std::log(uniform());
            } while (y + y < xt * xt);
            return hz > 0 ? r + xt : -r - xt;
        }
        if (z.fn[iz] + uniform() * (z.fn[iz - 1] - z.fn[iz]) < std::exp(-0.5 * x * x)) return x;
    }
}

double Stream::exponential() { return -std::log(uniform()); }

std::uint64_t Stream::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
        double L = std::exp(-mean);
        double p = uniform();
        std::uint64_t k = 0;
        double term = L, cdf = L;
        while (p > cdf && k < 10000) {
            ++k;
            term *= mean / static_cast<double>(k);
            cdf += term;
        }
        return k;
    }
    // Large means only arise for diagnostics; a split keeps inversion stable.
    std::uint64_t half = poisson(mean * 0.5);
    return half + poisson(mean * 0.5);
}

}  // namespace lmv
