#pragma once

#include <array>
#include <cstdint>

namespace lmv {

// Philox4x32-10 (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

// Derive a child seed; used to give every fixed-point iteration fresh streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

// Counter-based stream: the key is the seed, the high counter words hold the
// stream id and the low words the block index, so a draw is a pure function of
// (seed, stream id, position in stream).
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint32_t next_u32() {
        if (pos_ == kBuf) refill();
        return buf_[pos_++];
    }
    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }
    // Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
    double normal();
    double exponential();
    std::uint64_t poisson(double mean);

    std::uint64_t blocks_used() const { return block_; }

private:
    // Blocks are generated eight at a time so the rounds of independent
    // counters overlap; the output order equals one-block-at-a-time.
    static constexpr int kBlocks = 8;
    static constexpr int kBuf = 4 * kBlocks;
    void refill();

    PhiloxKey key_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::uint32_t buf_[kBuf] = {};
    int pos_ = kBuf;
};

}  // namespace lmv
