#pragma once

#include <cmath>
#include <cstdint>

namespace fblnet {

// Counter-based generator (Philox 4x32-10). Every random number is a pure
// function of (seed, stream, index), so replications can be evaluated in
// any order or degree of parallelism and still reproduce bit-identically.
class Philox {
public:
    explicit Philox(std::uint64_t seed)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)) {}

    std::uint64_t word(std::uint64_t stream, std::uint64_t index) const {
        std::uint32_t c0 = static_cast<std::uint32_t>(index);
        std::uint32_t c1 = static_cast<std::uint32_t>(index >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(stream);
        std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = 0xD2511F53ULL * c0;
            const std::uint64_t p1 = 0xCD9E8D57ULL * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return (static_cast<std::uint64_t>(c0) << 32) | c1;
    }

    // uniform on (0,1), never exactly 0 or 1
    double uniform(std::uint64_t stream, std::uint64_t index) const {
        return (static_cast<double>(word(stream, index) >> 11) + 0.5) * 0x1p-53;
    }

private:
    std::uint32_t key0_, key1_;
};

enum class StreamPurpose : std::uint64_t {
    BsGeometry = 1,
    UePlacement = 2,
    OutageFading = 3,
    MetaActivity = 4,
    MetaFading = 5,
    LaplaceFading = 6,
    CdfFading = 7,
    Probe = 8,
};

inline std::uint64_t make_stream(StreamPurpose p, std::uint64_t major,
                                 std::uint64_t minor = 0) {
    return (static_cast<std::uint64_t>(p) << 56) |
           ((major & 0xFFFFFFFFFFULL) << 16) | (minor & 0xFFFFULL);
}

/// Sequential view over one stream of a Philox engine.
class RngStream {
public:
    RngStream(const Philox& eng, std::uint64_t stream)
        : eng_(&eng), stream_(stream) {}

    double uniform01() { return eng_->uniform(stream_, idx_++); }
    double exponential() { return -std::log(uniform01()); }
    bool bernoulli(double p) { return uniform01() < p; }

    // exact via exponential spacings; draw count varies with the outcome
    long poisson(double mean) {
        long k = -1;
        double sum = 0.0;
        while (sum <= mean) {
            sum += exponential();
            ++k;
        }
        return k;
    }

private:
    const Philox* eng_;
    std::uint64_t stream_;
    std::uint64_t idx_ = 0;
};

}  // namespace fblnet
