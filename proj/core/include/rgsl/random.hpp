#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rgsl {

/// Reproducible random stream keyed by a tuple such as (seed, purpose, step).
/// Draws are computed from raw engine output so results do not depend on the
/// standard library's distribution implementations.
class RngStream {
public:
    RngStream(std::initializer_list<std::uint64_t> key);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1).
    double uniform_open();
    double gumbel();
    double normal();
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

    std::uint64_t key_digest() const noexcept { return digest_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t digest_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Purposes keep the streams for different consumers disjoint.
enum class StreamPurpose : std::uint64_t {
    Init = 1,
    Shuffle = 2,
    TrainGraph = 3,
    EvalGraph = 4,
    Synthetic = 5,
};

}  // namespace rgsl
