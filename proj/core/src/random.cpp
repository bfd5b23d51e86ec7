#include "rgsl/random.hpp"

#include <cmath>
#include <numbers>
#include <vector>


namespace rgsl {

RngStream::RngStream(std::initializer_list<std::uint64_t> key) {
    std::vector<std::uint32_t> words;
    std::uint64_t digest = 0xcbf29ce484222325ULL;
    for (auto k : key) {
        words.push_back(static_cast<std::uint32_t>(k & 0xffffffffULL));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
        for (int b = 0; b < 8; ++b) {
            digest ^= (k >> (8 * b)) & 0xffULL;
            digest *= 0x100000001b3ULL;
        }
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
    digest_ = digest;
}

double RngStream::uniform_open() {
    // 53 random bits, centred in their bucket: never exactly 0 or 1.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::gumbel() { return -std::log(-std::log(uniform_open())); }

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t RngStream::below(std::uint64_t bound) {
    // Lemire-style rejection to avoid modulo bias.
    const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
    std::uint64_t x = engine_();
    while (x < limit) x = engine_();
    return x % bound;
}

}  // namespace rgsl
