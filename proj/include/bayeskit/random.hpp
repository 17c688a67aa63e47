#pragma once

#include <cstdint>

namespace bayeskit {

// Counter-based generator: draw i is a pure function of (seed, i).
// Identical streams on every platform for a given seed.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64();
    // Uniform on the open interval (0, 1).
    double uniform();
    double standard_normal();

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace bayeskit
