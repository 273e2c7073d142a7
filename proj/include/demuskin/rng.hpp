#pragma once

#include <cstdint>
#include <random>

#include "demuskin/zmod.hpp"

namespace demuskin {

// Seeded deterministic source. Bounded draws avoid std::uniform_int_distribution,
// whose output is implementation-defined; reports must be reproducible bit for bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    std::uint64_t residue(const RingModulus& m) { return below(m.q); }

    std::uint64_t unit(const RingModulus& m) {
        for (;;) {
            std::uint64_t r = residue(m);
            if (is_unit(r, m)) return r;
        }
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace demuskin
