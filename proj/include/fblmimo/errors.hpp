#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fblmimo {

// A closed form was asked for outside the region where it is defined or
// trustworthy (e.g. square antenna arrays, assembled variance < 0).  The
// caller should fall back to the Monte-Carlo estimator.
class validity_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Numerical failure inside a kernel.  Carries the RNG lineage of the draw
// that triggered it so the draw can be reproduced in isolation.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, std::uint64_t seed, std::uint64_t draw)
        : std::runtime_error(what + " [seed=" + std::to_string(seed) +
                             " draw=" + std::to_string(draw) + "]"),
          seed_(seed), draw_(draw) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t draw() const noexcept { return draw_; }

private:
    std::uint64_t seed_;
    std::uint64_t draw_;
};

}  // namespace fblmimo
