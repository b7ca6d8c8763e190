#pragma once

#include "mvcolor/error.hpp"

#include <cstdint>
#include <string>

namespace mvcolor {

/// Relative importance of the four cost terms. All default to 1.
struct Weights {
    double w_d = 1.0;    // single-view discriminability
    double w_gdis = 1.0; // cross-view discriminability
    double w_hu = 1.0;   // hue uniformity between sibling subtrees
    double w_con = 1.0;  // lightness continuity

    friend bool operator==(const Weights&, const Weights&) = default;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct GaConfig {
    int pop_size = 50;
    int generations = 100;
    int n_best = 10;
    double crossover_rate = 0.5;
    double step = 0.05;
    std::uint64_t rng_seed = kDefaultSeed;
    double hard_floor_delta_e = 10.0;

    void validate() const
    {
        if (pop_size < 2) throw Error(ErrorCode::InvalidConfig, "pop_size must be >= 2");
        if (n_best < 1 || n_best > pop_size)
            throw Error(ErrorCode::InvalidConfig, "n_best must be in [1, pop_size]");
        if (!(step > 0.0 && step <= 1.0)) throw Error(ErrorCode::InvalidConfig, "step must be in (0,1]");
        if (generations < 1) throw Error(ErrorCode::InvalidConfig, "generations must be >= 1");
        if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
            throw Error(ErrorCode::InvalidConfig, "crossover_rate must be in [0,1]");
        if (!(hard_floor_delta_e >= 0.0))
            throw Error(ErrorCode::InvalidConfig, "hard_floor_delta_e must be >= 0");
    }
};

} // namespace mvcolor
