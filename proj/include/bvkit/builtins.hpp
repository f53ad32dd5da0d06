#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvkit/grid.hpp"

namespace bvkit {

/// Named test functions with stable ids so experiment scripts stay
/// reproducible:
///   const, linear, sine, step, checkerboard, monomial:<e0>[,<e1>...],
///   random-smooth, random-step.
/// Monomials are projected with exact cell averages; step sits at x_0 = 1/3
/// (never a dyadic boundary, so every level sees the jump); random ids are
/// seeded.
GridFunction make_builtin(const std::string& id, int d, int m, std::uint64_t seed = 0,
                          int supersample = 4);

std::vector<std::string> builtin_ids();

}  // namespace bvkit
