#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracmax/grid_function.hpp"

namespace fracmax {

/// Seeded test functions.  Every kind is a fixed continuous formula sampled
/// at cell centres, so the same seed gives the same function at every
/// resolution.
enum class FunctionKind { Bump, Indicator, Linear, Sinusoid, Mollified, RandomSmooth };

FunctionKind parse_function_kind(const std::string& name);
std::string function_kind_name(FunctionKind kind);

/// Bump: smooth compactly supported bump inside G.
/// Indicator: characteristic function of a random ball.
/// Linear: a.x + b.
/// Sinusoid: tensor product of sines.
/// Mollified: a random box with linear ramps of random width.
/// RandomSmooth: low-pass random Fourier sum.
GridFunction make_function(const DomainPtr& domain, FunctionKind kind, std::uint64_t seed);

/// count functions cycling through all kinds, seeds derived from `seed`.
std::vector<GridFunction> standard_corpus(const DomainPtr& domain, int count, std::uint64_t seed);
/// count bumps with support compactly inside G.
std::vector<GridFunction> bump_corpus(const DomainPtr& domain, int count, std::uint64_t seed);

}  // namespace fracmax
