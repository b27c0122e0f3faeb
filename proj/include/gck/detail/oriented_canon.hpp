#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gck {

/// How sink labels behave under normalization.
enum class SinkSymmetry {
  Fixed,          ///< sinks are ordered arguments; only internal vertices are relabeled
  Antisymmetric,  ///< sinks may be permuted, picking up the sign of the permutation
};

namespace detail {

/// Normal form of an oriented graph whose internal vertices carry totally
/// antisymmetric ordered out-edge tuples (arity 2 for wedges, 3 for a Jacobiator).
struct OrientedForm {
  std::vector<std::uint8_t> arity;    // per internal vertex, in canonical order
  std::vector<std::uint8_t> targets;  // flattened, each tuple sorted ascending
  int sign = 1;
  bool zero = false;
};

/// Internal vertices are labeled sinks..sinks+arity.size()-1; targets is the
/// flattened list of out-edge targets. Vertices of equal arity are permuted
/// freely; a vertex of higher arity always sorts after all lower-arity ones.
OrientedForm canonical_oriented(int sinks, std::span<const std::uint8_t> arity,
                                std::span<const std::uint8_t> targets, SinkSymmetry symmetry);

}  // namespace detail
}  // namespace gck
