#include "polya/params.hpp"

#include <cmath>
#include <string>

#include "polya/error.hpp"

namespace polya {

ModelParams::ModelParams(std::int64_t urns, std::int64_t initial_red,
                         std::int64_t initial_black, double alpha)
    : urns_(urns), red_(initial_red), black_(initial_black), alpha_(alpha) {
  if (urns < 2) throw ArgumentError("N must be >= 2, got " + std::to_string(urns));
  if (initial_red < 1) throw ArgumentError("a must be >= 1, got " + std::to_string(initial_red));
  if (initial_black < 1)
    throw ArgumentError("b must be >= 1, got " + std::to_string(initial_black));
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ArgumentError("alpha must lie in [0, 1], got " + std::to_string(alpha));
}

}  // namespace polya
