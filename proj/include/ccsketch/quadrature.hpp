#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccsketch {

struct QuadratureSettings {
  /// Absolute tolerance between successive refinement levels.
  double tolerance = 1e-10;
  /// Number of panel halvings allowed after the base level.
  int max_refinements = 4;

  void validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
    if (max_refinements < 1) throw std::invalid_argument("max_refinements must be >= 1");
  }
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value;
  double error;  // |difference| between the last two levels
  int level;
};

struct GradedNode {
  double x;           // abscissa in (0, length)
  double complement;  // length - x, computed without cancellation
  double weight;
};

/// Composite 10-point Gauss–Legendre rule on (0, length).
///
/// The middle of the interval is covered by uniform panels; toward each end
/// the panels shrink geometrically by halves down to ~1e-13 * length, which
/// resolves integrands with power-law or boundary-layer behaviour at the
/// endpoints. Level l splits every panel of level 0 into 2^l pieces. Nodes
/// are symmetric about length / 2.
class GradedRule {
 public:
  GradedRule(double length, int level);

  std::span<const GradedNode> nodes() const { return nodes_; }
  double length() const { return length_; }
  int level() const { return level_; }

 private:
  double length_;
  int level_;
  std::vector<GradedNode> nodes_;
};

/// Evaluates `at_level(l)` for l = 0, 1, ... until two successive values
/// agree to settings.tolerance. Throws ConvergenceError when the refinement
/// budget runs out.
template <class AtLevel>
QuadratureResult refine_until_converged(AtLevel&& at_level, const QuadratureSettings& settings,
                                        const char* what) {
  settings.validate();
  double previous = at_level(0);
  double diff = 0.0;
  for (int level = 1; level <= settings.max_refinements; ++level) {
    const double current = at_level(level);
    diff = std::abs(current - previous);
    if (diff <= settings.tolerance) return {current, diff, level};
    previous = current;
  }
  throw ConvergenceError(std::string(what) + ": quadrature did not reach tolerance " +
                         std::to_string(settings.tolerance) + " (last change " +
                         std::to_string(diff) + ")");
}

}  // namespace ccsketch
