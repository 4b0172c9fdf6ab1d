#include "ccsketch/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace ccsketch {

namespace {

constexpr int kUniformPanelsPerHalf = 8;
constexpr int kGradedPanels = 44;

using Gauss10 = boost::math::quadrature::gauss<double, 10>;

// Panel edges on [0, half], measured from the nearer endpoint.
std::vector<double> half_edges(double half, int level) {
  const double h = half / kUniformPanelsPerHalf;
  std::vector<double> coarse;
  coarse.push_back(0.0);
  for (int k = kGradedPanels; k >= 1; --k) coarse.push_back(std::ldexp(h, -k));
  for (int k = 1; k <= kUniformPanelsPerHalf; ++k) coarse.push_back(h * k);
  coarse.back() = half;

  const int splits = 1 << level;
  std::vector<double> edges;
  edges.reserve((coarse.size() - 1) * splits + 1);
  for (std::size_t p = 0; p + 1 < coarse.size(); ++p) {
    const double a = coarse[p];
    const double width = coarse[p + 1] - a;
    for (int s = 0; s < splits; ++s) edges.push_back(a + width * s / splits);
  }
  edges.push_back(half);
  return edges;
}

}  // namespace

GradedRule::GradedRule(double length, int level) : length_(length), level_(level) {
  if (!(length > 0.0)) throw std::invalid_argument("GradedRule length must be positive");
  if (level < 0 || level > 12) throw std::invalid_argument("GradedRule level out of range");

  const double half = 0.5 * length;
  const auto edges = half_edges(half, level);
  const auto& abscissa = Gauss10::abscissa();
  const auto& weights = Gauss10::weights();

  // Left half nodes are stored by distance from 0, right half mirrored and
  // stored by distance from `length`, so `x` and `complement` are both exact
  // where they are small.
  std::vector<GradedNode> left;
  left.reserve((edges.size() - 1) * 10);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double rad = 0.5 * (edges[p + 1] - edges[p]);
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      const double w = rad * weights[k];
      left.push_back({mid - rad * abscissa[k], 0.0, w});
      left.push_back({mid + rad * abscissa[k], 0.0, w});
    }
  }
  nodes_.reserve(2 * left.size());
  for (const auto& n : left) nodes_.push_back({n.x, length - n.x, n.weight});
  for (const auto& n : left) nodes_.push_back({length - n.x, n.x, n.weight});
}

}  // namespace ccsketch
