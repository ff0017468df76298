#include <algorithm>
#include <cmath>

#include "optsel/relaxation.hpp"

namespace optsel {
namespace {

// h(lambda) = sum_i min(max(pi_i - lambda, 0), c2) - c1
double excess(const Vector& point, double lambda, double c1, double c2) {
  double total = 0.0;
  for (Index i = 0; i < point.size(); ++i) {
    total += std::min(std::max(point(i) - lambda, 0.0), c2);
  }
  return total - c1;
}

Vector shrink_and_clip(const Vector& point, double lambda, double c2) {
  Vector out(point.size());
  for (Index i = 0; i < point.size(); ++i) {
    out(i) = std::min(std::max(point(i) - lambda, 0.0), c2);
  }
  return out;
}

}  // namespace

Vector project_l1_linf(const Vector& point, double c1, double c2, double delta) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw Error(ErrorCode::InfeasibleBall, "project_l1_linf: c1 and c2 must be positive");
  }
  if (point.size() == 0) return point;
  if (!point.allFinite() || point.minCoeff() < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "project_l1_linf: point must be finite and nonnegative");
  }

  const bool box_ok = point.maxCoeff() <= c2;
  if (box_ok && point.sum() <= c1) return point;

  Vector clipped = point.cwiseMin(c2);
  if (clipped.sum() <= c1) return clipped;

  // h(0) > 0 and h(max pi) = -c1 < 0; h is continuous and strictly
  // decreasing wherever it is positive, so bisection brackets the root.
  double lo = 0.0;
  double hi = point.maxCoeff();
  double lambda = hi;
  double h = excess(point, lambda, c1, c2);
  for (int iter = 0; iter < 200 && std::abs(h) > delta; ++iter) {
    if (h > 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    lambda = 0.5 * (lo + hi);
    h = excess(point, lambda, c1, c2);
  }

  // h has slope -m on the current piece, m = #{i : 0 < pi_i - lambda < c2}.
  Index m = 0;
  for (Index i = 0; i < point.size(); ++i) {
    const double v = point(i) - lambda;
    if (v > 0.0 && v < c2) ++m;
  }
  if (m > 0) {
    const double refined = lambda + h / static_cast<double>(m);
    if (refined >= 0.0) {
      const double h_refined = excess(point, refined, c1, c2);
      if (std::abs(h_refined) <= std::abs(h)) lambda = refined;
    }
  }
  return shrink_and_clip(point, lambda, c2);
}

}  // namespace optsel
