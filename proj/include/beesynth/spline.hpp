#pragma once

#include <vector>

namespace beesynth {

/// Natural cubic spline (zero second derivative at both ends). Knots must be
/// strictly increasing in x.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  const std::vector<double>& second_derivatives() const { return m_; }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace beesynth
