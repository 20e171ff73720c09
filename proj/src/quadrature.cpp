#include "apheat/quadrature.hpp"

#include <cmath>

namespace apheat {

const GaussRule1D& gauss3() {
  static const GaussRule1D rule = [] {
    const double r = std::sqrt(3.0 / 5.0);
    return GaussRule1D{{-r, 0.0, r}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
  }();
  return rule;
}

const QuadRule& quad_rule() {
  static const QuadRule rule = [] {
    const auto& g = gauss3();
    QuadRule q;
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) {
        q.points[3 * j + i] = {g.points[i], g.points[j]};
        q.weights[3 * j + i] = g.weights[i] * g.weights[j];
      }
    }
    return q;
  }();
  return rule;
}

const ErrorRule& error_rule() {
  static const ErrorRule rule = [] {
    const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
    const std::array<double, 5> x{-b, -a, 0.0, a, b};
    const std::array<double, 5> w{wb, wa, 128.0 / 225.0, wa, wb};
    ErrorRule q;
    for (int j = 0; j < 5; ++j) {
      for (int i = 0; i < 5; ++i) {
        q.points[5 * j + i] = {x[i], x[j]};
        q.weights[5 * j + i] = w[i] * w[j];
      }
    }
    return q;
  }();
  return rule;
}

}  // namespace apheat
