#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lieep/error.hpp"

namespace lieep {

/// k-point Gauss-Legendre rule mapped to [0, 1]; exact through degree 2k-1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int points) {
    if (points < 1) throw Error(ErrorKind::invalid_input, "GaussLegendre: need at least one point");
    const auto k = static_cast<std::size_t>(points);
    nodes.resize(k);
    weights.resize(k);
    for (std::size_t i = 0; i < (k + 1) / 2; ++i) {
      // Newton on P_k starting from the Chebyshev-like guess.
      long double x = std::cos(std::numbers::pi_v<long double> * (static_cast<long double>(i) + 0.75L) /
                               (static_cast<long double>(k) + 0.5L));
      long double dp = 0.0L;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1.0L;
        long double p1 = x;
        for (std::size_t n = 2; n <= k; ++n) {
          const long double p2 = ((2.0L * n - 1.0L) * x * p1 - (n - 1.0L) * p0) / static_cast<long double>(n);
          p0 = p1;
          p1 = p2;
        }
        dp = static_cast<long double>(k) * (x * p1 - p0) / (x * x - 1.0L);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
      long double p0 = 1.0L;
      long double p1 = x;
      for (std::size_t n = 2; n <= k; ++n) {
        const long double p2 = ((2.0L * n - 1.0L) * x * p1 - (n - 1.0L) * p0) / static_cast<long double>(n);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<long double>(k) * (x * p1 - p0) / (x * x - 1.0L);
      const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
      // [-1, 1] -> [0, 1]
      nodes[i] = static_cast<double>((1.0L - x) / 2.0L);
      nodes[k - 1 - i] = static_cast<double>((1.0L + x) / 2.0L);
      weights[i] = weights[k - 1 - i] = static_cast<double>(w / 2.0L);
    }
  }

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

}  // namespace lieep
