#include "stbem/gauss.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace stbem {

namespace {

gauss_rule compute_rule(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("gauss_legendre: order must be positive");
  }
  gauss_rule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  // Newton iteration for roots of P_n on [-1, 1], then map to [0, 1].
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75)
                        / (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(j) + 1.0) * z * p1
              - static_cast<double>(j) * p2) / (static_cast<double>(j) + 1.0);
      }
      pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) {
        break;
      }
    }
    const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.x[i] = 0.5 * (1.0 - z);
    rule.w[i] = 0.5 * wi;
    rule.x[n - 1 - i] = 0.5 * (1.0 + z);
    rule.w[n - 1 - i] = 0.5 * wi;
  }
  return rule;
}

}  // namespace

const gauss_rule& gauss_legendre(std::size_t n) {
  static std::map<std::size_t, gauss_rule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, compute_rule(n)).first;
  }
  return it->second;
}

gauss_rule gauss_subdivided(std::size_t n, std::vector<double> breakpoints) {
  std::vector<double> cuts;
  cuts.push_back(0.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints) {
    if (b > 1e-14 && b < 1.0 - 1e-14
        && (cuts.empty() || b > cuts.back() + 1e-14)) {
      cuts.push_back(b);
    }
  }
  cuts.push_back(1.0);
  const gauss_rule& base = gauss_legendre(n);
  gauss_rule rule;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], len = cuts[c + 1] - cuts[c];
    for (std::size_t i = 0; i < n; ++i) {
      rule.x.push_back(a + len * base.x[i]);
      rule.w.push_back(len * base.w[i]);
    }
  }
  return rule;
}

gauss_rule gauss_graded(std::size_t n, std::size_t levels, double ratio,
                        bool toward_zero) {
  if (!(ratio > 0.0) || !(ratio < 1.0)) {
    throw std::invalid_argument("gauss_graded: ratio must be in (0, 1)");
  }
  std::vector<double> cuts;
  double edge = 1.0;
  for (std::size_t l = 0; l + 1 < levels; ++l) {
    edge *= ratio;
    cuts.push_back(toward_zero ? edge : 1.0 - edge);
  }
  return gauss_subdivided(n, std::move(cuts));
}

}  // namespace stbem
