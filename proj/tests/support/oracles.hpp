#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "doclens/matrix.hpp"

namespace doclens::testing {

inline double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

/// Greedy one-to-one matching of fitted rows to true rows by descending
/// cosine; returns the matched cosines (one per true row).
inline std::vector<double> greedy_matched_cosines(const Matrix& fitted, const Matrix& truth) {
  const std::size_t n = truth.rows();
  std::vector<bool> used_f(fitted.rows(), false), used_t(n, false);
  std::vector<double> out;
  for (std::size_t step = 0; step < std::min(n, fitted.rows()); ++step) {
    double best = -2.0;
    std::size_t bf = 0, bt = 0;
    for (std::size_t f = 0; f < fitted.rows(); ++f) {
      if (used_f[f]) continue;
      for (std::size_t t = 0; t < n; ++t) {
        if (used_t[t]) continue;
        const double c = cosine(fitted.row(f), truth.row(t));
        if (c > best) {
          best = c;
          bf = f;
          bt = t;
        }
      }
    }
    used_f[bf] = used_t[bt] = true;
    out.push_back(best);
  }
  return out;
}

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace doclens::testing
