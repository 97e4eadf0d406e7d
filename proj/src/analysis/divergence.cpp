#include "doclens/analysis/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doclens/error.hpp"

namespace doclens::analysis {
namespace {

void check_one(std::span<const double> p, const char* name) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      throw Error(ErrorCode::NotADistribution,
                  std::string(name) + "[" + std::to_string(i) + "] = " + std::to_string(p[i]));
    }
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorCode::NotADistribution, std::string(name) + " sums to " + std::to_string(sum));
  }
}

}  // namespace

void check_distributions(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "lengths " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
  }
  if (p.empty()) throw Error(ErrorCode::NotADistribution, "empty distribution");
  check_one(p, "p");
  check_one(q, "q");
}

double hellinger(std::span<const double> p, std::span<const double> q) {
  check_distributions(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    s += d * d;
  }
  return std::min(1.0, std::sqrt(s) / std::numbers::sqrt2);
}

double jensen_shannon(std::span<const double> p, std::span<const double> q) {
  check_distributions(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * p[i] + 0.5 * q[i];
    double term = 0.0;
    if (p[i] > 0.0) term += p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) term += q[i] * std::log(q[i] / m);
    s += term;
  }
  return std::clamp(0.5 * s, 0.0, std::numbers::ln2);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  check_distributions(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw Error(ErrorCode::NotADistribution, "q[" + std::to_string(i) + "] = 0 where p is positive");
    }
    s += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(0.0, s);
}

std::string_view to_string(Metric m) noexcept { return m == Metric::JSD ? "jsd" : "hellinger"; }

Metric metric_from_string(std::string_view s) {
  if (s == "jsd") return Metric::JSD;
  if (s == "hellinger") return Metric::Hellinger;
  throw Error(ErrorCode::InvalidConfig, "metric: unknown value '" + std::string(s) + "'");
}

DistanceMatrix distance_matrix(const Matrix& thetas, Metric metric, std::vector<std::string> doc_ids) {
  const std::size_t n = thetas.rows();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "distance matrix needs at least 2 rows, got " + std::to_string(n));
  if (!doc_ids.empty() && doc_ids.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(doc_ids.size()) + " doc ids for " + std::to_string(n) + " rows");
  }
  DistanceMatrix out{metric, std::move(doc_ids), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      try {
        d = metric == Metric::JSD ? jensen_shannon(thetas.row(i), thetas.row(j))
                                  : hellinger(thetas.row(i), thetas.row(j));
      } catch (const Error& e) {
        throw Error(e.code(), "rows " + std::to_string(i) + ", " + std::to_string(j) + ": " + e.what());
      }
      out.values(i, j) = d;
      out.values(j, i) = d;
    }
  }
  return out;
}

DistanceMatrix distance_matrix_from(Matrix values, Metric metric, std::vector<std::string> doc_ids) {
  const std::size_t n = values.rows();
  if (values.cols() != n) throw Error(ErrorCode::DimensionMismatch, "distance matrix is not square");
  if (!doc_ids.empty() && doc_ids.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(doc_ids.size()) + " doc ids for " + std::to_string(n) + " rows");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (values(i, i) != 0.0) throw Error(ErrorCode::DimensionMismatch, "non-zero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (!(values(i, j) >= 0.0) || std::abs(values(i, j) - values(j, i)) > 1e-12) {
        throw Error(ErrorCode::DimensionMismatch,
                    "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is negative or asymmetric");
      }
    }
  }
  return {metric, std::move(doc_ids), std::move(values)};
}

}  // namespace doclens::analysis
