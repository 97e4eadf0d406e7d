#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doclens/matrix.hpp"

namespace doclens::analysis {

/// Throws DimensionMismatch or NotADistribution unless p and q have the same
/// length, are non-negative and finite, and each sums to 1 within 1e-6.
void check_distributions(std::span<const double> p, std::span<const double> q);

/// (1/sqrt 2) * ||sqrt p - sqrt q||_2, in [0, 1].
double hellinger(std::span<const double> p, std::span<const double> q);

/// Natural-log Jensen-Shannon divergence, in [0, ln 2].
double jensen_shannon(std::span<const double> p, std::span<const double> q);

/// KL(p || q) with 0 log 0 = 0. Throws NotADistribution when q_i = 0 < p_i.
double kl_divergence(std::span<const double> p, std::span<const double> q);

enum class Metric { JSD, Hellinger };

std::string_view to_string(Metric m) noexcept;
Metric metric_from_string(std::string_view s);

struct DistanceMatrix {
  Metric metric = Metric::JSD;
  std::vector<std::string> doc_ids;
  Matrix values;

  std::size_t size() const noexcept { return values.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }

  bool operator==(const DistanceMatrix&) const = default;
};

/// Pairwise metric over the rows of thetas. doc_ids may be empty; otherwise
/// it must have one entry per row. Element errors name the offending rows.
DistanceMatrix distance_matrix(const Matrix& thetas, Metric metric, std::vector<std::string> doc_ids = {});

/// Wraps an arbitrary symmetric, zero-diagonal, non-negative matrix (used
/// for hand-built fixtures and topic-topic distances). Throws
/// DimensionMismatch otherwise.
DistanceMatrix distance_matrix_from(Matrix values, Metric metric, std::vector<std::string> doc_ids = {});

}  // namespace doclens::analysis
