#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doclens/matrix.hpp"

namespace doclens::analysis {

enum class CorrelationMethod { Pearson, Spearman };

std::string_view to_string(CorrelationMethod m) noexcept;
CorrelationMethod correlation_from_string(std::string_view s);

struct Covariate {
  std::string name;
  /// One value per document; nullopt is missing.
  std::vector<std::optional<double>> values;
};

struct CorrelationCell {
  std::size_t pairs = 0;
  std::optional<double> r;
  std::optional<double> p_value;
  /// Why r is undefined.
  std::optional<std::string> reason;

  bool operator==(const CorrelationCell&) const = default;
};

struct CorrelationMatrix {
  CorrelationMethod method = CorrelationMethod::Pearson;
  std::vector<std::string> covariates;
  /// cells[topic][covariate]
  std::vector<std::vector<CorrelationCell>> cells;

  bool operator==(const CorrelationMatrix&) const = default;
};

/// Correlates every theta column with every covariate over the documents
/// where the covariate is present. Two-sided p from Student's t with
/// pairs - 2 degrees of freedom. A constant side leaves r undefined with a
/// reason. Throws InsufficientPairs (naming the cell) below 3 pairs and
/// DimensionMismatch when a covariate is misaligned.
CorrelationMatrix correlation_matrix(const Matrix& thetas, const std::vector<Covariate>& covariates,
                                     CorrelationMethod method);

/// Pearson r of two equal-length samples; nullopt when either is constant.
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Ranks starting at 1, ties receiving their average rank.
std::vector<double> average_ranks(const std::vector<double>& x);

}  // namespace doclens::analysis
