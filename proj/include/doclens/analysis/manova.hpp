#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doclens/matrix.hpp"

namespace doclens::analysis {

enum class ManovaFallback { None, Pillai };

std::string_view to_string(ManovaFallback f) noexcept;

struct ManovaReport {
  std::size_t num_groups = 0;
  std::size_t num_observations = 0;
  /// Reduced dimension (topics minus one).
  std::size_t dims = 0;
  std::optional<double> wilks_lambda;
  std::optional<double> pillai_trace;
  std::optional<double> f_stat;
  std::optional<double> df1;
  std::optional<double> df2;
  std::optional<double> p_value;
  ManovaFallback fallback_used = ManovaFallback::None;
  /// Set when the test is undefined for this input.
  std::optional<std::string> note;

  bool operator==(const ManovaReport&) const = default;
};

/// One-way MANOVA of the rows of thetas grouped by label; label -1 rows are
/// ignored. The last column is dropped before computing the within (W) and
/// between (B) SSCP matrices. Wilks' lambda det(W)/det(W+B) is converted
/// with Rao's F approximation. When W is singular or its condition number
/// exceeds 1e12, Pillai's trace is used instead; when that is undefined too
/// the statistics are left empty and note explains why.
/// Throws TooFewGroups (< 2 groups) and GroupTooSmall (a group of size 1).
ManovaReport manova(const Matrix& thetas, const std::vector<int>& labels);

struct Sscp {
  Matrix within;
  Matrix between;
};

/// Within- and between-group SSCP matrices of the given observations.
Sscp sscp(const Matrix& observations, const std::vector<int>& labels);

}  // namespace doclens::analysis
