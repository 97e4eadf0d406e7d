#include "doclens/analysis/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "doclens/error.hpp"

namespace doclens::analysis {

std::string_view to_string(CorrelationMethod m) noexcept {
  return m == CorrelationMethod::Pearson ? "pearson" : "spearman";
}

CorrelationMethod correlation_from_string(std::string_view s) {
  if (s == "pearson") return CorrelationMethod::Pearson;
  if (s == "spearman") return CorrelationMethod::Spearman;
  throw Error(ErrorCode::InvalidConfig, "method: unknown value '" + std::string(s) + "'");
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

bool constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

CorrelationMatrix correlation_matrix(const Matrix& thetas, const std::vector<Covariate>& covariates,
                                     CorrelationMethod method) {
  CorrelationMatrix out;
  out.method = method;
  for (const auto& c : covariates) {
    if (c.values.size() != thetas.rows()) {
      throw Error(ErrorCode::DimensionMismatch, "covariate '" + c.name + "' has " + std::to_string(c.values.size()) +
                                                    " values for " + std::to_string(thetas.rows()) + " documents");
    }
    out.covariates.push_back(c.name);
  }
  for (std::size_t k = 0; k < thetas.cols(); ++k) {
    std::vector<CorrelationCell> row;
    for (const auto& c : covariates) {
      std::vector<double> x, y;
      for (std::size_t d = 0; d < thetas.rows(); ++d) {
        if (!c.values[d]) continue;
        x.push_back(thetas(d, k));
        y.push_back(*c.values[d]);
      }
      if (x.size() < 3) {
        throw Error(ErrorCode::InsufficientPairs, "topic " + std::to_string(k) + " x '" + c.name + "': " +
                                                      std::to_string(x.size()) + " complete pairs, need 3");
      }
      CorrelationCell cell;
      cell.pairs = x.size();
      if (constant(y)) {
        cell.reason = "covariate is constant";
      } else if (constant(x)) {
        cell.reason = "topic proportion is constant";
      } else {
        if (method == CorrelationMethod::Spearman) {
          x = average_ranks(x);
          y = average_ranks(y);
        }
        cell.r = pearson(x, y);
        const double r = *cell.r;
        const double df = static_cast<double>(x.size()) - 2.0;
        if (std::abs(r) >= 1.0) {
          cell.p_value = 0.0;
        } else {
          const double t = r * std::sqrt(df / (1.0 - r * r));
          boost::math::students_t dist(df);
          cell.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
        }
      }
      row.push_back(std::move(cell));
    }
    out.cells.push_back(std::move(row));
  }
  return out;
}

}  // namespace doclens::analysis
