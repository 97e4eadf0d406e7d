#include "doclens/analysis/manova.hpp"

#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>

#include "doclens/error.hpp"

namespace doclens::analysis {
namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

std::optional<double> f_upper_tail(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0) || !std::isfinite(f)) return std::nullopt;
  if (f <= 0.0) return 1.0;
  boost::math::fisher_f_distribution<double> dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

}  // namespace

std::string_view to_string(ManovaFallback f) noexcept { return f == ManovaFallback::None ? "none" : "pillai"; }

Sscp sscp(const Matrix& x, const std::vector<int>& labels) {
  const std::size_t p = x.cols();
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) groups[labels[i]].push_back(i);
  }
  std::vector<double> grand(p, 0.0);
  std::size_t total = 0;
  for (const auto& [g, rows] : groups) {
    for (std::size_t i : rows) {
      for (std::size_t j = 0; j < p; ++j) grand[j] += x(i, j);
    }
    total += rows.size();
  }
  for (double& v : grand) v /= static_cast<double>(total);

  Sscp out{Matrix(p, p), Matrix(p, p)};
  for (const auto& [g, rows] : groups) {
    std::vector<double> mean(p, 0.0);
    for (std::size_t i : rows) {
      for (std::size_t j = 0; j < p; ++j) mean[j] += x(i, j);
    }
    for (double& v : mean) v /= static_cast<double>(rows.size());
    for (std::size_t i : rows) {
      for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) out.within(a, b) += (x(i, a) - mean[a]) * (x(i, b) - mean[b]);
      }
    }
    const double n = static_cast<double>(rows.size());
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = 0; b < p; ++b) out.between(a, b) += n * (mean[a] - grand[a]) * (mean[b] - grand[b]);
    }
  }
  return out;
}

ManovaReport manova(const Matrix& thetas, const std::vector<int>& labels) {
  if (labels.size() != thetas.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(labels.size()) + " labels for " + std::to_string(thetas.rows()) + " rows");
  }
  std::map<int, std::size_t> sizes;
  for (int l : labels) {
    if (l >= 0) ++sizes[l];
  }
  if (sizes.size() < 2) {
    throw Error(ErrorCode::TooFewGroups, std::to_string(sizes.size()) + " non-noise group(s); need at least 2");
  }
  for (const auto& [g, count] : sizes) {
    if (count < 2) throw Error(ErrorCode::GroupTooSmall, "group " + std::to_string(g) + " has 1 member");
  }

  ManovaReport r;
  r.num_groups = sizes.size();
  for (const auto& [g, count] : sizes) r.num_observations += count;
  r.dims = thetas.cols() == 0 ? 0 : thetas.cols() - 1;
  if (r.dims == 0) {
    r.note = "a single topic leaves no coordinates after dropping the last";
    return r;
  }

  Matrix reduced(thetas.rows(), r.dims);
  for (std::size_t i = 0; i < thetas.rows(); ++i) {
    for (std::size_t j = 0; j < r.dims; ++j) reduced(i, j) = thetas(i, j);
  }
  const Sscp s = sscp(reduced, labels);
  const Eigen::MatrixXd W = to_eigen(s.within);
  const Eigen::MatrixXd T = W + to_eigen(s.between);

  const double p = static_cast<double>(r.dims);
  const double q = static_cast<double>(r.num_groups - 1);
  const double error_df = static_cast<double>(r.num_observations - r.num_groups);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const bool well_conditioned = lo > 0.0 && hi / lo <= 1e12;

  if (well_conditioned) {
    const double lambda = W.determinant() / T.determinant();
    r.wilks_lambda = lambda;
    const double t = p * p + q * q - 5.0 > 0.0 ? std::sqrt((p * p * q * q - 4.0) / (p * p + q * q - 5.0)) : 1.0;
    const double df1 = p * q;
    const double df2 = (error_df + q - (p + q + 1.0) / 2.0) * t - (p * q - 2.0) / 2.0;
    const double root = std::pow(lambda, 1.0 / t);
    r.df1 = df1;
    r.df2 = df2;
    if (df2 > 0.0) {
      r.f_stat = (1.0 - root) / root * (df2 / df1);
      r.p_value = f_upper_tail(*r.f_stat, df1, df2);
    } else {
      r.note = "too few observations for the F approximation";
    }
    return r;
  }

  r.fallback_used = ManovaFallback::Pillai;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(T);
  if (!lu.isInvertible()) {
    r.note = "within- and between-group scatter are singular";
    return r;
  }
  const double v = (to_eigen(s.between) * lu.inverse()).trace();
  r.pillai_trace = v;
  const double sdim = std::min(p, q);
  const double m = (std::abs(p - q) - 1.0) / 2.0;
  const double nn = (error_df - p - 1.0) / 2.0;
  const double df1 = sdim * (2.0 * m + sdim + 1.0);
  const double df2 = sdim * (2.0 * nn + sdim + 1.0);
  r.df1 = df1;
  r.df2 = df2;
  if (sdim - v <= 1e-12 * sdim) {
    r.note = "Pillai's trace is at its maximum; the F statistic is unbounded";
    return r;
  }
  if (df2 <= 0.0) {
    r.note = "too few observations for the F approximation";
    return r;
  }
  r.f_stat = (df2 / df1) * v / (sdim - v);
  r.p_value = f_upper_tail(*r.f_stat, df1, df2);
  return r;
}

}  // namespace doclens::analysis
