#include "doclens/analysis/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "doclens/error.hpp"
#include "doclens/rng.hpp"

namespace doclens::analysis {

std::string_view to_string(MappingMethod m) noexcept { return m == MappingMethod::TSNE ? "tsne" : "mds"; }

MappingMethod mapping_from_string(std::string_view s) {
  if (s == "tsne") return MappingMethod::TSNE;
  if (s == "mds") return MappingMethod::MDS;
  throw Error(ErrorCode::InvalidConfig, "method: unknown value '" + std::string(s) + "'");
}

namespace {

void center(Matrix& Y) {
  for (std::size_t c = 0; c < Y.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < Y.rows(); ++i) mean += Y(i, c);
    mean /= static_cast<double>(Y.rows());
    for (std::size_t i = 0; i < Y.rows(); ++i) Y(i, c) -= mean;
  }
}

std::vector<double> mat_vec(const Matrix& A, const std::vector<double>& v) {
  std::vector<double> out(A.rows(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(std::vector<double>& v) {
  const double norm = std::sqrt(dot(v, v));
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
}

}  // namespace

// ------------------------------------------------------------------------- MDS

Embedding2D classical_mds(const DistanceMatrix& dist, std::size_t dim) {
  const std::size_t n = dist.size();
  Embedding2D out;
  out.method = MappingMethod::MDS;
  out.doc_ids = dist.doc_ids;
  out.coords = Matrix(n, dim);
  if (n == 0) return out;

  Matrix B(n, n);
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d2 = dist(i, j) * dist(i, j);
      B(i, j) = d2;
      row_mean[i] += d2;
    }
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) B(i, j) = -0.5 * (B(i, j) - row_mean[i] - row_mean[j] + grand);
  }

  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    for (std::size_t j = 0; j < n; ++j) radius += std::abs(B(i, j));
    shift = std::max(shift, radius);
  }
  Matrix A = B;
  for (std::size_t i = 0; i < n; ++i) A(i, i) += shift;

  Rng rng(0x6d6473);
  const double tol = 1e-14 * std::max(shift, 1.0);
  for (std::size_t c = 0; c < std::min(dim, n); ++c) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    normalize(v);
    double mu = 0.0;
    for (std::size_t it = 0; it < 200000; ++it) {
      std::vector<double> w = mat_vec(A, v);
      mu = dot(v, w);
      double residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(w[i] - mu * v[i]));
      normalize(w);
      v = std::move(w);
      if (residual <= tol) break;
    }
    mu = dot(v, mat_vec(A, v));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) A(i, j) -= mu * v[i] * v[j];
    }
    const double eigenvalue = std::max(0.0, mu - shift);
    out.trace.push_back(eigenvalue);
    const double scale = std::sqrt(eigenvalue);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(v[i]) > std::abs(v[peak])) peak = i;
    }
    const double sign = v[peak] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.coords(i, c) = sign * scale * v[i];
  }
  center(out.coords);
  return out;
}

// ----------------------------------------------------------------------- t-SNE

double default_perplexity(std::size_t n) {
  return std::min(30.0, (static_cast<double>(n) - 1.0) / 3.0);
}

Matrix tsne_affinities(const DistanceMatrix& dist, double perplexity) {
  const std::size_t n = dist.size();
  if (!(perplexity > 0.0)) throw Error(ErrorCode::InvalidConfig, "perplexity must be positive");
  if (perplexity >= static_cast<double>(n) - 1.0) {
    throw Error(ErrorCode::PerplexityTooLarge,
                "perplexity " + std::to_string(perplexity) + " needs more than " + std::to_string(n) + " points");
  }
  const double target = std::log(perplexity);
  Matrix cond(n, n);
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) lowest = std::min(lowest, dist(i, j) * dist(i, j));
    }
    for (std::size_t j = 0; j < n; ++j) shifted[j] = j == i ? 0.0 : dist(i, j) * dist(i, j) - lowest;

    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 50; ++step) {
      double z = 0.0, weighted = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double e = std::exp(-beta * shifted[j]);
        cond(i, j) = e;
        z += e;
        weighted += shifted[j] * e;
      }
      for (std::size_t j = 0; j < n; ++j) cond(i, j) /= z;
      const double entropy = std::log(z) + beta * weighted / z;
      if (std::abs(std::exp(entropy) - perplexity) < 1e-4) break;
      if (entropy > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
      } else {
        hi = beta;
        beta = (beta + lo) / 2.0;
      }
    }
  }
  Matrix P(n, n);
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) P(i, j) = (cond(i, j) + cond(j, i)) / denom;
    }
  }
  return P;
}

namespace {

// Student-t kernel (1 + |y_i - y_j|^2)^-1 and its off-diagonal sum.
Matrix kernel(const Matrix& Y, double& total) {
  const std::size_t n = Y.rows();
  Matrix num(n, n);
  total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < Y.cols(); ++c) {
        const double t = Y(i, c) - Y(j, c);
        d2 += t * t;
      }
      const double v = 1.0 / (1.0 + d2);
      num(i, j) = v;
      num(j, i) = v;
      total += 2.0 * v;
    }
  }
  return num;
}

Matrix gradient(const Matrix& P, const Matrix& Y, double p_scale) {
  const std::size_t n = Y.rows();
  double total = 0.0;
  const Matrix num = kernel(Y, total);
  Matrix grad(n, Y.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double coeff = 4.0 * (p_scale * P(i, j) - num(i, j) / total) * num(i, j);
      for (std::size_t c = 0; c < Y.cols(); ++c) grad(i, c) += coeff * (Y(i, c) - Y(j, c));
    }
  }
  return grad;
}

}  // namespace

double tsne_kl(const Matrix& P, const Matrix& Y) {
  double total = 0.0;
  const Matrix num = kernel(Y, total);
  double kl = 0.0;
  for (std::size_t i = 0; i < P.rows(); ++i) {
    for (std::size_t j = 0; j < P.cols(); ++j) {
      if (i == j || P(i, j) <= 0.0) continue;
      kl += P(i, j) * std::log(P(i, j) / (num(i, j) / total));
    }
  }
  return kl;
}

Matrix tsne_gradient(const Matrix& P, const Matrix& Y) { return gradient(P, Y, 1.0); }

Embedding2D tsne(const DistanceMatrix& dist, const TsneParams& params) {
  const std::size_t n = dist.size();
  const double perplexity = params.perplexity.value_or(default_perplexity(n));
  const Matrix P = tsne_affinities(dist, perplexity);

  Rng rng(params.seed);
  Matrix Y(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 2; ++c) Y(i, c) = 1e-4 * rng.normal();
  }
  Matrix velocity(n, 2);

  Embedding2D out;
  out.method = MappingMethod::TSNE;
  out.doc_ids = dist.doc_ids;
  out.perplexity = perplexity;
  out.seed = params.seed;
  for (std::size_t it = 0; it < params.iterations; ++it) {
    const bool early = it < params.exaggeration_iters;
    if (it == params.exaggeration_iters) velocity = Matrix(n, 2);
    const Matrix grad = gradient(P, Y, early ? params.exaggeration : 1.0);
    const double momentum = early ? params.initial_momentum : params.final_momentum;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < 2; ++c) {
        velocity(i, c) = momentum * velocity(i, c) - params.learning_rate * grad(i, c);
        Y(i, c) += velocity(i, c);
      }
    }
    center(Y);
    out.trace.push_back(tsne_kl(P, Y));
  }
  out.coords = std::move(Y);
  return out;
}

}  // namespace doclens::analysis
