#include "doclens/topics/nmf.hpp"

#include <cmath>

#include "doclens/error.hpp"
#include "doclens/rng.hpp"

namespace doclens::topics {
namespace {

// C = A^T B
Matrix at_b(const Matrix& A, const Matrix& B) {
  Matrix C(A.cols(), B.cols());
  for (std::size_t r = 0; r < A.rows(); ++r) {
    for (std::size_t i = 0; i < A.cols(); ++i) {
      const double a = A(r, i);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += a * B(r, j);
    }
  }
  return C;
}

// C = A B^T
Matrix a_bt(const Matrix& A, const Matrix& B) {
  Matrix C(A.rows(), B.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < B.rows(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < A.cols(); ++c) s += A(i, c) * B(j, c);
      C(i, j) = s;
    }
  }
  return C;
}

// C = A B
Matrix a_b(const Matrix& A, const Matrix& B) {
  Matrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t c = 0; c < A.cols(); ++c) {
      const double a = A(i, c);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += a * B(c, j);
    }
  }
  return C;
}

void multiplicative_step(Matrix& target, const Matrix& numer, const Matrix& denom) {
  for (std::size_t i = 0; i < target.rows(); ++i) {
    for (std::size_t j = 0; j < target.cols(); ++j) {
      const double d = denom(i, j);
      if (d > 0.0) target(i, j) *= numer(i, j) / d;
    }
  }
}

}  // namespace

double frobenius_error(const Matrix& input, const Matrix& W, const Matrix& H) {
  double sum = 0.0;
  for (std::size_t i = 0; i < input.rows(); ++i) {
    for (std::size_t j = 0; j < input.cols(); ++j) {
      double approx = 0.0;
      for (std::size_t k = 0; k < W.cols(); ++k) approx += W(i, k) * H(k, j);
      const double diff = input(i, j) - approx;
      sum += diff * diff;
    }
  }
  return std::sqrt(sum);
}

NmfFactors nmf_factorize(const Matrix& input, const NmfParams& params) {
  const std::size_t n = input.rows();
  const std::size_t m = input.cols();
  const std::size_t K = params.num_topics;
  if (n == 0 || m == 0) throw Error(ErrorCode::EmptyCorpus, "input matrix is empty");
  if (K < 1) throw Error(ErrorCode::InvalidConfig, "K must be >= 1");
  if (!(params.tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "tol must be positive");

  double total = 0.0;
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double x = input(i, j);
      if (x < 0.0 || std::isnan(x)) {
        throw Error(ErrorCode::NegativeInput, "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is negative");
      }
      row_sum += x;
      norm_sq += x * x;
    }
    if (row_sum == 0.0) throw Error(ErrorCode::AllZeroRow, "row " + std::to_string(i) + " is all zero");
    total += row_sum;
  }

  // Uniform init scaled so that WH starts near the data mean.
  Rng rng(params.seed);
  const double scale = std::sqrt(total / static_cast<double>(n * m) / static_cast<double>(K));
  NmfFactors f{Matrix(n, K), Matrix(K, m), {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) f.W(i, k) = scale * (0.1 + rng.uniform());
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < m; ++j) f.H(k, j) = scale * (0.1 + rng.uniform());
  }

  const double floor = 1e-12 * std::sqrt(norm_sq);
  double prev = frobenius_error(input, f.W, f.H);
  for (std::size_t it = 0; it < params.max_iter; ++it) {
    const Matrix wtv = at_b(f.W, input);
    const Matrix wtwh = a_b(at_b(f.W, f.W), f.H);
    multiplicative_step(f.H, wtv, wtwh);

    const Matrix vht = a_bt(input, f.H);
    const Matrix whht = a_b(f.W, a_bt(f.H, f.H));
    multiplicative_step(f.W, vht, whht);

    const double err = frobenius_error(input, f.W, f.H);
    f.errors.push_back(err);
    if (err <= floor) break;
    if ((prev - err) / prev < params.tol) break;
    prev = err;
  }
  return f;
}

TopicModel nmf_fit(const Matrix& input, const NmfParams& params) {
  NmfFactors f = nmf_factorize(input, params);
  const std::size_t K = params.num_topics;
  const std::size_t n = input.rows();
  const std::size_t m = input.cols();

  TopicModel model;
  model.method = TopicMethod::NMF;
  model.num_topics = K;
  model.seed = params.seed;
  model.trace = std::move(f.errors);

  std::vector<double> h_mass(K, 0.0);
  model.phi = f.H;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < m; ++j) h_mass[k] += f.H(k, j);
    normalize_row(model.phi.row(k));
  }
  model.theta = Matrix(n, K);
  model.doc_lengths.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) model.theta(i, k) = f.W(i, k) * h_mass[k];
    normalize_row(model.theta.row(i));
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) row_sum += input(i, j);
    model.doc_lengths[i] = row_sum;
  }
  model.vocab.resize(m);
  for (std::size_t v = 0; v < m; ++v) model.vocab[v] = "w" + std::to_string(v);
  model.doc_ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) model.doc_ids[i] = "d" + std::to_string(i);
  model.labels.resize(K);
  for (std::size_t k = 0; k < K; ++k) model.labels[k] = "topic-" + std::to_string(k);
  return model;
}

}  // namespace doclens::topics
