#pragma once

#include <cstdint>
#include <vector>

#include "doclens/matrix.hpp"
#include "doclens/topics/model.hpp"

namespace doclens::topics {

struct NmfParams {
  std::size_t num_topics = 10;
  std::size_t max_iter = 1000;
  /// Stop once the relative decrease of the Frobenius error drops below tol.
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

struct NmfFactors {
  Matrix W;  // rows x K
  Matrix H;  // K x cols
  /// ||V - WH||_F after every update of both factors.
  std::vector<double> errors;
};

/// Lee-Seung multiplicative updates for the Frobenius objective:
///
///   H <- H * (W^T V) / (W^T W H)
///   W <- W * (V H^T) / (W H H^T)
///
/// An entry whose denominator is exactly zero is left unchanged. The
/// iteration stops at max_iter, when the relative error decrease is below
/// tol, or when the error falls under 1e-12 ||V||_F (exact factorization).
///
/// Throws NegativeInput, AllZeroRow (naming the row) and InvalidConfig.
NmfFactors nmf_factorize(const Matrix& input, const NmfParams& params);

/// Factorizes and converts the factors to distributions: phi rows are the
/// normalized rows of H and theta_d is proportional to W_d scaled by the row
/// sums of H. doc_lengths come from the input row sums.
TopicModel nmf_fit(const Matrix& input, const NmfParams& params);

double frobenius_error(const Matrix& input, const Matrix& W, const Matrix& H);

}  // namespace doclens::topics
