#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doclens/analysis/divergence.hpp"
#include "doclens/matrix.hpp"

namespace doclens::analysis {

enum class MappingMethod { TSNE, MDS };

std::string_view to_string(MappingMethod m) noexcept;
MappingMethod mapping_from_string(std::string_view s);

struct Embedding2D {
  MappingMethod method = MappingMethod::MDS;
  std::vector<std::string> doc_ids;
  /// n x dim
  Matrix coords;
  /// t-SNE: KL(P || Q) after every iteration. MDS: the top eigenvalues.
  std::vector<double> trace;
  std::optional<double> perplexity;
  std::uint64_t seed = 0;

  bool operator==(const Embedding2D&) const = default;
};

/// Torgerson scaling: B = -1/2 J D^2 J, top eigenpairs by power iteration
/// with deflation (shifted by a Gershgorin bound so the largest algebraic
/// eigenvalues come first), negative eigenvalues clamped to 0. Each axis is
/// signed so its largest-magnitude coordinate is positive; output centered.
Embedding2D classical_mds(const DistanceMatrix& dist, std::size_t dim = 2);

struct TsneParams {
  /// Default min(30, (n - 1) / 3).
  std::optional<double> perplexity;
  std::uint64_t seed = 0;
  std::size_t iterations = 1000;
  std::size_t exaggeration_iters = 250;
  double exaggeration = 12.0;
  double learning_rate = 200.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
};

double default_perplexity(std::size_t n);

/// Symmetrized joint probabilities from squared input distances. Each
/// conditional's precision is found by bisection until the perplexity is
/// within 1e-4 (at most 50 steps). Throws PerplexityTooLarge when
/// perplexity >= n - 1 and InvalidConfig when it is not positive.
Matrix tsne_affinities(const DistanceMatrix& dist, double perplexity);

/// KL(P || Q) for Student-t similarities of the embedding Y.
double tsne_kl(const Matrix& P, const Matrix& Y);

/// Exact gradient of tsne_kl with respect to Y.
Matrix tsne_gradient(const Matrix& P, const Matrix& Y);

/// Exact O(n^2) t-SNE by gradient descent with momentum: N(0, 1e-4)
/// initialization, early exaggeration, and a momentum switch after the
/// exaggeration phase, where the velocity is reset. Deterministic per seed;
/// output centered.
Embedding2D tsne(const DistanceMatrix& dist, const TsneParams& params = {});

}  // namespace doclens::analysis
