#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "doclens/analysis/divergence.hpp"
#include "doclens/matrix.hpp"

namespace doclens::analysis {

enum class ClusterAlgorithm { Hierarchical, KMeans, Hdbscan };
enum class Linkage { Single, Average, Complete };
enum class KMeansSpace { Euclidean, Hellinger };

std::string_view to_string(ClusterAlgorithm a) noexcept;
ClusterAlgorithm algorithm_from_string(std::string_view s);
std::string_view to_string(Linkage l) noexcept;
Linkage linkage_from_string(std::string_view s);
std::string_view to_string(KMeansSpace s) noexcept;
KMeansSpace space_from_string(std::string_view s);

/// One agglomeration step. Points are clusters 0..n-1; the cluster created
/// by merge m has id n + m. a < b.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;
  double height = 0.0;
  std::size_t size = 0;

  bool operator==(const Merge&) const = default;
};

/// Condensed-tree edge. Ids below n are points, ids from n are clusters with
/// n being the root. lambda = 1 / distance at which child leaves parent.
struct CondensedEdge {
  std::size_t parent = 0;
  std::size_t child = 0;
  double lambda = 0.0;
  std::size_t child_size = 0;

  bool operator==(const CondensedEdge&) const = default;
};

struct ClusterResult {
  ClusterAlgorithm algorithm = ClusterAlgorithm::Hierarchical;
  /// Cluster per document, numbered 0.. by first appearance; -1 is noise.
  std::vector<int> labels;

  // hierarchical
  Linkage linkage = Linkage::Average;
  std::vector<Merge> dendrogram;

  // k-means
  KMeansSpace space = KMeansSpace::Hellinger;
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  double inertia = 0.0;
  /// Inertia after every assignment step of the winning restart.
  std::vector<double> inertia_trace;
  /// One row per label, in the transformed space.
  Matrix centroids;

  // hdbscan
  std::size_t min_cluster_size = 0;
  std::size_t min_samples = 0;
  std::vector<CondensedEdge> condensed_tree;
  /// Stability of each selected cluster, indexed by label.
  std::vector<double> stabilities;

  std::size_t requested_k = 0;

  std::size_t num_clusters() const;

  bool operator==(const ClusterResult&) const = default;
};

/// Bottom-up merging with Lance-Williams updates. At each step the closest
/// pair of active clusters merges; equal distances go to the pair with the
/// smallest (a, b) cluster ids. Labels come from the state after n - k
/// merges. Throws BadK unless 1 <= k <= n.
ClusterResult agglomerative(const DistanceMatrix& dist, Linkage linkage, std::size_t k);

/// Lloyd iterations from k-means++ seeds, best final inertia over restarts
/// (earlier restart on ties). In Hellinger space each row is mapped to its
/// element-wise square root first. Assignment ties go to the lower centroid
/// index and an empty cluster keeps its previous centroid; clusters still
/// empty at the end are dropped, so duplicate points can yield fewer than k
/// labels. Throws BadK unless 1 <= k <= n.
ClusterResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t restarts = 10,
                     KMeansSpace space = KMeansSpace::Hellinger, std::size_t max_iter = 300);

struct MstEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;

  bool operator==(const MstEdge&) const = default;
};

/// Distance to the min_samples-th nearest point, counting the point itself
/// (min_samples = 1 gives 0).
std::vector<double> core_distances(const DistanceMatrix& dist, std::size_t min_samples);

/// max(core_a, core_b, d(a, b)) off the diagonal, 0 on it.
Matrix mutual_reachability(const DistanceMatrix& dist, std::size_t min_samples);

/// Prim's algorithm from vertex 0. The next vertex is the one with the
/// smallest connecting weight (lowest index on ties); its parent is the
/// earliest tree vertex achieving that weight. Edges in insertion order.
std::vector<MstEdge> prim_mst(const Matrix& weights);

/// Mutual-reachability MST, single-linkage hierarchy, condensed tree with
/// min_cluster_size, excess-of-mass selection. The root is never selected,
/// so input without any split into two clusters of min_cluster_size is all
/// noise. lambda for a zero distance is capped at 1e12.
/// Throws TooFewPoints when n < min_cluster_size and InvalidConfig for
/// min_cluster_size < 2 or min_samples < 1.
ClusterResult hdbscan(const DistanceMatrix& dist, std::size_t min_cluster_size, std::size_t min_samples);

/// Renumbers labels 0.. by first appearance, keeping -1.
std::vector<int> canonical_labels(const std::vector<int>& labels);

}  // namespace doclens::analysis
