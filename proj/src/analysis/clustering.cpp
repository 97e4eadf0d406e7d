#include "doclens/analysis/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "doclens/error.hpp"
#include "doclens/rng.hpp"

namespace doclens::analysis {

std::string_view to_string(ClusterAlgorithm a) noexcept {
  switch (a) {
    case ClusterAlgorithm::Hierarchical: return "hierarchical";
    case ClusterAlgorithm::KMeans: return "kmeans";
    case ClusterAlgorithm::Hdbscan: return "hdbscan";
  }
  return "hierarchical";
}

ClusterAlgorithm algorithm_from_string(std::string_view s) {
  if (s == "hierarchical") return ClusterAlgorithm::Hierarchical;
  if (s == "kmeans") return ClusterAlgorithm::KMeans;
  if (s == "hdbscan") return ClusterAlgorithm::Hdbscan;
  throw Error(ErrorCode::InvalidConfig, "algo: unknown value '" + std::string(s) + "'");
}

std::string_view to_string(Linkage l) noexcept {
  switch (l) {
    case Linkage::Single: return "single";
    case Linkage::Average: return "average";
    case Linkage::Complete: return "complete";
  }
  return "average";
}

Linkage linkage_from_string(std::string_view s) {
  if (s == "single") return Linkage::Single;
  if (s == "average") return Linkage::Average;
  if (s == "complete") return Linkage::Complete;
  throw Error(ErrorCode::InvalidConfig, "linkage: unknown value '" + std::string(s) + "'");
}

std::string_view to_string(KMeansSpace s) noexcept { return s == KMeansSpace::Euclidean ? "euclidean" : "hellinger"; }

KMeansSpace space_from_string(std::string_view s) {
  if (s == "euclidean") return KMeansSpace::Euclidean;
  if (s == "hellinger") return KMeansSpace::Hellinger;
  throw Error(ErrorCode::InvalidConfig, "space: unknown value '" + std::string(s) + "'");
}

std::size_t ClusterResult::num_clusters() const {
  int top = -1;
  for (int l : labels) top = std::max(top, l);
  return static_cast<std::size_t>(top + 1);
}

std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::map<int, int> rename;
  std::vector<int> out(labels.size(), -1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    auto [it, fresh] = rename.emplace(labels[i], static_cast<int>(rename.size()));
    out[i] = it->second;
  }
  return out;
}

// ---------------------------------------------------------------- hierarchical

ClusterResult agglomerative(const DistanceMatrix& dist, Linkage linkage, std::size_t k) {
  const std::size_t n = dist.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::BadK, "k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  const std::size_t total = 2 * n - 1;
  Matrix d(total, total);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d(i, j) = dist(i, j);
  }
  std::vector<std::size_t> size(total, 1);
  std::vector<std::vector<std::size_t>> members(total);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);

  ClusterResult out;
  out.algorithm = ClusterAlgorithm::Hierarchical;
  out.linkage = linkage;
  out.requested_k = k;
  out.labels.resize(n);
  auto snapshot = [&] {
    for (std::size_t c = 0; c < active.size(); ++c) {
      for (std::size_t p : members[active[c]]) out.labels[p] = static_cast<int>(c);
    }
    out.labels = canonical_labels(out.labels);
  };
  if (k == n) snapshot();

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t ba = 0, bb = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const double v = d(active[x], active[y]);
        if (v < best) {
          best = v;
          ba = active[x];
          bb = active[y];
        }
      }
    }
    const std::size_t id = n + step;
    size[id] = size[ba] + size[bb];
    for (std::size_t c : active) {
      if (c == ba || c == bb) continue;
      double v = 0.0;
      switch (linkage) {
        case Linkage::Single: v = std::min(d(ba, c), d(bb, c)); break;
        case Linkage::Complete: v = std::max(d(ba, c), d(bb, c)); break;
        case Linkage::Average:
          v = (static_cast<double>(size[ba]) * d(ba, c) + static_cast<double>(size[bb]) * d(bb, c)) /
              static_cast<double>(size[id]);
          break;
      }
      d(id, c) = v;
      d(c, id) = v;
    }
    members[id] = members[ba];
    members[id].insert(members[id].end(), members[bb].begin(), members[bb].end());
    std::erase_if(active, [&](std::size_t c) { return c == ba || c == bb; });
    active.push_back(id);
    out.dendrogram.push_back({ba, bb, best, size[id]});
    if (step + 1 == n - k) snapshot();
  }
  return out;
}

// --------------------------------------------------------------------- k-means

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

struct LloydRun {
  std::vector<int> assign;
  Matrix centroids;
  std::vector<double> trace;
};

Matrix plus_plus_seeds(const Matrix& X, std::size_t k, Rng& rng) {
  const std::size_t n = X.rows();
  Matrix C(k, X.cols());
  std::vector<char> chosen(n, 0);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.below(n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double sum = 0.0;
      for (double v : d2) sum += v;
      if (sum > 0.0) {
        pick = rng.categorical(d2);
      } else {
        pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), 0) - chosen.begin());
      }
    }
    chosen[pick] = 1;
    std::copy(X.row(pick).begin(), X.row(pick).end(), C.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(X.row(i), C.row(c)));
  }
  return C;
}

LloydRun lloyd(const Matrix& X, Matrix C, std::size_t max_iter) {
  const std::size_t n = X.rows();
  const std::size_t k = C.rows();
  LloydRun run;
  run.assign.assign(n, -1);
  for (std::size_t it = 0; it < max_iter; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double bd = sq_dist(X.row(i), C.row(0));
      for (std::size_t c = 1; c < k; ++c) {
        const double v = sq_dist(X.row(i), C.row(c));
        if (v < bd) {
          bd = v;
          best = c;
        }
      }
      inertia += bd;
      if (run.assign[i] != static_cast<int>(best)) {
        run.assign[i] = static_cast<int>(best);
        changed = true;
      }
    }
    run.trace.push_back(inertia);
    if (!changed) break;
    Matrix sums(k, X.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(run.assign[i]);
      ++counts[c];
      for (std::size_t j = 0; j < X.cols(); ++j) sums(c, j) += X(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < X.cols(); ++j) C(c, j) = sums(c, j) / static_cast<double>(counts[c]);
    }
  }
  run.centroids = std::move(C);
  return run;
}

}  // namespace

ClusterResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t restarts,
                     KMeansSpace space, std::size_t max_iter) {
  const std::size_t n = points.rows();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::BadK, "k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  if (restarts < 1) throw Error(ErrorCode::InvalidConfig, "restarts must be at least 1");
  Matrix X = points;
  if (space == KMeansSpace::Hellinger) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < X.cols(); ++j) {
        if (!(X(i, j) >= 0.0)) {
          throw Error(ErrorCode::NotADistribution,
                      "row " + std::to_string(i) + " has a negative entry; hellinger space needs distributions");
        }
        X(i, j) = std::sqrt(X(i, j));
      }
    }
  }

  Rng rng(seed);
  LloydRun best;
  for (std::size_t r = 0; r < restarts; ++r) {
    LloydRun run = lloyd(X, plus_plus_seeds(X, k, rng), std::max<std::size_t>(1, max_iter));
    if (r == 0 || run.trace.back() < best.trace.back()) best = std::move(run);
  }

  ClusterResult out;
  out.algorithm = ClusterAlgorithm::KMeans;
  out.requested_k = k;
  out.space = space;
  out.seed = seed;
  out.restarts = restarts;
  out.labels = canonical_labels(best.assign);
  out.inertia = best.trace.back();
  out.inertia_trace = best.trace;
  out.centroids = Matrix(out.num_clusters(), X.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const auto from = best.centroids.row(static_cast<std::size_t>(best.assign[i]));
    std::copy(from.begin(), from.end(), out.centroids.row(static_cast<std::size_t>(out.labels[i])).begin());
  }
  return out;
}

// --------------------------------------------------------------------- hdbscan

std::vector<double> core_distances(const DistanceMatrix& dist, std::size_t min_samples) {
  const std::size_t n = dist.size();
  if (min_samples < 1 || min_samples > n) {
    throw Error(ErrorCode::InvalidConfig,
                "min_samples = " + std::to_string(min_samples) + " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<double> core(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = dist(i, j);
    row[i] = 0.0;
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(min_samples - 1), row.end());
    core[i] = row[min_samples - 1];
  }
  return core;
}

Matrix mutual_reachability(const DistanceMatrix& dist, std::size_t min_samples) {
  const auto core = core_distances(dist, min_samples);
  const std::size_t n = dist.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m(i, j) = std::max({core[i], core[j], dist(i, j)});
    }
  }
  return m;
}

std::vector<MstEdge> prim_mst(const Matrix& weights) {
  const std::size_t n = weights.rows();
  std::vector<MstEdge> edges;
  if (n == 0) return edges;
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, 0);
  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t added = 1; added < n; ++added) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && weights(current, v) < best[v]) {
        best[v] = weights(current, v);
        parent[v] = current;
      }
    }
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (next == n || best[v] < best[next])) next = v;
    }
    in_tree[next] = 1;
    edges.push_back({std::min(parent[next], next), std::max(parent[next], next), best[next]});
    current = next;
  }
  return edges;
}

namespace {

constexpr double kLambdaCap = 1e12;

double lambda_of(double distance) { return distance > 0.0 ? std::min(1.0 / distance, kLambdaCap) : kLambdaCap; }

struct Hierarchy {
  // Node ids: points 0..n-1, merges n..2n-2.
  std::vector<std::size_t> left, right, size;
  std::vector<double> height;
};

Hierarchy single_linkage(std::size_t n, std::vector<MstEdge> mst) {
  std::stable_sort(mst.begin(), mst.end(), [](const MstEdge& x, const MstEdge& y) { return x.weight < y.weight; });
  Hierarchy h;
  const std::size_t total = 2 * n - 1;
  h.left.assign(total, 0);
  h.right.assign(total, 0);
  h.size.assign(total, 1);
  h.height.assign(total, 0.0);
  std::vector<std::size_t> uf(total);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (std::size_t m = 0; m < mst.size(); ++m) {
    const std::size_t ra = find(mst[m].a);
    const std::size_t rb = find(mst[m].b);
    const std::size_t id = n + m;
    h.left[id] = std::min(ra, rb);
    h.right[id] = std::max(ra, rb);
    h.size[id] = h.size[ra] + h.size[rb];
    h.height[id] = mst[m].weight;
    uf[ra] = id;
    uf[rb] = id;
  }
  return h;
}

void collect_leaves(const Hierarchy& h, std::size_t n, std::size_t node, std::vector<std::size_t>& out) {
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    if (x < n) {
      out.push_back(x);
    } else {
      stack.push_back(h.right[x]);
      stack.push_back(h.left[x]);
    }
  }
}

std::vector<CondensedEdge> condense(const Hierarchy& h, std::size_t n, std::size_t min_cluster_size) {
  std::vector<CondensedEdge> edges;
  const std::size_t root = 2 * n - 2;
  std::vector<std::size_t> relabel(2 * n - 1, 0);
  relabel[root] = n;
  std::size_t next_label = n + 1;
  std::deque<std::size_t> queue{root};
  while (!queue.empty()) {
    const std::size_t node = queue.front();
    queue.pop_front();
    const std::size_t l = h.left[node];
    const std::size_t r = h.right[node];
    const double lam = lambda_of(h.height[node]);
    const bool big_l = h.size[l] >= min_cluster_size;
    const bool big_r = h.size[r] >= min_cluster_size;
    auto fall_out = [&](std::size_t child) {
      std::vector<std::size_t> leaves;
      collect_leaves(h, n, child, leaves);
      std::sort(leaves.begin(), leaves.end());
      for (std::size_t p : leaves) edges.push_back({relabel[node], p, lam, 1});
    };
    auto continue_as = [&](std::size_t child, std::size_t label) {
      relabel[child] = label;
      if (child >= n) queue.push_back(child);
    };
    if (big_l && big_r) {
      for (std::size_t child : {l, r}) {
        const std::size_t label = next_label++;
        edges.push_back({relabel[node], label, lam, h.size[child]});
        continue_as(child, label);
      }
    } else if (!big_l && !big_r) {
      fall_out(l);
      fall_out(r);
    } else if (!big_l) {
      fall_out(l);
      continue_as(r, relabel[node]);
    } else {
      fall_out(r);
      continue_as(l, relabel[node]);
    }
  }
  return edges;
}

}  // namespace

ClusterResult hdbscan(const DistanceMatrix& dist, std::size_t min_cluster_size, std::size_t min_samples) {
  const std::size_t n = dist.size();
  if (min_cluster_size < 2) throw Error(ErrorCode::InvalidConfig, "min_cluster_size must be at least 2");
  if (min_samples < 1) throw Error(ErrorCode::InvalidConfig, "min_samples must be at least 1");
  if (n < min_cluster_size) {
    throw Error(ErrorCode::TooFewPoints,
                std::to_string(n) + " points for min_cluster_size " + std::to_string(min_cluster_size));
  }
  if (min_samples > n) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(n) + " points for min_samples " + std::to_string(min_samples));
  }

  ClusterResult out;
  out.algorithm = ClusterAlgorithm::Hdbscan;
  out.min_cluster_size = min_cluster_size;
  out.min_samples = min_samples;
  out.labels.assign(n, -1);
  if (n < 2) return out;

  const Hierarchy h = single_linkage(n, prim_mst(mutual_reachability(dist, min_samples)));
  out.condensed_tree = condense(h, n, min_cluster_size);

  std::size_t num_nodes = n + 1;
  for (const auto& e : out.condensed_tree) num_nodes = std::max(num_nodes, e.child + 1);
  std::vector<double> birth(num_nodes, 0.0);
  std::vector<std::size_t> parent(num_nodes, n);
  std::vector<std::vector<std::size_t>> children(num_nodes);
  for (const auto& e : out.condensed_tree) {
    parent[e.child] = e.parent;
    if (e.child >= n) {
      birth[e.child] = e.lambda;
      children[e.parent].push_back(e.child);
    }
  }
  std::vector<double> stability(num_nodes, 0.0);
  for (const auto& e : out.condensed_tree) {
    stability[e.parent] += (e.lambda - birth[e.parent]) * static_cast<double>(e.child_size);
  }

  std::vector<char> selected(num_nodes, 0);
  std::vector<double> subtree(num_nodes, 0.0);
  for (std::size_t c = num_nodes - 1; c > n; --c) {
    double child_sum = 0.0;
    for (std::size_t ch : children[c]) child_sum += subtree[ch];
    if (!children[c].empty() && child_sum > stability[c]) {
      subtree[c] = child_sum;
    } else {
      subtree[c] = stability[c];
      selected[c] = 1;
      std::vector<std::size_t> stack(children[c]);
      while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        selected[x] = 0;
        stack.insert(stack.end(), children[x].begin(), children[x].end());
      }
    }
  }

  std::vector<int> raw(n, -1);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t c = parent[p];
    while (c != n && !selected[c]) c = parent[c];
    if (c != n) raw[p] = static_cast<int>(c);
  }
  out.labels = canonical_labels(raw);
  out.stabilities.assign(out.num_clusters(), 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    if (out.labels[p] >= 0) out.stabilities[static_cast<std::size_t>(out.labels[p])] = stability[static_cast<std::size_t>(raw[p])];
  }
  return out;
}

}  // namespace doclens::analysis
