#include "analysis_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace doclens::testing {

using Big = boost::multiprecision::cpp_dec_float_50;

double hellinger_hp(const std::vector<double>& p, const std::vector<double>& q) {
  Big s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Big d = boost::multiprecision::sqrt(Big(p[i])) - boost::multiprecision::sqrt(Big(q[i]));
    s += d * d;
  }
  return static_cast<double>(boost::multiprecision::sqrt(s / 2));
}

double jensen_shannon_hp(const std::vector<double>& p, const std::vector<double>& q) {
  Big s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Big m = (Big(p[i]) + Big(q[i])) / 2;
    if (p[i] > 0) s += Big(p[i]) * boost::multiprecision::log(Big(p[i]) / m);
    if (q[i] > 0) s += Big(q[i]) * boost::multiprecision::log(Big(q[i]) / m);
  }
  return static_cast<double>(s / 2);
}

std::vector<double> random_distribution(Rng& rng, std::size_t k) {
  std::vector<double> v(k);
  double sum = 0.0;
  for (auto& x : v) {
    x = rng.uniform() < 0.15 ? 0.0 : -std::log(1.0 - rng.uniform());
    sum += x;
  }
  if (sum == 0.0) {
    v[rng.below(k)] = 1.0;
    return v;
  }
  for (auto& x : v) x /= sum;
  return v;
}

BruteDendrogram brute_agglomerative(const Matrix& dist, analysis::Linkage linkage, std::size_t k) {
  const std::size_t n = dist.rows();
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    clusters.push_back({i});
    ids.push_back(i);
  }
  auto linkage_distance = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    for (std::size_t x : a) {
      for (std::size_t y : b) {
        lo = std::min(lo, dist(x, y));
        hi = std::max(hi, dist(x, y));
        sum += dist(x, y);
      }
    }
    switch (linkage) {
      case analysis::Linkage::Single: return lo;
      case analysis::Linkage::Complete: return hi;
      case analysis::Linkage::Average: return sum / static_cast<double>(a.size() * b.size());
    }
    return sum;
  };
  BruteDendrogram out;
  auto record = [&] {
    std::vector<int> raw(n);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      for (std::size_t p : clusters[c]) raw[p] = static_cast<int>(ids[c]);
    }
    out.labels = analysis::canonical_labels(raw);
  };
  if (k == n) record();
  std::size_t next_id = n;
  while (clusters.size() > 1) {
    // Candidate pairs ordered by (distance, smaller id, larger id).
    std::tuple<double, std::size_t, std::size_t> best{std::numeric_limits<double>::infinity(), 0, 0};
    std::size_t bx = 0, by = 0;
    for (std::size_t x = 0; x < clusters.size(); ++x) {
      for (std::size_t y = 0; y < clusters.size(); ++y) {
        if (x == y) continue;
        const auto cand = std::make_tuple(linkage_distance(clusters[x], clusters[y]), std::min(ids[x], ids[y]),
                                          std::max(ids[x], ids[y]));
        if (cand < best) {
          best = cand;
          bx = x;
          by = y;
        }
      }
    }
    out.heights.push_back(std::get<0>(best));
    auto merged = clusters[bx];
    merged.insert(merged.end(), clusters[by].begin(), clusters[by].end());
    for (std::size_t idx : {std::max(bx, by), std::min(bx, by)}) {
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(idx));
      ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    clusters.push_back(merged);
    ids.push_back(next_id++);
    if (clusters.size() == k) record();
  }
  return out;
}

double exhaustive_mst_weight(const Matrix& w) {
  const std::size_t n = w.rows();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() == n - 1) {
      std::vector<std::size_t> parent(n);
      std::iota(parent.begin(), parent.end(), 0);
      std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      double total = 0.0;
      for (std::size_t e : pick) {
        const auto [a, b] = edges[e];
        const std::size_t ra = find(a), rb = find(b);
        if (ra == rb) return;
        parent[ra] = rb;
        total += w(a, b);
      }
      best = std::min(best, total);
      return;
    }
    for (std::size_t e = start; e < edges.size(); ++e) {
      pick.push_back(e);
      rec(e + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

namespace {

struct WalkCluster {
  std::vector<std::size_t> members;
  double stability = 0.0;
  std::vector<std::size_t> children;
};

std::vector<std::vector<std::size_t>> components(const std::vector<std::size_t>& set, const Matrix& mr,
                                                 double below) {
  std::vector<std::vector<std::size_t>> out;
  std::set<std::size_t> left(set.begin(), set.end());
  while (!left.empty()) {
    std::vector<std::size_t> comp{*left.begin()};
    left.erase(left.begin());
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (auto it = left.begin(); it != left.end();) {
        if (mr(comp[head], *it) < below) {
          comp.push_back(*it);
          it = left.erase(it);
        } else {
          ++it;
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(comp);
  }
  return out;
}

double lambda_of(double d) { return d > 0.0 ? std::min(1.0 / d, 1e12) : 1e12; }

}  // namespace

std::vector<int> hdbscan_walk(const Matrix& dist, std::size_t mcs, std::size_t min_samples) {
  const std::size_t n = dist.rows();
  std::vector<double> core(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(dist.row(i).begin(), dist.row(i).end());
    row[i] = 0.0;
    std::sort(row.begin(), row.end());
    core[i] = row[min_samples - 1];
  }
  Matrix mr(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) mr(i, j) = i == j ? 0.0 : std::max({core[i], core[j], dist(i, j)});
  }

  std::vector<WalkCluster> clusters;
  std::function<std::size_t(std::vector<std::size_t>, double)> walk = [&](std::vector<std::size_t> set,
                                                                         double birth) {
    const std::size_t id = clusters.size();
    clusters.push_back({set, 0.0, {}});
    std::vector<std::size_t> live = set;
    while (live.size() > 1) {
      std::set<double> levels;
      for (std::size_t a : live) {
        for (std::size_t b : live) {
          if (a < b) levels.insert(mr(a, b));
        }
      }
      double eps = 0.0;
      for (double lv : levels) {
        if (components(live, mr, std::nextafter(lv, std::numeric_limits<double>::infinity())).size() == 1) {
          eps = lv;
          break;
        }
      }
      const double lam = lambda_of(eps);
      std::vector<std::vector<std::size_t>> big;
      for (auto& comp : components(live, mr, eps)) {
        if (comp.size() >= mcs) {
          big.push_back(comp);
        } else {
          clusters[id].stability += (lam - birth) * static_cast<double>(comp.size());
        }
      }
      if (big.size() >= 2) {
        for (auto& comp : big) {
          clusters[id].stability += (lam - birth) * static_cast<double>(comp.size());
          const std::size_t child = walk(comp, lam);
          clusters[id].children.push_back(child);
        }
        return id;
      }
      if (big.empty()) return id;
      live = big.front();
    }
    return id;
  };
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  walk(all, 0.0);

  std::function<std::pair<double, std::vector<std::size_t>>(std::size_t)> select = [&](std::size_t c) {
    double child_total = 0.0;
    std::vector<std::size_t> chosen;
    for (std::size_t ch : clusters[c].children) {
      auto [t, s] = select(ch);
      child_total += t;
      chosen.insert(chosen.end(), s.begin(), s.end());
    }
    if (c == 0) return std::make_pair(child_total, chosen);
    if (clusters[c].children.empty() || clusters[c].stability >= child_total) {
      return std::make_pair(clusters[c].stability, std::vector<std::size_t>{c});
    }
    return std::make_pair(child_total, chosen);
  };
  std::vector<int> raw(n, -1);
  for (std::size_t c : select(0).second) {
    for (std::size_t p : clusters[c].members) raw[p] = static_cast<int>(c);
  }
  return analysis::canonical_labels(raw);
}

double gauss_determinant(Matrix a) {
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

ManovaOracle manova_oracle(const Matrix& thetas, const std::vector<int>& labels) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) rows.push_back(i);
  }
  const std::size_t p = thetas.cols() - 1;
  const double N = static_cast<double>(rows.size());
  std::map<int, std::vector<double>> sums;
  std::map<int, double> counts;
  std::vector<double> grand(p, 0.0);
  for (std::size_t i : rows) {
    auto& s = sums[labels[i]];
    s.resize(p, 0.0);
    counts[labels[i]] += 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      s[j] += thetas(i, j);
      grand[j] += thetas(i, j) / N;
    }
  }
  Matrix W(p, p), T(p, p);
  for (std::size_t i : rows) {
    const auto& s = sums[labels[i]];
    const double c = counts[labels[i]];
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = 0; b < p; ++b) {
        W(a, b) += (thetas(i, a) - s[a] / c) * (thetas(i, b) - s[b] / c);
        T(a, b) += (thetas(i, a) - grand[a]) * (thetas(i, b) - grand[b]);
      }
    }
  }
  ManovaOracle o;
  o.lambda = gauss_determinant(W) / gauss_determinant(T);
  const double g = static_cast<double>(sums.size());
  const double pp = static_cast<double>(p);
  const double dh = g - 1.0;
  const double de = N - g;
  const double t = (pp * pp + dh * dh - 5.0) > 0.0
                       ? std::sqrt((pp * pp * dh * dh - 4.0) / (pp * pp + dh * dh - 5.0))
                       : 1.0;
  const double m = de + dh - (pp + dh + 1.0) / 2.0;
  o.df1 = pp * dh;
  o.df2 = m * t - pp * dh / 2.0 + 1.0;
  const double y = std::pow(o.lambda, 1.0 / t);
  o.f = (1.0 - y) / y * o.df2 / o.df1;
  return o;
}

Matrix planted_manova_fixture(std::uint64_t seed, std::size_t per_group, std::vector<int>& labels) {
  Rng rng(seed);
  const std::size_t n = 2 * per_group;
  Matrix th(n, 3);
  labels.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const bool second = i >= per_group;
    labels[i] = second ? 1 : 0;
    const double a = (second ? 0.6 : 0.2) + 0.01 * rng.normal();
    const double b = 0.2 + 0.01 * rng.normal();
    th(i, 0) = a;
    th(i, 1) = b;
    th(i, 2) = 1.0 - a - b;
  }
  return th;
}

Matrix six_point_fixture() {
  return Matrix::from_rows({
      {0.80, 0.15, 0.05},
      {0.75, 0.20, 0.05},
      {0.85, 0.05, 0.10},
      {0.10, 0.15, 0.75},
      {0.05, 0.10, 0.85},
      {0.15, 0.05, 0.80},
  });
}

}  // namespace doclens::testing
