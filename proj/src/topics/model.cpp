#include "doclens/topics/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "doclens/error.hpp"

namespace doclens::topics {

using nlohmann::json;

std::string_view to_string(TopicMethod method) noexcept {
  return method == TopicMethod::LDA ? "lda" : "nmf";
}

TopicMethod method_from_string(std::string_view name) {
  if (name == "lda" || name == "LDA") return TopicMethod::LDA;
  if (name == "nmf" || name == "NMF") return TopicMethod::NMF;
  throw Error(ErrorCode::SchemaViolation, "method: unknown topic method '" + std::string(name) + "'");
}

namespace {

void check_stochastic(const Matrix& m, const char* name) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (double x : m.row(r)) {
      if (!(x >= 0.0)) {
        throw Error(ErrorCode::SchemaViolation, std::string(name) + " row " + std::to_string(r) + " has a negative entry");
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorCode::SchemaViolation, std::string(name) + " row " + std::to_string(r) + " sums to " + std::to_string(sum));
    }
  }
}

Matrix matrix_from(const json& j, const char* field) {
  if (!j.is_array()) throw Error(ErrorCode::SchemaViolation, std::string(field) + ": expected array of rows");
  std::vector<std::vector<double>> rows;
  try {
    rows = j.get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string(field) + ": " + e.what());
  }
  try {
    return Matrix::from_rows(rows);
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string(field) + ": " + e.what());
  }
}

}  // namespace

void check_invariants(const TopicModel& m) {
  if (m.num_topics < 1) throw Error(ErrorCode::SchemaViolation, "K must be >= 1");
  if (m.phi.rows() != m.num_topics || m.phi.cols() != m.vocab.size()) {
    throw Error(ErrorCode::SchemaViolation, "phi must be K x V");
  }
  if (m.theta.rows() != m.doc_ids.size() || m.theta.cols() != m.num_topics) {
    throw Error(ErrorCode::SchemaViolation, "theta must be D x K");
  }
  if (m.labels.size() != m.num_topics) throw Error(ErrorCode::SchemaViolation, "labels must have K entries");
  if (m.doc_lengths.size() != m.doc_ids.size()) throw Error(ErrorCode::SchemaViolation, "doc_lengths must have D entries");
  check_stochastic(m.phi, "phi");
  check_stochastic(m.theta, "theta");
}

json to_json(const TopicModel& m) {
  json j;
  j["version"] = 1;
  j["method"] = std::string(to_string(m.method));
  j["K"] = m.num_topics;
  j["alpha"] = m.alpha;
  j["beta"] = m.beta;
  j["seed"] = m.seed;
  j["coherence"] = m.coherence;
  j["labels"] = m.labels;
  j["phi"] = m.phi.to_rows();
  j["theta"] = m.theta.to_rows();
  j["vocab"] = m.vocab;
  j["doc_ids"] = m.doc_ids;
  j["doc_lengths"] = m.doc_lengths;
  j["trace"] = m.trace;
  return j;
}

TopicModel model_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaViolation, "model: expected object");
  auto field = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::SchemaViolation, std::string("model.") + key + ": missing");
    return *it;
  };
  if (field("version") != 1) throw Error(ErrorCode::VersionMismatch, "model.version: expected 1");
  TopicModel m;
  try {
    m.method = method_from_string(field("method").get<std::string>());
    m.num_topics = field("K").get<std::size_t>();
    m.alpha = field("alpha").get<double>();
    m.beta = field("beta").get<double>();
    m.seed = field("seed").get<std::uint64_t>();
    m.coherence = field("coherence").get<double>();
    m.labels = field("labels").get<std::vector<std::string>>();
    m.vocab = field("vocab").get<std::vector<std::string>>();
    m.doc_ids = field("doc_ids").get<std::vector<std::string>>();
    m.doc_lengths = j.value("doc_lengths", std::vector<double>(m.doc_ids.size(), 1.0));
    m.trace = j.value("trace", std::vector<double>{});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("model: ") + e.what());
  }
  m.phi = matrix_from(field("phi"), "model.phi");
  m.theta = matrix_from(field("theta"), "model.theta");
  check_invariants(m);
  return m;
}

void save_model(const TopicModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << to_json(model).dump(1) << '\n';
}

TopicModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

std::vector<std::size_t> top_indices(std::span<const double> values, std::size_t n) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  n = std::min(n, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return a < b;
                    });
  idx.resize(n);
  return idx;
}

void normalize_row(std::span<double> row) {
  double sum = 0.0;
  for (double x : row) sum += x;
  if (!(sum > 0.0)) {
    for (double& x : row) x = 1.0 / static_cast<double>(row.size());
    return;
  }
  for (double& x : row) x /= sum;
}

}  // namespace doclens::topics
