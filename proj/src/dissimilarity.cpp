#include "dowker/dissimilarity.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace dowker {

namespace {

std::vector<std::string> default_ids(std::size_t count) {
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) ids.push_back(std::to_string(i));
  return ids;
}

void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw InputError(std::string("duplicate ") + what + " id '" + id + "'");
  }
}

std::string at(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

DowkerDissimilarity::DowkerDissimilarity(std::vector<std::string> landmark_ids,
                                         std::vector<std::string> witness_ids,
                                         std::vector<ExtReal> values)
    : landmark_ids_(std::move(landmark_ids)),
      witness_ids_(std::move(witness_ids)),
      values_(std::move(values)) {
  if (landmark_ids_.empty() || witness_ids_.empty()) {
    throw InputError("dissimilarity needs at least one landmark and one witness");
  }
  if (values_.size() != landmark_ids_.size() * witness_ids_.size()) {
    throw InputError("dissimilarity grid has " + std::to_string(values_.size()) + " entries, expected " +
                     std::to_string(landmark_ids_.size()) + "x" + std::to_string(witness_ids_.size()));
  }
  require_unique(landmark_ids_, "landmark");
  require_unique(witness_ids_, "witness");
}

DowkerDissimilarity::DowkerDissimilarity(std::size_t n, std::size_t m, std::vector<ExtReal> values)
    : DowkerDissimilarity(default_ids(n), default_ids(m), std::move(values)) {}

DowkerDissimilarity from_distance_matrix(const std::vector<std::vector<ExtReal>>& matrix) {
  const std::size_t n = matrix.size();
  if (n == 0) throw InputError("distance matrix is empty");
  std::vector<ExtReal> values;
  values.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw InputError("distance matrix is not square: row " + std::to_string(i) + " has " +
                       std::to_string(matrix[i].size()) + " entries, expected " + std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != ExtReal()) throw InputError("nonzero diagonal at " + at(i, i));
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix[i][j] != matrix[j][i]) throw InputError("asymmetric at " + at(std::min(i, j), std::max(i, j)));
      values.push_back(matrix[i][j]);
    }
  }
  return DowkerDissimilarity(n, n, std::move(values));
}

DowkerDissimilarity from_point_cloud(const std::vector<std::vector<double>>& points,
                                     const std::optional<std::vector<std::size_t>>& landmarks) {
  if (points.empty()) throw InputError("point cloud is empty");
  const std::size_t dim = points.front().size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) {
      throw InputError("ragged point cloud: point " + std::to_string(i) + " has " +
                       std::to_string(points[i].size()) + " coordinates, expected " + std::to_string(dim));
    }
    for (double x : points[i]) {
      if (!std::isfinite(x)) throw InputError("non-finite coordinate in point " + std::to_string(i));
    }
  }
  std::vector<std::size_t> selected;
  if (landmarks) {
    selected = *landmarks;
    if (selected.empty()) throw InputError("landmark set is empty");
    for (std::size_t l : selected) {
      if (l >= points.size()) throw InputError("landmark index " + std::to_string(l) + " out of range");
    }
  } else {
    selected.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) selected[i] = i;
  }

  std::vector<std::string> landmark_ids;
  for (std::size_t l : selected) landmark_ids.push_back(std::to_string(l));
  std::vector<ExtReal> values;
  values.reserve(selected.size() * points.size());
  for (std::size_t l : selected) {
    for (const auto& w : points) {
      double sum = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = points[l][k] - w[k];
        sum += d * d;
      }
      values.push_back(ExtReal(std::sqrt(sum)));
    }
  }
  return DowkerDissimilarity(std::move(landmark_ids), default_ids(points.size()), std::move(values));
}

std::vector<std::size_t> SampleOrder::ranks() const {
  std::vector<std::size_t> rank(permutation.size());
  for (std::size_t k = 0; k < permutation.size(); ++k) rank[permutation[k]] = k;
  return rank;
}

SampleOrder farthest_point_sample(const DowkerDissimilarity& lambda_ll, std::size_t seed) {
  if (!lambda_ll.is_square()) throw InputError("farthest point sample needs a square dissimilarity");
  const std::size_t n = lambda_ll.landmark_count();
  if (seed >= n) throw InputError("seed landmark " + std::to_string(seed) + " out of range");

  SampleOrder order;
  order.insertion_radius.assign(n, kInfinity);
  std::vector<bool> chosen(n, false);
  // reach[k] = inf over the chosen prefix of Lambda(l', k)
  std::vector<ExtReal> reach(n, kInfinity);
  std::size_t next = seed;
  for (std::size_t step = 0; step < n; ++step) {
    chosen[next] = true;
    order.permutation.push_back(next);
    order.insertion_radius[next] = step == 0 ? kInfinity : reach[next];
    for (std::size_t k = 0; k < n; ++k) reach[k] = min(reach[k], lambda_ll(next, k));

    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < n; ++k) {
      if (chosen[k]) continue;
      if (!best || reach[k] > reach[*best]) best = k;
    }
    if (best) next = *best;
  }
  return order;
}

DowkerDissimilarity cover_dissimilarity(const DowkerDissimilarity& lambda,
                                        const TranslationFunction& alpha, std::size_t base) {
  const std::size_t n = lambda.landmark_count();
  const std::size_t m = lambda.witness_count();
  if (base >= n) throw InputError("base landmark " + std::to_string(base) + " out of range");

  std::vector<ExtReal> translated(lambda.values().size());
  for (std::size_t i = 0; i < translated.size(); ++i) translated[i] = alpha(lambda.values()[i]);

  std::vector<ExtReal> values(n * n);
  for (std::size_t lp = 0; lp < n; ++lp) {
    for (std::size_t l = 0; l < n; ++l) {
      ExtReal v;
      if (l == lp) {
        v = ExtReal();
      } else if (lp == base) {
        v = kInfinity;
      } else {
        for (std::size_t w = 0; w < m; ++w) {
          if (translated[l * m + w] <= lambda(lp, w)) v = max(v, lambda(lp, w));
        }
      }
      values[lp * n + l] = v;
    }
  }
  return DowkerDissimilarity(lambda.landmark_ids(), lambda.landmark_ids(), std::move(values));
}

TruncationFunction alpha_insertion_radius(const DowkerDissimilarity& cover, const SampleOrder& order) {
  if (!cover.is_square()) throw InputError("cover dissimilarity must be square");
  const std::size_t n = cover.landmark_count();
  if (order.permutation.size() != n) {
    throw InputError("sample order has " + std::to_string(order.permutation.size()) +
                     " landmarks, cover has " + std::to_string(n));
  }
  TruncationFunction result{std::vector<ExtReal>(n, kInfinity)};
  // reach[k] = inf over the processed prefix of cover(l', k)
  std::vector<ExtReal> reach(n, kInfinity);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t l = order.permutation[pos];
    if (pos > 0) {
      ExtReal sup;
      for (std::size_t q = pos; q < n; ++q) sup = max(sup, reach[order.permutation[q]]);
      result.bound[l] = sup;
    }
    for (std::size_t k = 0; k < n; ++k) reach[k] = min(reach[k], cover(l, k));
  }
  return result;
}

TruncationFunction metric_truncation(const SampleOrder& order, double c) {
  if (!std::isfinite(c) || c <= 1.0) throw InputError("metric truncation needs c > 1");
  TruncationFunction result;
  result.bound.reserve(order.insertion_radius.size());
  for (ExtReal radius : order.insertion_radius) {
    result.bound.push_back(radius.is_infinite() ? kInfinity : ExtReal(c * radius.value() / (c - 1.0)));
  }
  return result;
}

DowkerDissimilarity truncate(const DowkerDissimilarity& lambda, const TruncationFunction& t) {
  const std::size_t n = lambda.landmark_count();
  const std::size_t m = lambda.witness_count();
  if (t.bound.size() != n) throw InputError("truncation function does not cover every landmark");
  std::vector<ExtReal> values(lambda.values());
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t w = 0; w < m; ++w) {
      if (!(values[l * m + w] < t.bound[l])) values[l * m + w] = kInfinity;
    }
  }
  return DowkerDissimilarity(lambda.landmark_ids(), lambda.witness_ids(), std::move(values));
}

std::vector<ExtReal> truncation_grid(const DowkerDissimilarity& lambda) {
  std::set<ExtReal> grid;
  for (ExtReal v : lambda.values()) {
    if (v.is_finite()) {
      grid.insert(v);
      grid.insert(next_above(v));
    }
  }
  grid.insert(kInfinity);
  return {grid.begin(), grid.end()};
}

std::optional<TruncationViolation> validate_truncation(const DowkerDissimilarity& lambda,
                                                       const TruncationFunction& t,
                                                       const TranslationFunction& alpha,
                                                       const std::vector<ExtReal>& grid) {
  const std::size_t n = lambda.landmark_count();
  const std::size_t m = lambda.witness_count();
  if (t.bound.size() != n) throw InputError("truncation function does not cover every landmark");
  if (grid.empty()) throw InputError("threshold grid is empty");

  std::vector<std::size_t> seen;
  for (ExtReal threshold : grid) {
    const ExtReal reach = alpha(threshold);
    for (std::size_t l = 0; l < n; ++l) {
      seen.clear();
      for (std::size_t w = 0; w < m; ++w) {
        if (lambda(l, w) < threshold) seen.push_back(w);
      }
      bool found = false;
      for (std::size_t lp = 0; lp < n && !found; ++lp) {
        found = std::all_of(seen.begin(), seen.end(), [&](std::size_t w) {
          return lambda(lp, w) < reach && lambda(lp, w) < t.bound[lp];
        });
      }
      if (!found) return TruncationViolation{threshold, l};
    }
  }
  return std::nullopt;
}

}  // namespace dowker
