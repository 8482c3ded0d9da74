#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dowker/ext_real.hpp"
#include "dowker/translation.hpp"

namespace dowker {

/// A function Lambda: L x W -> [0, inf] on finite landmark and witness
/// sets, stored as a dense row-major grid (row = landmark).
class DowkerDissimilarity {
 public:
  /// Ids default to "0", "1", ... when empty. Throws InputError if the
  /// grid is not n x m, n or m is zero, or ids repeat.
  DowkerDissimilarity(std::vector<std::string> landmark_ids, std::vector<std::string> witness_ids,
                      std::vector<ExtReal> values);
  DowkerDissimilarity(std::size_t n, std::size_t m, std::vector<ExtReal> values);

  std::size_t landmark_count() const { return landmark_ids_.size(); }
  std::size_t witness_count() const { return witness_ids_.size(); }
  bool is_square() const { return landmark_count() == witness_count(); }

  const std::vector<std::string>& landmark_ids() const { return landmark_ids_; }
  const std::vector<std::string>& witness_ids() const { return witness_ids_; }

  ExtReal operator()(std::size_t l, std::size_t w) const { return values_[l * witness_count() + w]; }
  std::span<const ExtReal> row(std::size_t l) const {
    return {values_.data() + l * witness_count(), witness_count()};
  }
  const std::vector<ExtReal>& values() const { return values_; }

  friend bool operator==(const DowkerDissimilarity&, const DowkerDissimilarity&) = default;

 private:
  std::vector<std::string> landmark_ids_;
  std::vector<std::string> witness_ids_;
  std::vector<ExtReal> values_;
};

/// Square, zero diagonal, symmetric input; L = W.
DowkerDissimilarity from_distance_matrix(const std::vector<std::vector<ExtReal>>& matrix);

/// Euclidean distances from the selected landmarks (default: all points)
/// to every point.
DowkerDissimilarity from_point_cloud(const std::vector<std::vector<double>>& points,
                                     const std::optional<std::vector<std::size_t>>& landmarks = {});

/// Total order on landmarks produced by greedy max-min sampling.
struct SampleOrder {
  std::vector<std::size_t> permutation;  // permutation[k] = k-th landmark
  std::vector<ExtReal> insertion_radius;  // indexed by landmark

  std::size_t first() const { return permutation.front(); }
  /// rank[l] = position of landmark l in the permutation.
  std::vector<std::size_t> ranks() const;
};

/// Per-landmark bound T(l).
struct TruncationFunction {
  std::vector<ExtReal> bound;
};

/// Farthest point sample of a square dissimilarity starting at `seed`;
/// ties go to the smallest landmark index.
SampleOrder farthest_point_sample(const DowkerDissimilarity& lambda_ll, std::size_t seed);

/// Lambda^alpha(l', l): 0 on the diagonal, inf on the base row, otherwise
/// sup({ Lambda(l', w) : alpha(Lambda(l, w)) <= Lambda(l', w) } u {0}).
DowkerDissimilarity cover_dissimilarity(const DowkerDissimilarity& lambda,
                                        const TranslationFunction& alpha, std::size_t base);

/// lambda^alpha(l) = sup_{k >= l} inf_{l' < l} cover(l', k), inf at the first landmark.
TruncationFunction alpha_insertion_radius(const DowkerDissimilarity& cover, const SampleOrder& order);

/// T(l) = c lambda(l) / (c - 1) for c > 1.
TruncationFunction metric_truncation(const SampleOrder& order, double c);

/// Entries with Lambda(l, w) >= T(l) become inf.
DowkerDissimilarity truncate(const DowkerDissimilarity& lambda, const TruncationFunction& t);

struct TruncationViolation {
  ExtReal threshold;
  std::size_t landmark;
};

/// Thresholds sufficient to decide the truncation condition exactly: every
/// attained finite value, the next representable value above each (where
/// the relation Lambda_t changes and the condition is tightest), and inf.
std::vector<ExtReal> truncation_grid(const DowkerDissimilarity& lambda);

/// Checks that for every (t, l) in grid x L some l' satisfies
/// Lambda(l, w) < t  =>  Lambda(l', w) < alpha(t) and Lambda(l', w) < T(l').
/// Returns the first failing pair, or nullopt on success.
std::optional<TruncationViolation> validate_truncation(const DowkerDissimilarity& lambda,
                                                       const TruncationFunction& t,
                                                       const TranslationFunction& alpha,
                                                       const std::vector<ExtReal>& grid);

}  // namespace dowker
