#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dowker/dissimilarity.hpp"
#include "dowker/ext_real.hpp"

namespace dowker {

using Vertex = std::uint32_t;

/// Sorted, duplicate-free, non-empty vertex list.
class Simplex {
 public:
  Simplex() = default;
  /// Sorts the vertices; throws InputError on duplicates or an empty list.
  explicit Simplex(std::vector<Vertex> vertices);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  int dimension() const { return static_cast<int>(vertices_.size()) - 1; }
  std::size_t size() const { return vertices_.size(); }

  /// Codimension-one faces, in order of the removed vertex.
  std::vector<Simplex> facets() const;

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend auto operator<=>(const Simplex&, const Simplex&) = default;

 private:
  std::vector<Vertex> vertices_;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept;
};

struct FilteredSimplex {
  Simplex simplex;
  ExtReal value;
  friend bool operator==(const FilteredSimplex&, const FilteredSimplex&) = default;
};

/// Order used everywhere a complex is materialized: value, dimension, then
/// lexicographic vertices.
bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b);

/// Simplices of dimension <= dim_cap with finite filtration values.
struct FilteredComplex {
  std::vector<FilteredSimplex> simplices;
  int dim_cap = 0;

  /// Number of listed simplices of the given dimension.
  std::size_t count(int dimension) const;
};

/// phi(l) per landmark; a parent function when every orbit ends in a fixed point.
struct ParentFunction {
  std::vector<std::size_t> parent;
};

struct RestrictionFunction {
  std::vector<ExtReal> bound;
};

/// Parent and restriction function with the derived slope points.
struct SparsificationPlan {
  ParentFunction phi;
  RestrictionFunction r;
  std::vector<bool> slope;
};

/// slope(l) iff R(l) < R(l') for every l' with phi(l') = l.
SparsificationPlan make_plan(ParentFunction phi, RestrictionFunction r);

/// Plan with phi = identity and R = inf; its sparse nerve is the full nerve.
SparsificationPlan trivial_plan(std::size_t n);

/// min over witnesses of the max over sigma of Lambda(l, w).
ExtReal nerve_value(const DowkerDissimilarity& lambda, std::span<const Vertex> sigma);

/// As nerve_value, restricted to witnesses w with Lambda(l, w) <= R(l') for
/// all l, l' in sigma and Lambda(l, w) < R(l) at slope points of sigma.
ExtReal sparse_nerve_value(const DowkerDissimilarity& lambda, const SparsificationPlan& plan,
                           std::span<const Vertex> sigma);

using SimplexValueFn = std::function<ExtReal(std::span<const Vertex>)>;

inline constexpr std::size_t kDefaultSimplexBudget = 20'000'000;

/// Upper bound on the simplex count: sum of C(n, k) for k = 1 .. dim_cap + 1,
/// saturating at SIZE_MAX.
std::size_t simplex_count_bound(std::size_t n, int dim_cap);

/// Depth-first enumeration of all finite-valued simplices up to dim_cap.
/// Cofaces of an inf-valued simplex are not visited, which is valid for
/// any value function that is monotone under taking cofaces. Throws
/// BudgetExceeded once more than `budget` simplices are produced.
FilteredComplex build_filtered_complex(const SimplexValueFn& value_fn, std::size_t n, int dim_cap,
                                       std::size_t budget = kDefaultSimplexBudget);

FilteredComplex build_nerve(const DowkerDissimilarity& lambda, int dim_cap,
                            std::size_t budget = kDefaultSimplexBudget);
FilteredComplex build_sparse_nerve(const DowkerDissimilarity& lambda, const SparsificationPlan& plan,
                                   int dim_cap, std::size_t budget = kDefaultSimplexBudget);

bool is_parent_function(const ParentFunction& phi);

/// rho(l, l') = sup{ Lambda(l', w) : Lambda(l, w) < Lambda(l', w) }, 0 if empty.
ExtReal witness_overshoot(const DowkerDissimilarity& lambda, std::size_t l, std::size_t lp);

/// The pointwise minimal restriction function relative to phi.
RestrictionFunction canonical_restriction(const DowkerDissimilarity& lambda, const ParentFunction& phi);

struct BuiltParent {
  ParentFunction phi;
  std::vector<std::size_t> order;  // order[k] = k-th landmark; order[0] is the root
};

/// Parent function from the overshoot ranking: landmarks are ordered by
/// decreasing R0(l) = min_{l' != l} rho(l, l'), and each one attaches to the
/// earliest predecessor attaining R0 (or, failing that, the minimal rho over
/// predecessors, or the root).
BuiltParent build_parent_function(const DowkerDissimilarity& lambda);

struct ParentRestriction {
  ParentFunction phi;
  RestrictionFunction r;
};

/// tau(l) = sup of the finite entries of row l (0 if none), inf at `base`;
/// phi(l) is the tau-smallest landmark with larger tau (ties by index), or
/// `base`; R(l) = tau(phi(l)).
ParentRestriction parent_restriction(const DowkerDissimilarity& lambda, std::size_t base);

struct SheehyRestriction {
  ParentFunction phi;
  RestrictionFunction r;
  DowkerDissimilarity truncated;
  std::vector<ExtReal> radius;        // lambda(l) per landmark
  std::vector<std::string> warnings;  // precondition violations found
};

/// Sheehy-style sparsification for alpha(t) = c t written as id + beta with
/// beta(t) = (c - 1) t. Returns the truncation Gamma'(l, w) = Lambda(l, w)
/// when Lambda(l, w) < alpha(beta_inv(lambda(l))), the restriction
/// S(l) = alpha(alpha(beta_inv(lambda(l)))) and the Sheehy parent function.
SheehyRestriction sheehy_restriction(const DowkerDissimilarity& lambda, const SampleOrder& order, double c);

struct RestrictionViolation {
  std::size_t landmark;
  std::optional<std::size_t> witness;
  int condition;  // 0: not a parent function, 1..3: restriction conditions
  std::string message;
};

/// Exhaustive check of the three restriction-function conditions.
std::optional<RestrictionViolation> validate_restriction(const DowkerDissimilarity& lambda,
                                                         const ParentFunction& phi,
                                                         const RestrictionFunction& r);

}  // namespace dowker
