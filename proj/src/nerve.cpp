#include "dowker/nerve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dowker/translation.hpp"

namespace dowker {

Simplex::Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InputError("simplex must have at least one vertex");
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
    throw InputError("simplex has a repeated vertex");
  }
}

std::vector<Simplex> Simplex::facets() const {
  std::vector<Simplex> out;
  if (vertices_.size() < 2) return out;
  out.reserve(vertices_.size());
  for (std::size_t skip = 0; skip < vertices_.size(); ++skip) {
    Simplex face;
    face.vertices_.reserve(vertices_.size() - 1);
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (i != skip) face.vertices_.push_back(vertices_[i]);
    }
    out.push_back(std::move(face));
  }
  return out;
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (Vertex v : s.vertices()) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.simplex.size() != b.simplex.size()) return a.simplex.size() < b.simplex.size();
  return a.simplex.vertices() < b.simplex.vertices();
}

std::size_t FilteredComplex::count(int dimension) const {
  return static_cast<std::size_t>(std::count_if(simplices.begin(), simplices.end(), [&](const auto& s) {
    return s.simplex.dimension() == dimension;
  }));
}

SparsificationPlan make_plan(ParentFunction phi, RestrictionFunction r) {
  const std::size_t n = phi.parent.size();
  if (r.bound.size() != n) throw InputError("parent and restriction functions differ in size");
  std::vector<bool> slope(n, true);
  for (std::size_t child = 0; child < n; ++child) {
    const std::size_t p = phi.parent[child];
    if (p >= n) throw InputError("parent of landmark " + std::to_string(child) + " out of range");
    if (!(r.bound[p] < r.bound[child])) slope[p] = false;
  }
  return SparsificationPlan{std::move(phi), std::move(r), std::move(slope)};
}

SparsificationPlan trivial_plan(std::size_t n) {
  ParentFunction phi;
  phi.parent.resize(n);
  for (std::size_t l = 0; l < n; ++l) phi.parent[l] = l;
  return make_plan(std::move(phi), RestrictionFunction{std::vector<ExtReal>(n, kInfinity)});
}

ExtReal nerve_value(const DowkerDissimilarity& lambda, std::span<const Vertex> sigma) {
  ExtReal best = kInfinity;
  for (std::size_t w = 0; w < lambda.witness_count(); ++w) {
    ExtReal worst;
    for (Vertex l : sigma) {
      worst = max(worst, lambda(l, w));
      if (!(worst < best)) break;
    }
    best = min(best, worst);
  }
  return best;
}

ExtReal sparse_nerve_value(const DowkerDissimilarity& lambda, const SparsificationPlan& plan,
                           std::span<const Vertex> sigma) {
  ExtReal cap = kInfinity;
  for (Vertex l : sigma) cap = min(cap, plan.r.bound[l]);

  ExtReal best = kInfinity;
  for (std::size_t w = 0; w < lambda.witness_count(); ++w) {
    ExtReal worst;
    bool admissible = true;
    for (Vertex l : sigma) {
      const ExtReal v = lambda(l, w);
      if (v > cap || (plan.slope[l] && !(v < plan.r.bound[l]))) {
        admissible = false;
        break;
      }
      worst = max(worst, v);
    }
    if (admissible) best = min(best, worst);
  }
  return best;
}

std::size_t simplex_count_bound(std::size_t n, int dim_cap) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t binom = 1;  // C(n, k)
  for (std::size_t k = 1; k <= static_cast<std::size_t>(dim_cap) + 1 && k <= n; ++k) {
    // C(n, k) = C(n, k-1) * (n - k + 1) / k, computed without overflow where possible
    const std::size_t num = n - k + 1;
    if (binom > kMax / num) return kMax;
    binom = binom * num / k;
    if (total > kMax - binom) return kMax;
    total += binom;
  }
  return total;
}

namespace {

class Enumerator {
 public:
  Enumerator(const SimplexValueFn& fn, std::size_t n, int dim_cap, std::size_t budget)
      : fn_(fn), n_(n), dim_cap_(dim_cap), budget_(budget) {}

  FilteredComplex run() {
    FilteredComplex complex;
    complex.dim_cap = dim_cap_;
    out_ = &complex.simplices;
    current_.reserve(static_cast<std::size_t>(dim_cap_) + 1);
    extend(0);
    std::sort(complex.simplices.begin(), complex.simplices.end(), filtration_less);
    return complex;
  }

 private:
  void extend(Vertex start) {
    for (Vertex v = start; v < n_; ++v) {
      current_.push_back(v);
      const ExtReal value = fn_(current_);
      if (value.is_finite()) {
        if (out_->size() >= budget_) {
          throw BudgetExceeded("simplex budget of " + std::to_string(budget_) +
                               " exceeded; up to " + std::to_string(simplex_count_bound(n_, dim_cap_)) +
                               " simplices possible for n=" + std::to_string(n_) +
                               ", dim_cap=" + std::to_string(dim_cap_));
        }
        out_->push_back({Simplex(current_), value});
        if (static_cast<int>(current_.size()) <= dim_cap_) extend(v + 1);
      }
      current_.pop_back();
    }
  }

  const SimplexValueFn& fn_;
  std::size_t n_;
  int dim_cap_;
  std::size_t budget_;
  std::vector<Vertex> current_;
  std::vector<FilteredSimplex>* out_ = nullptr;
};

}  // namespace

FilteredComplex build_filtered_complex(const SimplexValueFn& value_fn, std::size_t n, int dim_cap,
                                       std::size_t budget) {
  if (dim_cap < 0) throw InputError("dim_cap must be non-negative");
  if (n > std::numeric_limits<Vertex>::max()) throw InputError("too many landmarks");
  return Enumerator(value_fn, n, dim_cap, budget).run();
}

FilteredComplex build_nerve(const DowkerDissimilarity& lambda, int dim_cap, std::size_t budget) {
  return build_filtered_complex(
      [&](std::span<const Vertex> sigma) { return nerve_value(lambda, sigma); }, lambda.landmark_count(),
      dim_cap, budget);
}

FilteredComplex build_sparse_nerve(const DowkerDissimilarity& lambda, const SparsificationPlan& plan,
                                   int dim_cap, std::size_t budget) {
  if (plan.r.bound.size() != lambda.landmark_count()) {
    throw InputError("sparsification plan does not match the landmark set");
  }
  return build_filtered_complex(
      [&](std::span<const Vertex> sigma) { return sparse_nerve_value(lambda, plan, sigma); },
      lambda.landmark_count(), dim_cap, budget);
}

bool is_parent_function(const ParentFunction& phi) {
  const std::size_t n = phi.parent.size();
  // state: 0 unknown, 1 on the current walk, 2 reaches a fixed point
  std::vector<char> state(n, 0);
  std::vector<std::size_t> walk;
  for (std::size_t start = 0; start < n; ++start) {
    walk.clear();
    std::size_t l = start;
    while (true) {
      if (l >= n) return false;
      if (state[l] == 2) break;
      if (state[l] == 1) return false;
      state[l] = 1;
      walk.push_back(l);
      if (phi.parent[l] == l) break;
      l = phi.parent[l];
    }
    for (std::size_t v : walk) state[v] = 2;
  }
  return true;
}

ExtReal witness_overshoot(const DowkerDissimilarity& lambda, std::size_t l, std::size_t lp) {
  ExtReal sup;
  for (std::size_t w = 0; w < lambda.witness_count(); ++w) {
    if (lambda(l, w) < lambda(lp, w)) sup = max(sup, lambda(lp, w));
  }
  return sup;
}

RestrictionFunction canonical_restriction(const DowkerDissimilarity& lambda, const ParentFunction& phi) {
  const std::size_t n = lambda.landmark_count();
  if (phi.parent.size() != n) throw InputError("parent function does not match the landmark set");
  if (!is_parent_function(phi)) throw InputError("not a parent function");

  RestrictionFunction r{std::vector<ExtReal>(n, ExtReal())};
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t p = phi.parent[l];
    const ExtReal own = p == l ? kInfinity : witness_overshoot(lambda, l, p);
    // push R'(l) to l and every ancestor: R(a) = max over descendants of R'
    std::size_t a = l;
    while (true) {
      r.bound[a] = max(r.bound[a], own);
      if (phi.parent[a] == a) break;
      a = phi.parent[a];
    }
  }
  return r;
}

BuiltParent build_parent_function(const DowkerDissimilarity& lambda) {
  const std::size_t n = lambda.landmark_count();
  std::vector<ExtReal> rho(n * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t lp = 0; lp < n; ++lp) rho[l * n + lp] = witness_overshoot(lambda, l, lp);
  }
  std::vector<ExtReal> r0(n, kInfinity);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t lp = 0; lp < n; ++lp) {
      if (lp != l) r0[l] = min(r0[l], rho[l * n + lp]);
    }
  }

  BuiltParent out;
  out.order.resize(n);
  for (std::size_t l = 0; l < n; ++l) out.order[l] = l;
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return r0[a] > r0[b]; });

  const std::size_t root = out.order.front();
  out.phi.parent.assign(n, root);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t l = out.order[pos];
    std::optional<std::size_t> chosen;
    for (std::size_t q = 0; q < pos && !chosen; ++q) {
      if (rho[l * n + out.order[q]] == r0[l]) chosen = out.order[q];
    }
    if (!chosen) {
      ExtReal r1 = kInfinity;
      for (std::size_t q = 0; q < pos; ++q) r1 = min(r1, rho[l * n + out.order[q]]);
      for (std::size_t q = 0; q < pos && !chosen; ++q) {
        if (rho[l * n + out.order[q]] == r1) chosen = out.order[q];
      }
    }
    out.phi.parent[l] = chosen.value_or(root);
  }
  return out;
}

ParentRestriction parent_restriction(const DowkerDissimilarity& lambda, std::size_t base) {
  const std::size_t n = lambda.landmark_count();
  if (base >= n) throw InputError("base landmark " + std::to_string(base) + " out of range");
  std::vector<ExtReal> tau(n, ExtReal());
  for (std::size_t l = 0; l < n; ++l) {
    for (ExtReal v : lambda.row(l)) {
      if (v.is_finite()) tau[l] = max(tau[l], v);
    }
  }
  tau[base] = kInfinity;

  ParentRestriction out;
  out.phi.parent.assign(n, base);
  out.r.bound.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    std::optional<std::size_t> chosen;
    for (std::size_t lp = 0; lp < n; ++lp) {
      if (tau[lp] > tau[l] && (!chosen || tau[lp] < tau[*chosen])) chosen = lp;
    }
    out.phi.parent[l] = chosen.value_or(base);
    out.r.bound[l] = tau[out.phi.parent[l]];
  }
  return out;
}

namespace {

std::vector<std::string> sheehy_warnings(const DowkerDissimilarity& lambda) {
  std::vector<std::string> warnings;
  if (std::any_of(lambda.values().begin(), lambda.values().end(), [](ExtReal v) { return v.is_infinite(); })) {
    warnings.push_back("dissimilarity has infinite entries");
  }
  // Triangle inequality Lambda(l', w) <= Lambda(l', l) + Lambda(l, w), where
  // landmark l is also a witness with the same id.
  std::vector<std::optional<std::size_t>> as_witness(lambda.landmark_count());
  for (std::size_t l = 0; l < lambda.landmark_count(); ++l) {
    const auto& ids = lambda.witness_ids();
    const auto it = std::find(ids.begin(), ids.end(), lambda.landmark_ids()[l]);
    if (it != ids.end()) as_witness[l] = static_cast<std::size_t>(it - ids.begin());
  }
  const std::size_t n = lambda.landmark_count();
  const std::size_t m = lambda.witness_count();
  constexpr std::size_t kTripleBudget = 4'000'000;
  const std::size_t total = n * n * m;
  const std::size_t stride = total > kTripleBudget ? total / kTripleBudget + 1 : 1;
  for (std::size_t idx = 0; idx < total; idx += stride) {
    const std::size_t l = idx / (n * m);
    const std::size_t lp = (idx / m) % n;
    const std::size_t w = idx % m;
    if (!as_witness[l]) continue;
    if (lambda(lp, w) > lambda(lp, *as_witness[l]) + lambda(l, w)) {
      warnings.push_back("triangle inequality fails at landmarks " + std::to_string(lp) + ", " +
                         std::to_string(l) + " and witness " + std::to_string(w));
      break;
    }
  }
  return warnings;
}

}  // namespace

SheehyRestriction sheehy_restriction(const DowkerDissimilarity& lambda, const SampleOrder& order, double c) {
  if (!std::isfinite(c) || c <= 1.0) throw InputError("Sheehy restriction needs c > 1");
  const std::size_t n = lambda.landmark_count();
  const std::size_t m = lambda.witness_count();
  if (order.permutation.size() != n) throw InputError("sample order does not match the landmark set");

  const MonotoneMap beta = MonotoneMap::linear(c - 1.0);
  const TranslationFunction alpha = TranslationFunction::id_plus_beta(beta);

  // lambda(l_k) = sup_w inf_{l' before l_k} Lambda(l', w)
  std::vector<ExtReal> radius(n, kInfinity);
  std::vector<ExtReal> reach(m, kInfinity);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t l = order.permutation[pos];
    if (pos > 0) {
      ExtReal sup;
      for (ExtReal v : reach) sup = max(sup, v);
      radius[l] = sup;
    }
    for (std::size_t w = 0; w < m; ++w) reach[w] = min(reach[w], lambda(l, w));
  }

  SheehyRestriction out{ParentFunction{std::vector<std::size_t>(n)}, RestrictionFunction{std::vector<ExtReal>(n)},
                        lambda, radius, sheehy_warnings(lambda)};
  std::vector<ExtReal> values(lambda.values());
  const std::size_t root = order.first();
  for (std::size_t l = 0; l < n; ++l) {
    const ExtReal scale = generalized_inverse(beta, radius[l]);
    const ExtReal keep_below = alpha(scale);
    for (std::size_t w = 0; w < m; ++w) {
      if (!(values[l * m + w] < keep_below)) values[l * m + w] = kInfinity;
    }
    out.r.bound[l] = alpha(keep_below);
    if (l == root) {
      out.phi.parent[l] = l;
      continue;
    }
    // w' is the nearest witness of l; the parent is the earliest landmark near
    // w' whose radius exceeds beta(alpha(beta_inv(lambda(l)))).
    std::size_t anchor = 0;
    for (std::size_t w = 1; w < m; ++w) {
      if (lambda(l, w) < lambda(l, anchor)) anchor = w;
    }
    const ExtReal reach_bound = beta(keep_below);
    std::optional<std::size_t> chosen;
    for (std::size_t lp : order.permutation) {
      if (lambda(lp, anchor) <= reach_bound && radius[lp] > reach_bound) {
        chosen = lp;
        break;
      }
    }
    out.phi.parent[l] = chosen.value_or(root);
    if (!chosen) out.r.bound[l] = kInfinity;
  }
  out.truncated = DowkerDissimilarity(lambda.landmark_ids(), lambda.witness_ids(), std::move(values));
  return out;
}

std::optional<RestrictionViolation> validate_restriction(const DowkerDissimilarity& lambda,
                                                         const ParentFunction& phi,
                                                         const RestrictionFunction& r) {
  const std::size_t n = lambda.landmark_count();
  if (phi.parent.size() != n || r.bound.size() != n) {
    return RestrictionViolation{0, std::nullopt, 0, "size mismatch with the landmark set"};
  }
  if (!is_parent_function(phi)) {
    return RestrictionViolation{0, std::nullopt, 0, "phi has a cycle without a fixed point"};
  }
  for (std::size_t l = 0; l < n; ++l) {
    if (phi.parent[l] == l && r.bound[l] != kInfinity) {
      return RestrictionViolation{l, std::nullopt, 3, "root with finite restriction"};
    }
  }
  for (std::size_t l = 0; l < n; ++l) {
    if (r.bound[phi.parent[l]] < r.bound[l]) {
      return RestrictionViolation{l, std::nullopt, 2, "R(phi(l)) < R(l)"};
    }
  }
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t p = phi.parent[l];
    for (std::size_t w = 0; w < lambda.witness_count(); ++w) {
      if (lambda(l, w) < lambda(p, w) && lambda(p, w) > r.bound[l]) {
        return RestrictionViolation{l, w, 1, "Lambda(l,w) < Lambda(phi(l),w) but Lambda(phi(l),w) > R(l)"};
      }
    }
  }
  return std::nullopt;
}

}  // namespace dowker
