#include "dowker/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "dowker/formats.hpp"
#include "dowker/interleave.hpp"

namespace dowker::oracle {

namespace {

std::string to_text(const PersistenceDiagram& d) {
  std::ostringstream out;
  write_diagram(out, d);
  return out.str();
}

std::string to_text(const FilteredComplex& c) {
  std::ostringstream out;
  write_complex(out, c);
  return out.str();
}

std::string to_text(const DowkerDissimilarity& lambda) {
  std::ostringstream out;
  write_dowker(out, lambda);
  return out.str();
}

std::string to_text(const SparsificationPlan& plan) {
  std::ostringstream out;
  write_plan(out, plan);
  return out.str();
}

void write_bundle(const std::optional<std::filesystem::path>& dir, const std::string& report,
                  const DowkerDissimilarity& lambda, const FilteredComplex& full, const FilteredComplex& sparse,
                  const PersistenceDiagram& full_diagram, const PersistenceDiagram& sparse_diagram,
                  const SparsificationPlan* plan) {
  if (!dir) return;
  std::filesystem::create_directories(*dir);
  write_file_atomic(*dir / "report.txt", report + "\n");
  write_file_atomic(*dir / "dowker.csv", to_text(lambda));
  write_file_atomic(*dir / "complex.csv", to_text(full));
  write_file_atomic(*dir / "sparse_complex.csv", to_text(sparse));
  write_file_atomic(*dir / "diagram_full.csv", to_text(full_diagram));
  write_file_atomic(*dir / "diagram_sparse.csv", to_text(sparse_diagram));
  if (plan) write_file_atomic(*dir / "plan.csv", to_text(*plan));
}

// Columns of the landmarks among the witnesses (metric instances list the
// landmarks first).
DowkerDissimilarity landmark_square(const DowkerDissimilarity& lambda) {
  const std::size_t n = lambda.landmark_count();
  if (lambda.witness_count() < n) throw InputError("landmarks are not a subset of the witnesses");
  std::vector<ExtReal> values;
  values.reserve(n * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) values.push_back(lambda(l, k));
  }
  return DowkerDissimilarity(n, n, std::move(values));
}

}  // namespace

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::canonical:
      return "canonical";
    case Strategy::parent:
      return "parent";
    case Strategy::sheehy:
      return "sheehy";
  }
  return "?";
}

DowkerDissimilarity generate_instance(const InstanceSpec& spec) {
  if (spec.n == 0 || spec.m == 0 || spec.n > spec.max_side || spec.m > spec.max_side || spec.dim_cap < 0 ||
      spec.dim_cap > spec.max_dim_cap) {
    throw BudgetExceeded("instance n=" + std::to_string(spec.n) + ", m=" + std::to_string(spec.m) +
                         ", dim_cap=" + std::to_string(spec.dim_cap) + " is outside the test budget");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<ExtReal> values;
  values.reserve(spec.n * spec.m);
  switch (spec.distribution) {
    case ValueDistribution::uniform: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t i = 0; i < spec.n * spec.m; ++i) values.push_back(ExtReal(unit(rng)));
      return DowkerDissimilarity(spec.n, spec.m, std::move(values));
    }
    case ValueDistribution::integer_grid: {
      std::uniform_int_distribution<int> grid(0, 4);
      for (std::size_t i = 0; i < spec.n * spec.m; ++i) values.push_back(ExtReal(grid(rng)));
      return DowkerDissimilarity(spec.n, spec.m, std::move(values));
    }
    case ValueDistribution::metric_points: {
      if (spec.n > spec.m) throw InputError("metric instances need n <= m");
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<std::vector<double>> points(spec.m);
      for (auto& p : points) p = {unit(rng), unit(rng)};
      std::vector<std::size_t> landmarks(spec.n);
      for (std::size_t i = 0; i < spec.n; ++i) landmarks[i] = i;
      return from_point_cloud(points, landmarks);
    }
  }
  throw InputError("unknown value distribution");
}

CheckResult check_sparsification(const InstanceSpec& spec, Strategy strategy,
                                 const std::optional<std::filesystem::path>& bundle_dir, double sheehy_c) {
  const DowkerDissimilarity lambda = generate_instance(spec);
  const std::size_t n = lambda.landmark_count();

  // The dissimilarity whose nerve is sparsified; Sheehy truncates first.
  DowkerDissimilarity target = lambda;
  ParentFunction phi;
  RestrictionFunction r;
  switch (strategy) {
    case Strategy::canonical: {
      phi = build_parent_function(lambda).phi;
      r = canonical_restriction(lambda, phi);
      break;
    }
    case Strategy::parent: {
      auto pr = parent_restriction(lambda, 0);
      phi = std::move(pr.phi);
      r = std::move(pr.r);
      break;
    }
    case Strategy::sheehy: {
      if (spec.distribution != ValueDistribution::metric_points) {
        throw InputError("the sheehy strategy needs metric instances");
      }
      const SampleOrder order = farthest_point_sample(landmark_square(lambda), 0);
      auto sr = sheehy_restriction(lambda, order, sheehy_c);
      target = std::move(sr.truncated);
      phi = std::move(sr.phi);
      r = std::move(sr.r);
      break;
    }
  }

  CheckResult result;
  std::ostringstream report;
  report << "strategy=" << strategy_name(strategy) << " seed=" << spec.seed << " n=" << n << " m=" << spec.m
         << " dim_cap=" << spec.dim_cap;
  const auto violation = validate_restriction(target, phi, r);
  const SparsificationPlan plan = make_plan(phi, r);
  const FilteredComplex full = build_nerve(target, spec.dim_cap);
  const FilteredComplex sparse = build_sparse_nerve(target, plan, spec.dim_cap);
  const PersistenceDiagram full_diagram = compute_diagram(full);
  const PersistenceDiagram sparse_diagram = compute_diagram(sparse);
  result.full_simplices = full.simplices.size();
  result.sparse_simplices = sparse.simplices.size();

  if (violation) {
    report << ": restriction invalid at landmark " << violation->landmark << " (condition " << violation->condition
           << ": " << violation->message << ")";
  } else if (full_diagram != sparse_diagram) {
    report << ": diagrams differ";
  } else {
    result.passed = true;
    report << ": ok";
  }
  result.message = report.str();
  if (!result.passed) write_bundle(bundle_dir, result.message, target, full, sparse, full_diagram, sparse_diagram, &plan);
  return result;
}

CheckResult check_truncation(const InstanceSpec& spec, double c,
                             const std::optional<std::filesystem::path>& bundle_dir) {
  const DowkerDissimilarity lambda = generate_instance(spec);
  const TranslationFunction alpha = TranslationFunction::multiplicative(c);
  const DowkerDissimilarity cover = cover_dissimilarity(lambda, alpha, 0);
  const SampleOrder order = farthest_point_sample(cover, 0);
  const TruncationFunction bound = alpha_insertion_radius(cover, order);
  const DowkerDissimilarity truncated = truncate(lambda, bound);

  const FilteredComplex full = build_nerve(lambda, spec.dim_cap);
  const FilteredComplex sparse = build_nerve(truncated, spec.dim_cap);
  const PersistenceDiagram full_diagram = compute_diagram(full);
  const PersistenceDiagram sparse_diagram = compute_diagram(sparse);

  CheckResult result;
  result.full_simplices = full.simplices.size();
  result.sparse_simplices = sparse.simplices.size();
  std::ostringstream report;
  report << "truncation c=" << c << " seed=" << spec.seed << " n=" << spec.n << " m=" << spec.m
         << " dim_cap=" << spec.dim_cap;
  const auto bad_bound = validate_truncation(lambda, bound, alpha, truncation_grid(lambda));
  const MatchingResult matching = find_matching(sparse_diagram, full_diagram, alpha);
  if (bad_bound) {
    report << ": not a truncation function at t=" << format_ext_real(bad_bound->threshold) << ", landmark "
           << bad_bound->landmark;
  } else if (!matching.passed()) {
    const auto& f = *matching.failure;
    report << ": unmatched class [" << format_ext_real(f.interval.birth) << ", " << format_ext_real(f.interval.death)
           << ") in dimension " << f.interval.dimension << " of the " << (f.side == 0 ? "truncated" : "full")
           << " diagram";
  } else if (!verify_certificate(sparse_diagram, full_diagram, alpha, *matching.certificate)) {
    report << ": certificate failed re-verification";
  } else {
    result.passed = true;
    report << ": ok";
  }
  result.message = report.str();
  if (!result.passed) {
    write_bundle(bundle_dir, result.message, lambda, full, sparse, full_diagram, sparse_diagram, nullptr);
    if (bundle_dir) write_file_atomic(*bundle_dir / "truncated.csv", to_text(truncated));
  }
  return result;
}

FilteredComplex brute_force_nerve(const DowkerDissimilarity& lambda, int dim_cap, std::size_t budget) {
  const std::size_t n = lambda.landmark_count();
  if (n > 30) throw BudgetExceeded("brute force nerve is limited to 30 landmarks");
  if (simplex_count_bound(n, dim_cap) > budget) {
    throw BudgetExceeded("brute force nerve would visit " + std::to_string(simplex_count_bound(n, dim_cap)) +
                         " subsets, budget " + std::to_string(budget));
  }
  FilteredComplex complex;
  complex.dim_cap = dim_cap;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    const int size = std::popcount(mask);
    if (size > dim_cap + 1) continue;
    std::vector<Vertex> vertices;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (mask & (std::uint32_t{1} << v)) vertices.push_back(v);
    }
    double best = INFINITY;
    for (std::size_t w = 0; w < lambda.witness_count(); ++w) {
      double worst = 0.0;
      for (Vertex v : vertices) worst = std::max(worst, lambda(v, w).value());
      best = std::min(best, worst);
    }
    if (std::isfinite(best)) complex.simplices.push_back({Simplex(std::move(vertices)), ExtReal(best)});
  }
  std::sort(complex.simplices.begin(), complex.simplices.end(), filtration_less);
  return complex;
}

bool naive_truncation_breaks_matching(const InstanceSpec& spec, double c) {
  InstanceSpec metric = spec;
  metric.distribution = ValueDistribution::metric_points;
  const DowkerDissimilarity lambda = generate_instance(metric);
  const SampleOrder order = farthest_point_sample(landmark_square(lambda), 0);
  const DowkerDissimilarity truncated = truncate(lambda, TruncationFunction{order.insertion_radius});
  const TranslationFunction alpha = TranslationFunction::multiplicative(c);
  const auto result = find_matching(compute_diagram(build_nerve(truncated, spec.dim_cap)),
                                    compute_diagram(build_nerve(lambda, spec.dim_cap)), alpha);
  return !result.passed();
}

}  // namespace dowker::oracle
