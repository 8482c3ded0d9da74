// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dowker/formats.hpp"
#include "dowker/interleave.hpp"
#include "dowker/oracle.hpp"

using namespace dowker;
using namespace dowker::oracle;

namespace {

// Pinned thresholds.
constexpr int kInstances = 100;
constexpr int kOracleInstances = 200;
constexpr int kAdjunctionSamples = 1000;
constexpr double kExactnessSeconds = 60.0;
constexpr double kTruncationSeconds = 60.0;
constexpr double kBenchmarkSeconds = 120.0;
constexpr double kBenchmarkRatio = 0.5;
constexpr std::size_t kCirclePoints = 200;
constexpr double kCircleNoise = 0.05;

struct Outcome {
  bool passed = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

Outcome sparsification_exactness() {
  Clock clock;
  int checks = 0;
  for (int i = 0; i < kInstances; ++i) {
    const auto seed = static_cast<std::uint64_t>(i);
    const InstanceSpec uniform{8, 8, ValueDistribution::uniform, seed, 2};
    const InstanceSpec metric{8, 8, ValueDistribution::metric_points, seed, 2};
    const std::vector<std::pair<InstanceSpec, Strategy>> runs = {
        {uniform, Strategy::canonical}, {uniform, Strategy::parent}, {metric, Strategy::canonical},
        {metric, Strategy::parent},     {metric, Strategy::sheehy}};
    for (const auto& [spec, strategy] : runs) {
      const auto r = check_sparsification(spec, strategy);
      ++checks;
      if (!r.passed) return {false, r.message};
    }
  }
  const double t = clock.seconds();
  if (t >= kExactnessSeconds) return {false, "took " + fmt(t) + " s"};
  return {true, std::to_string(checks) + " checks, diagrams equal, " + fmt(t) + " s"};
}

Outcome truncation_interleaving() {
  Clock clock;
  int checks = 0;
  for (int i = 0; i < kInstances; ++i) {
    for (double c : {1.1, 1.5, 2.0}) {
      const auto r = check_truncation({8, 8, ValueDistribution::uniform, static_cast<std::uint64_t>(i), 2}, c);
      ++checks;
      if (!r.passed) return {false, r.message};
    }
  }
  const double t = clock.seconds();
  if (t >= kTruncationSeconds) return {false, "took " + fmt(t) + " s"};
  return {true, std::to_string(checks) + " instance/c pairs matched, " + fmt(t) + " s"};
}

// Every validated restriction for phi must dominate the canonical one, and
// the canonical one must break when any positive finite value is lowered by
// the smallest representable amount (hence by any positive amount).
std::optional<std::string> minimality_case(const DowkerDissimilarity& lam, const ParentFunction& phi,
                                           const std::vector<RestrictionFunction>& others, const std::string& tag) {
  const auto canonical = canonical_restriction(lam, phi);
  if (auto v = validate_restriction(lam, phi, canonical)) return tag + ": canonical invalid: " + v->message;
  const std::size_t n = lam.landmark_count();
  RestrictionFunction everywhere_inf{std::vector<ExtReal>(n, kInfinity)};
  std::vector<RestrictionFunction> candidates = others;
  candidates.push_back(everywhere_inf);
  for (const auto& r : candidates) {
    if (validate_restriction(lam, phi, r)) return tag + ": comparison restriction is not valid";
    for (std::size_t l = 0; l < n; ++l) {
      if (!(canonical.bound[l] <= r.bound[l])) return tag + ": canonical exceeds a valid restriction at " + std::to_string(l);
    }
  }
  for (std::size_t l = 0; l < n; ++l) {
    const ExtReal v = canonical.bound[l];
    if (v.is_infinite() || v == ExtReal(0)) continue;
    for (double lowered : {std::nextafter(v.value(), 0.0), v.value() / 2, 0.0}) {
      auto r = canonical;
      r.bound[l] = ExtReal(lowered);
      if (!validate_restriction(lam, phi, r)) {
        return tag + ": lowering R(" + std::to_string(l) + ") to " + format_ext_real(ExtReal(lowered)) + " stays valid";
      }
    }
  }
  return std::nullopt;
}

Outcome canonical_minimality() {
  int cases = 0;
  for (int i = 0; i < kInstances; ++i) {
    const auto seed = static_cast<std::uint64_t>(i);
    for (auto dist : {ValueDistribution::uniform, ValueDistribution::integer_grid, ValueDistribution::metric_points}) {
      const auto lam = generate_instance({8, 8, dist, seed, 2});
      const std::string tag = "seed " + std::to_string(seed);

      const auto built = build_parent_function(lam);
      if (auto e = minimality_case(lam, built.phi, {}, tag + " built parent")) return {false, *e};
      const auto pr = parent_restriction(lam, 0);
      if (auto e = minimality_case(lam, pr.phi, {pr.r}, tag + " parent restriction")) return {false, *e};
      cases += 2;
      if (dist == ValueDistribution::metric_points) {
        const auto sh = sheehy_restriction(lam, farthest_point_sample(lam, 0), 2.0);
        if (auto e = minimality_case(sh.truncated, sh.phi, {sh.r}, tag + " sheehy")) return {false, *e};
        ++cases;
      }
    }
  }
  return {true, std::to_string(cases) + " (instance, parent) cases"};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::size_t simplices = 0;
  for (int i = 0; i < kOracleInstances; ++i) {
    InstanceSpec spec;
    spec.n = 1 + rng() % 10;
    spec.m = 1 + rng() % 10;
    spec.dim_cap = static_cast<int>(rng() % 4);
    spec.seed = static_cast<std::uint64_t>(i);
    spec.distribution = i % 2 ? ValueDistribution::integer_grid : ValueDistribution::uniform;
    auto lam = generate_instance(spec);
    if (i % 3 == 0) {
      // knock out entries so that pruning is exercised
      std::vector<ExtReal> values = lam.values();
      for (auto& v : values) {
        if (rng() % 4 == 0) v = kInfinity;
      }
      lam = DowkerDissimilarity(lam.landmark_ids(), lam.witness_ids(), values);
    }
    const auto fast = build_nerve(lam, spec.dim_cap);
    const auto slow = brute_force_nerve(lam, spec.dim_cap);
    if (fast.simplices != slow.simplices) {
      return {false, "instance " + std::to_string(i) + " (n=" + std::to_string(spec.n) + ", m=" + std::to_string(spec.m) +
                         ", dim_cap=" + std::to_string(spec.dim_cap) + ") differs"};
    }
    simplices += fast.simplices.size();
  }
  return {true, std::to_string(kOracleInstances) + " instances, " + std::to_string(simplices) + " simplices identical"};
}

Outcome persistence_correctness() {
  std::size_t probes = 0;
  for (int i = 0; i < kInstances; ++i) {
    const auto seed = static_cast<std::uint64_t>(i);
    const auto dist = i % 2 ? ValueDistribution::integer_grid : ValueDistribution::uniform;
    const InstanceSpec spec{8, 8, dist, seed, 3};
    const auto lam = generate_instance(spec);
    std::vector<FilteredComplex> complexes = {build_nerve(lam, 3)};
    const auto built = build_parent_function(lam);
    complexes.push_back(build_sparse_nerve(lam, make_plan(built.phi, canonical_restriction(lam, built.phi)), 3));
    for (const auto& complex : complexes) {
      const auto diagram = compute_diagram(complex);
      std::vector<double> values;
      for (const auto& s : complex.simplices) values.push_back(s.value.value());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      std::vector<double> grid = {INFINITY};
      for (std::size_t k = 0; k < values.size(); ++k) {
        grid.push_back(values[k]);
        grid.push_back(std::nextafter(values[k], INFINITY));
        grid.push_back(k == 0 ? values[k] / 2 : (values[k - 1] + values[k]) / 2);
        grid.push_back(k + 1 < values.size() ? (values[k] + values[k + 1]) / 2 : values[k] + 1);
      }
      for (double t : grid) {
        for (int dim = 0; dim < complex.dim_cap; ++dim) {
          ++probes;
          const std::size_t alive = diagram.alive_at(ExtReal(t), dim);
          const std::size_t rank = betti_at(complex, ExtReal(t), dim);
          if (alive != rank) {
            return {false, "seed " + std::to_string(seed) + ", t=" + format_ext_real(ExtReal(t)) + ", dim " +
                               std::to_string(dim) + ": " + std::to_string(alive) + " alive vs rank " +
                               std::to_string(rank)};
          }
        }
      }
    }
  }
  return {true, std::to_string(probes) + " (complex, t, dim) probes consistent"};
}

std::vector<std::vector<double>> noisy_circle() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::acos(-1.0));
  std::normal_distribution<double> noise(0.0, kCircleNoise);
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < kCirclePoints; ++i) {
    const double a = angle(rng);
    pts.push_back({std::cos(a) + noise(rng), std::sin(a) + noise(rng)});
  }
  return pts;
}

Outcome sparsification_benefit() {
  Clock clock;
  const auto dir = std::filesystem::temp_directory_path() / "dowker_acceptance_circle";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto pts = noisy_circle();
  std::ostringstream csv;
  for (const auto& p : pts) {
    char buf[64];
    for (std::size_t k = 0; k < p.size(); ++k) {
      const auto end = std::to_chars(buf, buf + sizeof buf, p[k]).ptr;
      csv << (k ? "," : "") << std::string(buf, end);
    }
    csv << '\n';
  }
  write_file_atomic(dir / "circle.csv", csv.str());

  std::ostringstream out, err;
  const int code = cli::run({"sparsify", "--input", (dir / "circle.csv").string(), "--format", "points", "--dim-cap", "2",
                             "--strategy", "sheehy", "--alpha", "mult:2", "--truncate", "--out", (dir / "run").string()},
                            out, err);
  if (code != 0) return {false, "sparsify exited " + std::to_string(code) + ": " + err.str()};
  const auto stats = nlohmann::json::parse(read_file(dir / "run" / "stats.json"));
  const std::size_t full_count = stats["full_simplices"];
  const std::size_t sparse_count = stats["sparse_simplices"];
  const double ratio = stats["ratio"];

  const auto lam = from_point_cloud(pts);
  const auto sh = sheehy_restriction(lam, farthest_point_sample(lam, 0), 2.0);
  const auto plan = make_plan(sh.phi, sh.r);
  std::istringstream sparse_text(read_file(dir / "run" / "sparse_complex.csv"));
  const auto sparse = read_complex(sparse_text, 2);
  if (sparse.simplices != build_sparse_nerve(sh.truncated, plan, 2).simplices) {
    return {false, "sparse_complex.csv differs from the library pipeline"};
  }
  const auto full = build_nerve(lam, 2);
  if (full.simplices.size() != full_count) return {false, "full simplex count mismatch"};

  const auto full_diagram = compute_diagram(full);
  const auto sparse_diagram = compute_diagram(sparse);
  const auto alpha = TranslationFunction::multiplicative(2.0);
  std::size_t top = full_diagram.classes.size();
  double best = -1;
  for (std::size_t k = 0; k < full_diagram.classes.size(); ++k) {
    const auto& c = full_diagram.classes[k];
    if (c.dimension != 1) continue;
    const double life = c.death.value() - c.birth.value();
    if (life > best) {
      best = life;
      top = k;
    }
  }
  std::filesystem::remove_all(dir);
  if (top == full_diagram.classes.size()) return {false, "full complex has no dimension-1 class"};
  const auto& target = full_diagram.classes[top];
  const auto matching = find_matching(sparse_diagram, full_diagram, alpha);
  if (!matching.passed()) return {false, "no interleaving matching between sparse and full diagrams"};
  if (!verify_certificate(sparse_diagram, full_diagram, alpha, *matching.certificate)) {
    return {false, "matching certificate does not verify"};
  }
  std::optional<PersistenceClass> partner;
  for (const auto& [a, b] : matching.certificate->pairs) {
    if (b == top) partner = sparse_diagram.classes[a];
  }
  if (!partner) return {false, "most persistent dimension-1 class is unmatched"};
  const double t = clock.seconds();
  std::ostringstream detail;
  detail << "sparse " << sparse_count << " / full " << full_count << " = " << fmt(ratio) << " (< " << kBenchmarkRatio
         << "); full [" << fmt(target.birth.value()) << ", " << fmt(target.death.value()) << ") matched to ["
         << fmt(partner->birth.value()) << ", " << fmt(partner->death.value()) << "); " << fmt(t) << " s";
  if (!(ratio < kBenchmarkRatio)) return {false, detail.str()};
  if (t >= kBenchmarkSeconds) return {false, detail.str()};
  return {true, detail.str()};
}

Outcome adjunction() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample = [&]() -> ExtReal {
    const double u = unit(rng);
    if (u < 0.02) return kInfinity;
    if (u < 0.04) return ExtReal(0);
    return ExtReal(std::exp(unit(rng) * 40 - 20));
  };
  std::size_t checks = 0;
  const std::vector<MonotoneMap> maps = {MonotoneMap::linear(1), MonotoneMap::linear(2), MonotoneMap::linear(0.3),
                                         MonotoneMap::linear(1, 1), MonotoneMap::linear(3.7, 0.2),
                                         MonotoneMap::linear(1e-3, 5)};
  for (const auto& beta : maps) {
    for (int i = 0; i < kAdjunctionSamples; ++i) {
      const ExtReal s = sample();
      // half the thresholds sit at or next to beta(s), where rounding bites
      ExtReal t = sample();
      if (i % 2 && beta(s).is_finite()) {
        t = beta(s);
        if (i % 4 == 1) t = next_above(t);
        if (i % 4 == 3 && t.value() > 0) t = ExtReal(std::nextafter(t.value(), 0.0));
      }
      ++checks;
      if ((generalized_inverse(beta, t) <= s) != (t <= beta(s))) {
        return {false, "beta(t) = " + format_ext_real(ExtReal(beta.slope())) + " t + " +
                           format_ext_real(ExtReal(beta.intercept())) + " fails at s=" + format_ext_real(s) +
                           ", t=" + format_ext_real(t)};
      }
    }
  }
  const std::vector<TranslationFunction> translations = {
      TranslationFunction::identity(), TranslationFunction::multiplicative(1.1), TranslationFunction::additive(0.7),
      TranslationFunction::id_plus_beta(MonotoneMap::linear(0.5, 0.1)),
      compose(TranslationFunction::additive(0.3), TranslationFunction::multiplicative(3))};
  for (const auto& alpha : translations) {
    ExtReal previous(0);
    for (int i = 0; i < kAdjunctionSamples; ++i) {
      const ExtReal s = sample();
      ExtReal t = i % 2 ? alpha(s) : sample();
      if (i % 4 == 1 && t.is_finite()) t = next_above(t);
      ++checks;
      if ((alpha.inverse(t) <= s) != (t <= alpha(s))) {
        return {false, alpha.describe() + " fails the adjunction at s=" + format_ext_real(s) + ", t=" + format_ext_real(t)};
      }
      if (!(s <= alpha(s)) || alpha(kInfinity) != kInfinity) return {false, alpha.describe() + " is not a translation"};
      if (previous <= s ? !(alpha(previous) <= alpha(s)) : !(alpha(s) <= alpha(previous))) {
        return {false, alpha.describe() + " is not order preserving"};
      }
      previous = s;
    }
  }
  return {true, std::to_string(checks) + " exact (s, t) checks over " + std::to_string(maps.size()) + " maps and " +
                    std::to_string(translations.size()) + " translations"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 sparsification exactness", sparsification_exactness},
      {"2 truncation interleaving", truncation_interleaving},
      {"3 canonical minimality", canonical_minimality},
      {"4 oracle equivalence", oracle_equivalence},
      {"5 persistence correctness", persistence_correctness},
      {"6 sparsification benefit", sparsification_benefit},
      {"7 adjunction and translations", adjunction},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << std::endl;
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<std::size_t>(failures) << "/"
            << criteria.size() << std::endl;
  return failures ? 1 : 0;
}
