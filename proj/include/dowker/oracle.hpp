#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "dowker/dissimilarity.hpp"
#include "dowker/nerve.hpp"
#include "dowker/persistence.hpp"

namespace dowker::oracle {

enum class ValueDistribution { uniform, integer_grid, metric_points };

/// Random small instance. Metric instances place m points uniformly in the
/// unit square and use the first n of them as landmarks.
struct InstanceSpec {
  std::size_t n = 8;
  std::size_t m = 8;
  ValueDistribution distribution = ValueDistribution::uniform;
  std::uint64_t seed = 0;
  int dim_cap = 2;
  std::size_t max_side = 12;  // n and m limit
  int max_dim_cap = 3;
};

/// Throws BudgetExceeded when the spec is outside its limits.
DowkerDissimilarity generate_instance(const InstanceSpec& spec);

enum class Strategy { canonical, parent, sheehy };
const char* strategy_name(Strategy s);

struct CheckResult {
  bool passed = false;
  std::string message;
  std::size_t full_simplices = 0;
  std::size_t sparse_simplices = 0;
};

/// Builds the strategy's plan, validates it as a restriction function and
/// requires the full and sparse nerve diagrams to be equal. On failure the
/// instance is written to `bundle_dir` (if given) in the CLI formats.
CheckResult check_sparsification(const InstanceSpec& spec, Strategy strategy,
                                 const std::optional<std::filesystem::path>& bundle_dir = std::nullopt,
                                 double sheehy_c = 2.0);

/// Truncates by the alpha-insertion radius of the cover dissimilarity for
/// alpha(t) = c t and requires an interleaving-compatible matching between
/// the truncated and the full nerve diagrams.
CheckResult check_truncation(const InstanceSpec& spec, double c,
                             const std::optional<std::filesystem::path>& bundle_dir = std::nullopt);

/// Reference nerve: every vertex subset up to dim_cap, values by direct
/// evaluation, no pruning.
FilteredComplex brute_force_nerve(const DowkerDissimilarity& lambda, int dim_cap,
                                  std::size_t budget = kDefaultSimplexBudget);

/// Truncating a metric instance by the plain insertion radius (no alpha
/// slack) need not preserve the matching; reports whether this instance
/// breaks it.
bool naive_truncation_breaks_matching(const InstanceSpec& spec, double c);

}  // namespace dowker::oracle
