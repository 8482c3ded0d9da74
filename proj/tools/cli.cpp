#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "dowker/dissimilarity.hpp"
#include "dowker/formats.hpp"
#include "dowker/interleave.hpp"
#include "dowker/nerve.hpp"
#include "dowker/persistence.hpp"
#include "dowker/translation.hpp"

namespace dowker::cli {

namespace {

struct RunConfig {
  std::string input;
  std::string format;
  int dim_cap = 2;
  bool dim_cap_given = false;
  std::string strategy = "none";
  std::string alpha = "id";
  bool truncate = false;
  std::size_t seed_landmark = 0;
  std::optional<std::size_t> budget;
  std::string out = ".";
  bool svg = false;
  std::string first;
  std::string second;
};

// Raised for verification failures that should exit with status 1.
class VerifyFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::size_t effective_budget(const RunConfig& config) {
  if (config.budget) return *config.budget;
  if (const char* env = std::getenv("DOWKER_SPARSE_BUDGET"); env && *env) {
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(env, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || env[pos] != '\0') {
      throw InputError(std::string("DOWKER_SPARSE_BUDGET is not a non-negative integer: ") + env);
    }
    return static_cast<std::size_t>(value);
  }
  return kDefaultSimplexBudget;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file " + path);
  return in;
}

DowkerDissimilarity read_input(const RunConfig& config) {
  auto in = open_input(config.input);
  if (config.format == "points") return from_point_cloud(read_points(in));
  if (config.format == "distances") return read_distance_matrix(in);
  if (config.format == "dowker") return read_dowker(in);
  throw InputError("format " + config.format + " does not describe a dissimilarity");
}

void check_seed(const RunConfig& config, const DowkerDissimilarity& lambda) {
  if (config.seed_landmark >= lambda.landmark_count()) {
    throw InputError("seed landmark " + std::to_string(config.seed_landmark) + " out of range (n = " +
                     std::to_string(lambda.landmark_count()) + ")");
  }
}

// The input after the optional alpha truncation.
DowkerDissimilarity prepared(const RunConfig& config, const DowkerDissimilarity& lambda) {
  if (!config.truncate) return lambda;
  const TranslationFunction alpha = parse_translation(config.alpha);
  const DowkerDissimilarity cover = cover_dissimilarity(lambda, alpha, config.seed_landmark);
  const SampleOrder order = farthest_point_sample(cover, config.seed_landmark);
  return truncate(lambda, alpha_insertion_radius(cover, order));
}

struct Sparsified {
  DowkerDissimilarity target;
  SparsificationPlan plan;
};

Sparsified sparsify(const RunConfig& config, const DowkerDissimilarity& lambda, std::ostream& err) {
  if (config.strategy == "sheehy") {
    if (!lambda.is_square()) throw InputError("strategy sheehy needs a square dissimilarity (L = W)");
    const TranslationFunction alpha = parse_translation(config.alpha);
    if (alpha.kind() != TranslationFunction::Kind::multiplicative) {
      throw InputError("strategy sheehy needs --alpha mult:C with C > 1");
    }
    const SampleOrder order = farthest_point_sample(lambda, config.seed_landmark);
    auto sheehy = sheehy_restriction(lambda, order, alpha.parameter());
    for (const auto& w : sheehy.warnings) err << "warning: " << w << "\n";
    const auto violation = validate_restriction(sheehy.truncated, sheehy.phi, sheehy.r);
    if (violation) {
      throw VerifyFailed("sheehy restriction is invalid at landmark " + lambda.landmark_ids()[violation->landmark] +
                         ": " + violation->message);
    }
    return {std::move(sheehy.truncated), make_plan(std::move(sheehy.phi), std::move(sheehy.r))};
  }

  DowkerDissimilarity target = prepared(config, lambda);
  if (config.strategy == "none") return {target, trivial_plan(target.landmark_count())};
  ParentFunction phi;
  RestrictionFunction r;
  if (config.strategy == "canonical") {
    phi = build_parent_function(target).phi;
    r = canonical_restriction(target, phi);
  } else if (config.strategy == "parent") {
    auto pr = parent_restriction(target, config.seed_landmark);
    phi = std::move(pr.phi);
    r = std::move(pr.r);
  } else {
    throw InputError("unknown strategy " + config.strategy);
  }
  const auto violation = validate_restriction(target, phi, r);
  if (violation) {
    throw VerifyFailed("restriction is invalid at landmark " + target.landmark_ids()[violation->landmark] + ": " +
                       violation->message);
  }
  return {std::move(target), make_plan(std::move(phi), std::move(r))};
}

std::string complex_text(const FilteredComplex& complex) {
  std::ostringstream out;
  write_complex(out, complex);
  return out.str();
}

std::filesystem::path out_path(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out);
  return std::filesystem::path(config.out) / name;
}

int cmd_nerve(const RunConfig& config, std::ostream& out) {
  const DowkerDissimilarity lambda = read_input(config);
  check_seed(config, lambda);
  const FilteredComplex complex = build_nerve(prepared(config, lambda), config.dim_cap, effective_budget(config));
  const auto path = out_path(config, "complex.csv");
  write_file_atomic(path, complex_text(complex));
  out << "wrote " << complex.simplices.size() << " simplices to " << path.string() << "\n";
  return kExitOk;
}

int cmd_sparsify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const DowkerDissimilarity lambda = read_input(config);
  check_seed(config, lambda);
  const std::size_t budget = effective_budget(config);
  const Sparsified s = sparsify(config, lambda, err);
  const FilteredComplex sparse = build_sparse_nerve(s.target, s.plan, config.dim_cap, budget);
  const FilteredComplex full = build_nerve(lambda, config.dim_cap, budget);

  std::ostringstream plan_text;
  write_plan(plan_text, s.plan);
  write_file_atomic(out_path(config, "plan.csv"), plan_text.str());
  write_file_atomic(out_path(config, "sparse_complex.csv"), complex_text(sparse));

  const double ratio = full.simplices.empty()
                           ? 1.0
                           : static_cast<double>(sparse.simplices.size()) / static_cast<double>(full.simplices.size());
  nlohmann::ordered_json stats;
  stats["n"] = lambda.landmark_count();
  stats["m"] = lambda.witness_count();
  stats["dim_cap"] = config.dim_cap;
  stats["full_simplices"] = full.simplices.size();
  stats["sparse_simplices"] = sparse.simplices.size();
  stats["ratio"] = ratio;
  stats["strategy"] = config.strategy;
  stats["translation"] = parse_translation(config.alpha).describe();
  write_file_atomic(out_path(config, "stats.json"), stats.dump(2) + "\n");
  out << "full " << full.simplices.size() << ", sparse " << sparse.simplices.size() << ", ratio " << ratio << "\n";
  return kExitOk;
}

int cmd_persist(const RunConfig& config, std::ostream& out, std::ostream& err) {
  FilteredComplex complex;
  if (config.format == "complex") {
    auto in = open_input(config.input);
    complex = read_complex(in, config.dim_cap_given ? std::optional<int>(config.dim_cap) : std::nullopt);
    check_complex(complex);
  } else {
    const DowkerDissimilarity lambda = read_input(config);
    check_seed(config, lambda);
    const Sparsified s = sparsify(config, lambda, err);
    complex = build_sparse_nerve(s.target, s.plan, config.dim_cap, effective_budget(config));
  }
  const PersistenceDiagram diagram = compute_diagram(complex);
  std::ostringstream text;
  write_diagram(text, diagram);
  const auto path = out_path(config, "diagram.csv");
  write_file_atomic(path, text.str());
  if (config.svg) write_file_atomic(out_path(config, "diagram.svg"), diagram_svg(diagram));
  out << "wrote " << diagram.classes.size() << " classes to " << path.string() << "\n";
  return kExitOk;
}

PersistenceDiagram read_diagram_file(const std::string& path) {
  auto in = open_input(path);
  return read_diagram(in);
}

int cmd_compare(const RunConfig& config, std::ostream& out) {
  const TranslationFunction alpha = parse_translation(config.alpha);
  const PersistenceDiagram first = read_diagram_file(config.first);
  const PersistenceDiagram second = read_diagram_file(config.second);
  const MatchingResult result = find_matching(first, second, alpha);
  if (!result.passed()) {
    const auto& f = *result.failure;
    out << "FAIL: class " << f.index << " [" << format_ext_real(f.interval.birth) << ", "
        << format_ext_real(f.interval.death) << ") in dimension " << f.interval.dimension << " of "
        << (f.side == 0 ? config.first : config.second) << " cannot be matched under " << alpha.describe() << "\n";
    return kExitVerifyFailed;
  }
  std::ostringstream text;
  write_matching(text, first, *result.certificate);
  write_file_atomic(out_path(config, "matching.csv"), text.str());
  out << "PASS: " << result.certificate->pairs.size() << " pairs under " << alpha.describe() << "\n";
  return kExitOk;
}

void add_pipeline_options(CLI::App* cmd, RunConfig& config, bool allow_complex) {
  std::vector<std::string> formats = {"points", "distances", "dowker"};
  if (allow_complex) formats.push_back("complex");
  cmd->add_option("--input", config.input, "input file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", config.format, "input format")->required()->check(CLI::IsMember(formats));
  cmd->add_option("--dim-cap", config.dim_cap, "largest simplex dimension")->check(CLI::Range(0, 16));
  cmd->add_option("--alpha", config.alpha, "translation: id, mult:C or add:E");
  cmd->add_flag("--truncate", config.truncate, "truncate by the alpha-insertion radius first");
  cmd->add_option("--seed-landmark", config.seed_landmark, "first landmark of the sample order");
  cmd->add_option("--budget", config.budget, "maximum number of simplices");
  cmd->add_option("--out", config.out, "output directory");
}

void add_strategy_option(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--strategy", config.strategy, "sparsification strategy")
      ->check(CLI::IsMember({"none", "canonical", "parent", "sheehy"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Filtered Dowker nerves, sparsification and persistence"};
  app.require_subcommand(1);

  auto* nerve = app.add_subcommand("nerve", "write complex.csv for the full Dowker nerve");
  add_pipeline_options(nerve, config, false);

  auto* sparsify_cmd = app.add_subcommand("sparsify", "write plan.csv, sparse_complex.csv and stats.json");
  add_pipeline_options(sparsify_cmd, config, false);
  add_strategy_option(sparsify_cmd, config);

  auto* persist = app.add_subcommand("persist", "write diagram.csv for a complex or a pipeline input");
  add_pipeline_options(persist, config, true);
  add_strategy_option(persist, config);
  persist->add_flag("--svg", config.svg, "also write diagram.svg");

  auto* compare = app.add_subcommand("compare", "match two diagrams under alpha and write matching.csv");
  compare->add_option("first", config.first, "first diagram")->required()->check(CLI::ExistingFile);
  compare->add_option("second", config.second, "second diagram")->required()->check(CLI::ExistingFile);
  compare->add_option("--alpha", config.alpha, "translation: id, mult:C or add:E");
  compare->add_option("--out", config.out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*nerve || *sparsify_cmd || *persist) {
      config.dim_cap_given = (nerve->count("--dim-cap") + sparsify_cmd->count("--dim-cap") +
                              persist->count("--dim-cap")) > 0;
      parse_translation(config.alpha);
    }
    if (*nerve) return cmd_nerve(config, out);
    if (*sparsify_cmd) return cmd_sparsify(config, out, err);
    if (*persist) return cmd_persist(config, out, err);
    return cmd_compare(config, out);
  } catch (const VerifyFailed& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace dowker::cli
