#pragma once

#include <string>
#include <vector>

#include "dowker/ext_real.hpp"

namespace dowker {

/// Order preserving map beta(t) = slope * t + intercept on [0, inf].
class MonotoneMap {
 public:
  static MonotoneMap linear(double slope, double intercept = 0.0);

  double slope() const { return slope_; }
  double intercept() const { return intercept_; }

  /// beta(t) tends to infinity; required for a generalized inverse.
  bool coercive() const { return slope_ > 0.0; }

  ExtReal operator()(ExtReal t) const;

 private:
  MonotoneMap(double slope, double intercept) : slope_(slope), intercept_(intercept) {}
  double slope_;
  double intercept_;
};

/// inf{ s >= 0 : beta(s) >= t }, computed against the floating point
/// evaluation of beta so that beta_inv(t) <= s  <=>  t <= beta(s) holds
/// exactly for every representable s. beta_inv(inf) = inf.
/// Throws InputError if beta is bounded.
ExtReal generalized_inverse(const MonotoneMap& beta, ExtReal t);

/// Order preserving alpha with alpha(t) >= t and alpha(inf) = inf.
///
/// A translation is a chain of primitive stages evaluated left to right.
/// Primitive translations have one stage, the identity has none, and
/// composition concatenates chains, so a composite evaluates exactly as
/// the sequential application of its parts.
class TranslationFunction {
 public:
  enum class Kind { identity, multiplicative, additive, id_plus_beta, composite };

  static TranslationFunction identity();
  /// alpha(t) = c t, c >= 1.
  static TranslationFunction multiplicative(double c);
  /// alpha(t) = t + eps, eps >= 0.
  static TranslationFunction additive(double eps);
  /// alpha(t) = t + beta(t).
  static TranslationFunction id_plus_beta(const MonotoneMap& beta);

  Kind kind() const;
  /// Parameter of a single-stage multiplicative or additive translation.
  double parameter() const;
  std::string describe() const;

  ExtReal operator()(ExtReal t) const;

  /// Generalized inverse alpha_inv(t) = inf{ s : alpha(s) >= t }.
  ExtReal inverse(ExtReal t) const;

  /// Translations here are affine with positive slope, hence invertible.
  bool invertible() const { return true; }

  friend TranslationFunction compose(const TranslationFunction& first,
                                     const TranslationFunction& second);

 private:
  struct Stage {
    Kind kind;
    double scale;   // multiplicative factor, or slope of beta
    double offset;  // additive constant, or intercept of beta
    ExtReal apply(ExtReal t) const;
    ExtReal inverse(ExtReal t) const;
  };
  std::vector<Stage> stages_;
};

/// The translation t -> second(first(t)).
TranslationFunction compose(const TranslationFunction& first, const TranslationFunction& second);

/// Parses "id", "mult:C" or "add:E".
TranslationFunction parse_translation(const std::string& text);

}  // namespace dowker
