#include "dowker/translation.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace dowker {

namespace {

constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Smallest representable s >= 0 with f(s) >= t, for a non-decreasing f.
// Non-negative doubles are ordered like their bit patterns, so the answer
// is found by bisection on those patterns once an upper end is known.
template <class F>
ExtReal exact_inverse(F f, ExtReal t, double guess) {
  if (t.is_infinite()) return kInfinity;
  if (f(ExtReal()) >= t) return ExtReal();
  double hi = (std::isfinite(guess) && guess > 0.0) ? guess : std::numeric_limits<double>::min();
  while (f(ExtReal(hi)) < t) hi = std::isfinite(hi * 2) ? hi * 2 : kPosInf;
  std::uint64_t lo_bits = 0;  // f(0) < t
  std::uint64_t hi_bits = std::bit_cast<std::uint64_t>(hi);
  while (hi_bits - lo_bits > 1) {
    const std::uint64_t mid = lo_bits + (hi_bits - lo_bits) / 2;
    if (f(ExtReal(std::bit_cast<double>(mid))) >= t) {
      hi_bits = mid;
    } else {
      lo_bits = mid;
    }
  }
  return ExtReal(std::bit_cast<double>(hi_bits));
}

void require_finite_non_negative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw InputError(std::string(what) + " must be finite and non-negative");
  }
}

}  // namespace

MonotoneMap MonotoneMap::linear(double slope, double intercept) {
  require_finite_non_negative(slope, "slope");
  require_finite_non_negative(intercept, "intercept");
  return MonotoneMap(slope, intercept);
}

ExtReal MonotoneMap::operator()(ExtReal t) const {
  return t.scaled(slope_) + ExtReal(intercept_);
}

ExtReal generalized_inverse(const MonotoneMap& beta, ExtReal t) {
  if (!beta.coercive()) {
    throw InputError("generalized inverse requires an unbounded map (slope > 0)");
  }
  return exact_inverse([&](ExtReal s) { return beta(s); }, t,
                       (t.value() - beta.intercept()) / beta.slope());
}

ExtReal TranslationFunction::Stage::apply(ExtReal t) const {
  switch (kind) {
    case Kind::multiplicative:
      return t.scaled(scale);
    case Kind::additive:
      return t + ExtReal(offset);
    case Kind::id_plus_beta:
      return t + (t.scaled(scale) + ExtReal(offset));
    default:
      return t;
  }
}

ExtReal TranslationFunction::Stage::inverse(ExtReal t) const {
  double slope = 1.0;
  double intercept = 0.0;
  switch (kind) {
    case Kind::multiplicative:
      slope = scale;
      break;
    case Kind::additive:
      intercept = offset;
      break;
    case Kind::id_plus_beta:
      slope = 1.0 + scale;
      intercept = offset;
      break;
    default:
      return t;
  }
  return exact_inverse([this](ExtReal s) { return apply(s); }, t, (t.value() - intercept) / slope);
}

TranslationFunction TranslationFunction::identity() { return TranslationFunction(); }

TranslationFunction TranslationFunction::multiplicative(double c) {
  if (!std::isfinite(c) || c < 1.0) throw InputError("multiplicative translation needs c >= 1");
  TranslationFunction f;
  if (c != 1.0) f.stages_.push_back({Kind::multiplicative, c, 0.0});
  return f;
}

TranslationFunction TranslationFunction::additive(double eps) {
  require_finite_non_negative(eps, "additive translation offset");
  TranslationFunction f;
  if (eps != 0.0) f.stages_.push_back({Kind::additive, 1.0, eps});
  return f;
}

TranslationFunction TranslationFunction::id_plus_beta(const MonotoneMap& beta) {
  TranslationFunction f;
  if (beta.slope() != 0.0 || beta.intercept() != 0.0) {
    f.stages_.push_back({Kind::id_plus_beta, beta.slope(), beta.intercept()});
  }
  return f;
}

TranslationFunction::Kind TranslationFunction::kind() const {
  if (stages_.empty()) return Kind::identity;
  if (stages_.size() == 1) return stages_.front().kind;
  return Kind::composite;
}

double TranslationFunction::parameter() const {
  switch (kind()) {
    case Kind::identity:
      return 1.0;
    case Kind::multiplicative:
      return stages_.front().scale;
    case Kind::additive:
      return stages_.front().offset;
    default:
      throw InputError("translation " + describe() + " has no single parameter");
  }
}

std::string TranslationFunction::describe() const {
  if (stages_.empty()) return "id";
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    if (i) out << ">";
    const Stage& s = stages_[i];
    switch (s.kind) {
      case Kind::multiplicative:
        out << "mult:" << s.scale;
        break;
      case Kind::additive:
        out << "add:" << s.offset;
        break;
      default:
        out << "id+lin:" << s.scale << ":" << s.offset;
        break;
    }
  }
  return out.str();
}

ExtReal TranslationFunction::operator()(ExtReal t) const {
  for (const Stage& s : stages_) t = s.apply(t);
  return t;
}

ExtReal TranslationFunction::inverse(ExtReal t) const {
  // (a_k o ... o a_1)^<- = a_1^<- o ... o a_k^<-; each stage adjunction is exact.
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) t = it->inverse(t);
  return t;
}

TranslationFunction compose(const TranslationFunction& first, const TranslationFunction& second) {
  TranslationFunction f = first;
  f.stages_.insert(f.stages_.end(), second.stages_.begin(), second.stages_.end());
  return f;
}

TranslationFunction parse_translation(const std::string& text) {
  if (text == "id") return TranslationFunction::identity();
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InputError("translation must be id, mult:C or add:E, got '" + text + "'");
  }
  const std::string head = text.substr(0, colon);
  const std::string tail = text.substr(colon + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), value);
  if (ec != std::errc() || ptr != tail.data() + tail.size()) {
    throw InputError("invalid translation parameter '" + tail + "'");
  }
  if (head == "mult") return TranslationFunction::multiplicative(value);
  if (head == "add") return TranslationFunction::additive(value);
  throw InputError("unknown translation kind '" + head + "'");
}

}  // namespace dowker
