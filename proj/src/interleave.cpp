#include "dowker/interleave.hpp"

#include <algorithm>
#include <set>

namespace dowker {

bool alpha_trivial(ExtReal birth, ExtReal death, const TranslationFunction& alpha) {
  return death <= alpha(birth);
}

bool matchable(const PersistenceClass& x, const PersistenceClass& xp, const TranslationFunction& alpha) {
  return x.dimension == xp.dimension && xp.birth <= x.birth && x.birth < xp.death && xp.death <= x.death &&
         x.birth <= alpha(xp.birth) && alpha.inverse(x.death) <= xp.death;
}

namespace {

constexpr std::size_t kFree = static_cast<std::size_t>(-1);

// Bipartite search over one dimension. Left vertices come from the first
// diagram, right vertices from the second.
class DimensionMatcher {
 public:
  DimensionMatcher(std::vector<std::vector<std::size_t>> left_adj, std::vector<bool> left_required,
                   std::vector<bool> right_required)
      : left_adj_(std::move(left_adj)),
        right_adj_(right_required.size()),
        left_required_(std::move(left_required)),
        right_required_(std::move(right_required)),
        match_left_(left_adj_.size(), kFree),
        match_right_(right_required_.size(), kFree) {
    for (std::size_t u = 0; u < left_adj_.size(); ++u) {
      for (std::size_t v : left_adj_[u]) right_adj_[v].push_back(u);
    }
  }

  /// Returns the unmatched required vertex on failure.
  std::optional<std::pair<int, std::size_t>> run() {
    // Cover required left vertices with ordinary augmenting paths; matched
    // vertices stay matched under augmentation.
    for (std::size_t u = 0; u < left_adj_.size(); ++u) {
      if (!left_required_[u]) continue;
      seen_.assign(right_required_.size(), false);
      if (!augment_from_left(u)) return std::make_pair(0, u);
    }
    // Cover required right vertices by alternating paths that end at a free
    // left vertex or release a right vertex that is not required. Every left
    // vertex on such a path stays matched.
    for (std::size_t v = 0; v < right_required_.size(); ++v) {
      if (!right_required_[v] || match_right_[v] != kFree) continue;
      seen_.assign(left_adj_.size(), false);
      if (!augment_from_right(v)) return std::make_pair(1, v);
    }
    return std::nullopt;
  }

  const std::vector<std::size_t>& match_left() const { return match_left_; }

 private:
  bool augment_from_left(std::size_t u) {
    for (std::size_t v : left_adj_[u]) {
      if (seen_[v]) continue;
      seen_[v] = true;
      if (match_right_[v] == kFree || augment_from_left(match_right_[v])) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    return false;
  }

  bool augment_from_right(std::size_t v) {
    for (std::size_t u : right_adj_[v]) {
      if (seen_[u]) continue;
      seen_[u] = true;
      const std::size_t partner = match_left_[u];
      if (partner == kFree) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
      if (!right_required_[partner]) {
        match_right_[partner] = kFree;
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
      if (augment_from_right(partner)) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> left_adj_;
  std::vector<std::vector<std::size_t>> right_adj_;
  std::vector<bool> left_required_;
  std::vector<bool> right_required_;
  std::vector<std::size_t> match_left_;
  std::vector<std::size_t> match_right_;
  std::vector<bool> seen_;
};

}  // namespace

MatchingResult find_matching(const PersistenceDiagram& first, const PersistenceDiagram& second,
                             const TranslationFunction& alpha) {
  if (!alpha.invertible()) throw InputError("matching needs an invertible translation");
  std::set<int> dimensions;
  for (const auto& c : first.classes) dimensions.insert(c.dimension);
  for (const auto& c : second.classes) dimensions.insert(c.dimension);

  MatchingCertificate certificate;
  for (int dim : dimensions) {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i = 0; i < first.classes.size(); ++i) {
      if (first.classes[i].dimension == dim) left.push_back(i);
    }
    for (std::size_t i = 0; i < second.classes.size(); ++i) {
      if (second.classes[i].dimension == dim) right.push_back(i);
    }
    std::vector<std::vector<std::size_t>> adj(left.size());
    std::vector<bool> left_required(left.size());
    std::vector<bool> right_required(right.size());
    for (std::size_t u = 0; u < left.size(); ++u) {
      const auto& x = first.classes[left[u]];
      left_required[u] = !alpha_trivial(x.birth, x.death, alpha);
      for (std::size_t v = 0; v < right.size(); ++v) {
        if (matchable(x, second.classes[right[v]], alpha)) adj[u].push_back(v);
      }
    }
    for (std::size_t v = 0; v < right.size(); ++v) {
      const auto& xp = second.classes[right[v]];
      right_required[v] = !alpha_trivial(xp.birth, xp.death, alpha);
    }

    DimensionMatcher matcher(std::move(adj), std::move(left_required), std::move(right_required));
    if (const auto missing = matcher.run()) {
      const auto [side, local] = *missing;
      const std::size_t index = side == 0 ? left[local] : right[local];
      const PersistenceClass& interval = side == 0 ? first.classes[index] : second.classes[index];
      return MatchingResult{std::nullopt, UnmatchedClass{side, index, interval}};
    }
    std::vector<bool> right_used(right.size(), false);
    for (std::size_t u = 0; u < left.size(); ++u) {
      const std::size_t v = matcher.match_left()[u];
      if (v == kFree) {
        certificate.unmatched_first.push_back(left[u]);
      } else {
        certificate.pairs.emplace_back(left[u], right[v]);
        right_used[v] = true;
      }
    }
    for (std::size_t v = 0; v < right.size(); ++v) {
      if (!right_used[v]) certificate.unmatched_second.push_back(right[v]);
    }
  }
  std::sort(certificate.pairs.begin(), certificate.pairs.end());
  std::sort(certificate.unmatched_first.begin(), certificate.unmatched_first.end());
  std::sort(certificate.unmatched_second.begin(), certificate.unmatched_second.end());
  return MatchingResult{std::move(certificate), std::nullopt};
}

bool verify_certificate(const PersistenceDiagram& first, const PersistenceDiagram& second,
                        const TranslationFunction& alpha, const MatchingCertificate& certificate) {
  std::vector<int> used_first(first.classes.size(), 0);
  std::vector<int> used_second(second.classes.size(), 0);
  for (const auto& [a, b] : certificate.pairs) {
    if (a >= first.classes.size() || b >= second.classes.size()) return false;
    if (++used_first[a] > 1 || ++used_second[b] > 1) return false;
    if (!matchable(first.classes[a], second.classes[b], alpha)) return false;
  }
  for (std::size_t i = 0; i < first.classes.size(); ++i) {
    const auto& c = first.classes[i];
    if (!used_first[i] && !alpha_trivial(c.birth, c.death, alpha)) return false;
  }
  for (std::size_t i = 0; i < second.classes.size(); ++i) {
    const auto& c = second.classes[i];
    if (!used_second[i] && !alpha_trivial(c.birth, c.death, alpha)) return false;
  }
  return true;
}

}  // namespace dowker
