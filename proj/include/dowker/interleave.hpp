#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dowker/persistence.hpp"
#include "dowker/translation.hpp"

namespace dowker {

/// A class [b, d) vanishes under alpha when d <= alpha(b).
bool alpha_trivial(ExtReal birth, ExtReal death, const TranslationFunction& alpha);

/// Whether x = [b, d) from the first diagram may be matched to
/// x' = [b', d') from the second: b' <= b < d' <= d, b <= alpha(b'),
/// alpha_inv(d) <= d', and equal dimensions.
bool matchable(const PersistenceClass& x, const PersistenceClass& xp, const TranslationFunction& alpha);

/// Indices refer to positions in the `classes` vectors of the two diagrams.
struct MatchingCertificate {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched_first;   // all alpha-trivial
  std::vector<std::size_t> unmatched_second;  // all alpha-trivial
};

struct UnmatchedClass {
  int side;  // 0: first diagram, 1: second diagram
  std::size_t index;
  PersistenceClass interval;
};

struct MatchingResult {
  std::optional<MatchingCertificate> certificate;
  std::optional<UnmatchedClass> failure;
  bool passed() const { return certificate.has_value(); }
};

/// Searches, per dimension, for a matching of compatible classes that
/// covers every alpha-nontrivial class of both diagrams. Succeeds iff one
/// exists.
MatchingResult find_matching(const PersistenceDiagram& first, const PersistenceDiagram& second,
                             const TranslationFunction& alpha);

/// Independent re-check of a certificate: injective, compatible pairs, and
/// every other class alpha-trivial.
bool verify_certificate(const PersistenceDiagram& first, const PersistenceDiagram& second,
                        const TranslationFunction& alpha, const MatchingCertificate& certificate);

}  // namespace dowker
