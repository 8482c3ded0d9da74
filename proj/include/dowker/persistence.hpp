#pragma once

#include <cstddef>
#include <vector>

#include "dowker/ext_real.hpp"
#include "dowker/nerve.hpp"

namespace dowker {

struct PersistenceClass {
  int dimension = 0;
  ExtReal birth;
  ExtReal death;  // inf for essential classes

  friend bool operator==(const PersistenceClass&, const PersistenceClass&) = default;
  friend auto operator<=>(const PersistenceClass&, const PersistenceClass&) = default;
};

/// Intervals [birth, death) per homological degree, sorted by
/// (dimension, birth, death). Zero-length intervals are never listed.
struct PersistenceDiagram {
  std::vector<PersistenceClass> classes;

  std::vector<PersistenceClass> in_dimension(int dimension) const;
  /// Classes alive on the sublevel complex {value < t}: birth < t <= death.
  std::size_t alive_at(ExtReal t, int dimension) const;

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Sorts classes into canonical order, which makes == multiset equality.
void normalize(PersistenceDiagram& diagram);

/// Throws InputError naming the offending pair if a face is missing, comes
/// later in the filtration, or a simplex exceeds dim_cap.
void check_complex(const FilteredComplex& complex);

/// Column reduction of the boundary matrix over the two-element field.
/// Essential classes are reported in degrees below dim_cap only.
PersistenceDiagram compute_diagram(const FilteredComplex& complex);

/// Rank of degree-`dimension` homology of {sigma : value(sigma) < t}, by
/// Gaussian elimination of the boundary matrices of that subcomplex.
/// Requires dimension < dim_cap.
std::size_t betti_at(const FilteredComplex& complex, ExtReal t, int dimension);

}  // namespace dowker
