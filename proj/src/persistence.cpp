#include "dowker/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace dowker {

namespace {

std::string describe(const Simplex& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.vertices().size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.vertices()[i]);
  }
  return out + "}";
}

using Column = std::vector<std::uint32_t>;

// Simplex positions in filtration order plus the boundary columns.
struct BoundaryMatrix {
  std::vector<const FilteredSimplex*> order;
  std::vector<Column> columns;
};

BoundaryMatrix boundary_matrix(const FilteredComplex& complex) {
  BoundaryMatrix m;
  m.order.reserve(complex.simplices.size());
  for (const auto& s : complex.simplices) {
    if (s.simplex.size() == 0) throw InputError("complex contains an empty simplex");
    if (s.simplex.dimension() > complex.dim_cap) {
      throw InputError("simplex " + describe(s.simplex) + " exceeds dim_cap " + std::to_string(complex.dim_cap));
    }
    if (s.value.is_infinite()) throw InputError("simplex " + describe(s.simplex) + " has infinite value");
    m.order.push_back(&s);
  }
  std::stable_sort(m.order.begin(), m.order.end(),
                   [](const FilteredSimplex* a, const FilteredSimplex* b) { return filtration_less(*a, *b); });

  std::unordered_map<Simplex, std::uint32_t, SimplexHash> index;
  index.reserve(m.order.size());
  for (std::uint32_t i = 0; i < m.order.size(); ++i) {
    if (!index.emplace(m.order[i]->simplex, i).second) {
      throw InputError("simplex " + describe(m.order[i]->simplex) + " is listed twice");
    }
  }

  m.columns.resize(m.order.size());
  for (std::uint32_t j = 0; j < m.order.size(); ++j) {
    const FilteredSimplex& s = *m.order[j];
    for (const Simplex& face : s.simplex.facets()) {
      const auto it = index.find(face);
      if (it == index.end()) {
        throw InputError("face " + describe(face) + " of " + describe(s.simplex) + " is missing");
      }
      if (m.order[it->second]->value > s.value) {
        throw InputError("face " + describe(face) + " of " + describe(s.simplex) + " enters later");
      }
      m.columns[j].push_back(it->second);
    }
    std::sort(m.columns[j].begin(), m.columns[j].end());
  }
  return m;
}

// a ^= b for sorted index lists.
void add_column(Column& a, const Column& b, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

}  // namespace

std::vector<PersistenceClass> PersistenceDiagram::in_dimension(int dimension) const {
  std::vector<PersistenceClass> out;
  for (const auto& c : classes) {
    if (c.dimension == dimension) out.push_back(c);
  }
  return out;
}

std::size_t PersistenceDiagram::alive_at(ExtReal t, int dimension) const {
  return static_cast<std::size_t>(std::count_if(classes.begin(), classes.end(), [&](const auto& c) {
    return c.dimension == dimension && c.birth < t && t <= c.death;
  }));
}

void normalize(PersistenceDiagram& diagram) { std::sort(diagram.classes.begin(), diagram.classes.end()); }

void check_complex(const FilteredComplex& complex) { boundary_matrix(complex); }

PersistenceDiagram compute_diagram(const FilteredComplex& complex) {
  BoundaryMatrix m = boundary_matrix(complex);
  const std::size_t count = m.order.size();
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> pivot_owner(count, kNone);  // row -> reducing column
  std::vector<bool> paired(count, false);
  PersistenceDiagram diagram;
  Column scratch;

  for (std::uint32_t j = 0; j < count; ++j) {
    Column& col = m.columns[j];
    while (!col.empty() && pivot_owner[col.back()] != kNone) {
      add_column(col, m.columns[pivot_owner[col.back()]], scratch);
    }
    if (col.empty()) {
      Column().swap(col);
      continue;
    }
    const std::uint32_t low = col.back();
    pivot_owner[low] = j;
    paired[low] = true;
    paired[j] = true;
    const FilteredSimplex& creator = *m.order[low];
    const FilteredSimplex& destroyer = *m.order[j];
    if (creator.value < destroyer.value) {
      diagram.classes.push_back({creator.simplex.dimension(), creator.value, destroyer.value});
    }
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    const FilteredSimplex& s = *m.order[i];
    if (!paired[i] && s.simplex.dimension() < complex.dim_cap) {
      diagram.classes.push_back({s.simplex.dimension(), s.value, kInfinity});
    }
  }
  normalize(diagram);
  return diagram;
}

namespace {

// Rank over the two-element field by row-wise Gaussian elimination of a
// dense bit matrix; columns are the k-simplices, rows the (k-1)-simplices.
std::size_t boundary_rank(const std::vector<std::vector<std::size_t>>& columns, std::size_t rows) {
  const std::size_t words = (rows + 63) / 64;
  std::vector<std::vector<std::uint64_t>> bits(columns.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r : columns[c]) bits[c][r / 64] ^= std::uint64_t{1} << (r % 64);
  }
  std::size_t rank = 0;
  for (std::size_t r = 0; r < rows && rank < bits.size(); ++r) {
    const std::size_t word = r / 64;
    const std::uint64_t mask = std::uint64_t{1} << (r % 64);
    std::size_t pick = rank;
    while (pick < bits.size() && !(bits[pick][word] & mask)) ++pick;
    if (pick == bits.size()) continue;
    std::swap(bits[rank], bits[pick]);
    for (std::size_t c = 0; c < bits.size(); ++c) {
      if (c != rank && (bits[c][word] & mask)) {
        for (std::size_t k = 0; k < words; ++k) bits[c][k] ^= bits[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

std::size_t boundary_rank_of(const std::vector<const Simplex*>& simplices, const std::vector<const Simplex*>& faces) {
  if (simplices.empty() || faces.empty()) return 0;
  std::unordered_map<Simplex, std::size_t, SimplexHash> row;
  for (std::size_t i = 0; i < faces.size(); ++i) row.emplace(*faces[i], i);
  std::vector<std::vector<std::size_t>> columns;
  columns.reserve(simplices.size());
  for (const Simplex* s : simplices) {
    std::vector<std::size_t> col;
    for (const Simplex& f : s->facets()) {
      const auto it = row.find(f);
      if (it == row.end()) throw InputError("face " + describe(f) + " missing from sublevel complex");
      col.push_back(it->second);
    }
    columns.push_back(std::move(col));
  }
  return boundary_rank(columns, faces.size());
}

}  // namespace

std::size_t betti_at(const FilteredComplex& complex, ExtReal t, int dimension) {
  if (dimension < 0 || dimension >= complex.dim_cap) {
    throw InputError("betti_at needs 0 <= dimension < dim_cap");
  }
  std::vector<std::vector<const Simplex*>> by_dim(static_cast<std::size_t>(dimension) + 2);
  for (const auto& s : complex.simplices) {
    const int d = s.simplex.dimension();
    if (s.value < t && d <= dimension + 1) by_dim[static_cast<std::size_t>(d)].push_back(&s.simplex);
  }
  const auto k = static_cast<std::size_t>(dimension);
  const std::size_t cycles = by_dim[k].size() - (k == 0 ? 0 : boundary_rank_of(by_dim[k], by_dim[k - 1]));
  return cycles - boundary_rank_of(by_dim[k + 1], by_dim[k]);
}

}  // namespace dowker
