#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dowker/dissimilarity.hpp"
#include "dowker/interleave.hpp"
#include "dowker/nerve.hpp"
#include "dowker/persistence.hpp"

namespace dowker {

/// Malformed text input; the message carries line (and column when known).
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Shortest decimal that parses back to the same double; "inf" for infinity.
std::string format_ext_real(ExtReal v);
/// Accepts decimals and "inf"; throws InputError otherwise.
ExtReal parse_ext_real(std::string_view text);

// Point cloud: one point per row, comma separated, no header.
std::vector<std::vector<double>> read_points(std::istream& in);
// Square matrix of decimals or inf, no header.
DowkerDissimilarity read_distance_matrix(std::istream& in);
// First row: a corner cell (ignored) then witness ids; each further row:
// landmark id then one value per witness.
DowkerDissimilarity read_dowker(std::istream& in);
void write_dowker(std::ostream& out, const DowkerDissimilarity& lambda);

// One "v0|v1|...;value" row per simplex, in filtration order.
void write_complex(std::ostream& out, const FilteredComplex& complex);
/// dim_cap defaults to the largest dimension present.
FilteredComplex read_complex(std::istream& in, std::optional<int> dim_cap = std::nullopt);

// Header "dimension,birth,death", rows sorted by (dimension, birth, death).
void write_diagram(std::ostream& out, const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram(std::istream& in);

// Header "landmark,parent,restriction,slope".
void write_plan(std::ostream& out, const SparsificationPlan& plan);
SparsificationPlan read_plan(std::istream& in);

// Header "dimension,index_a,index_b"; indices are data-row positions in the
// two diagram files.
void write_matching(std::ostream& out, const PersistenceDiagram& first, const MatchingCertificate& certificate);

/// Scatter plot of births against deaths, one marker shape per dimension.
std::string diagram_svg(const PersistenceDiagram& diagram);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace dowker
