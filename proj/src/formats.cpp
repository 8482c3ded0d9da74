#include "dowker/formats.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace dowker {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : InputError("line " + std::to_string(line) + (column ? ", column " + std::to_string(column) : "") + ": " +
                 what),
      line_(line),
      column_(column) {}

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Non-blank lines with their 1-based line numbers.
std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!trim(text).empty()) lines.push_back({number, std::string(trim(text))});
  }
  if (lines.empty()) throw ParseError(1, 0, "empty input");
  return lines;
}

std::vector<std::string_view> split(std::string_view s, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delimiter, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text, const Line& line, std::size_t column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line.number, column, "invalid number '" + std::string(text) + "'");
  }
  return v;
}

ExtReal parse_value(std::string_view text, const Line& line, std::size_t column) {
  try {
    return parse_ext_real(text);
  } catch (const InputError& e) {
    throw ParseError(line.number, column, e.what());
  }
}

std::size_t parse_index(std::string_view text, const Line& line, std::size_t column) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line.number, column, "invalid index '" + std::string(text) + "'");
  }
  return v;
}

void expect_header(const Line& line, std::string_view header) {
  if (line.text != header) {
    throw ParseError(line.number, 0, "expected header '" + std::string(header) + "'");
  }
}

std::string join_vertices(const Simplex& s) {
  std::string out;
  for (std::size_t i = 0; i < s.vertices().size(); ++i) {
    if (i) out += '|';
    out += std::to_string(s.vertices()[i]);
  }
  return out;
}

}  // namespace

std::string format_ext_real(ExtReal v) {
  if (v.is_infinite()) return "inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v.value());
  return std::string(buf, ptr);
}

ExtReal parse_ext_real(std::string_view text) {
  text = trim(text);
  if (text == "inf") return kInfinity;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InputError("invalid value '" + std::string(text) + "'");
  }
  return ExtReal(v);
}

std::vector<std::vector<double>> read_points(std::istream& in) {
  std::vector<std::vector<double>> points;
  for (const Line& line : read_lines(in)) {
    const auto cells = split(line.text, ',');
    std::vector<double> p;
    for (std::size_t c = 0; c < cells.size(); ++c) p.push_back(parse_double(cells[c], line, c + 1));
    if (!points.empty() && p.size() != points.front().size()) {
      throw ParseError(line.number, 0, "point has " + std::to_string(p.size()) + " coordinates, expected " +
                                           std::to_string(points.front().size()));
    }
    points.push_back(std::move(p));
  }
  return points;
}

DowkerDissimilarity read_distance_matrix(std::istream& in) {
  const auto lines = read_lines(in);
  std::vector<std::vector<ExtReal>> matrix;
  for (const Line& line : lines) {
    const auto cells = split(line.text, ',');
    if (cells.size() != lines.size()) {
      throw ParseError(line.number, 0, "row has " + std::to_string(cells.size()) + " entries, expected " +
                                           std::to_string(lines.size()));
    }
    std::vector<ExtReal> row;
    for (std::size_t c = 0; c < cells.size(); ++c) row.push_back(parse_value(cells[c], line, c + 1));
    matrix.push_back(std::move(row));
  }
  return from_distance_matrix(matrix);
}

DowkerDissimilarity read_dowker(std::istream& in) {
  const auto lines = read_lines(in);
  const auto header = split(lines.front().text, ',');
  if (header.size() < 2) throw ParseError(lines.front().number, 0, "header needs at least one witness id");
  std::vector<std::string> witnesses(header.begin() + 1, header.end());
  if (lines.size() < 2) throw ParseError(lines.front().number + 1, 0, "no landmark rows");

  std::vector<std::string> landmarks;
  std::vector<ExtReal> values;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto cells = split(line.text, ',');
    if (cells.size() != header.size()) {
      throw ParseError(line.number, 0, "row has " + std::to_string(cells.size()) + " cells, expected " +
                                           std::to_string(header.size()));
    }
    landmarks.emplace_back(cells.front());
    for (std::size_t c = 1; c < cells.size(); ++c) values.push_back(parse_value(cells[c], line, c + 1));
  }
  return DowkerDissimilarity(std::move(landmarks), std::move(witnesses), std::move(values));
}

void write_dowker(std::ostream& out, const DowkerDissimilarity& lambda) {
  out << "landmark";
  for (const auto& w : lambda.witness_ids()) out << ',' << w;
  out << '\n';
  for (std::size_t l = 0; l < lambda.landmark_count(); ++l) {
    out << lambda.landmark_ids()[l];
    for (ExtReal v : lambda.row(l)) out << ',' << format_ext_real(v);
    out << '\n';
  }
}

void write_complex(std::ostream& out, const FilteredComplex& complex) {
  for (const auto& s : complex.simplices) out << join_vertices(s.simplex) << ';' << format_ext_real(s.value) << '\n';
}

FilteredComplex read_complex(std::istream& in, std::optional<int> dim_cap) {
  FilteredComplex complex;
  int top = 0;
  for (const Line& line : read_lines(in)) {
    const auto parts = split(line.text, ';');
    if (parts.size() != 2) throw ParseError(line.number, 0, "expected 'vertices;value'");
    std::vector<Vertex> vertices;
    for (const auto cell : split(parts[0], '|')) {
      const std::size_t v = parse_index(cell, line, 1);
      if (v > UINT32_MAX) throw ParseError(line.number, 1, "vertex index too large");
      vertices.push_back(static_cast<Vertex>(v));
    }
    try {
      complex.simplices.push_back({Simplex(std::move(vertices)), parse_value(parts[1], line, 2)});
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(line.number, 1, e.what());
    }
    top = std::max(top, complex.simplices.back().simplex.dimension());
  }
  complex.dim_cap = dim_cap.value_or(top);
  return complex;
}

void write_diagram(std::ostream& out, const PersistenceDiagram& diagram) {
  PersistenceDiagram sorted = diagram;
  normalize(sorted);
  out << "dimension,birth,death\n";
  for (const auto& c : sorted.classes) {
    out << c.dimension << ',' << format_ext_real(c.birth) << ',' << format_ext_real(c.death) << '\n';
  }
}

PersistenceDiagram read_diagram(std::istream& in) {
  const auto lines = read_lines(in);
  expect_header(lines.front(), "dimension,birth,death");
  PersistenceDiagram diagram;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto cells = split(line.text, ',');
    if (cells.size() != 3) throw ParseError(line.number, 0, "expected 3 cells");
    const std::size_t dim = parse_index(cells[0], line, 1);
    const ExtReal birth = parse_value(cells[1], line, 2);
    const ExtReal death = parse_value(cells[2], line, 3);
    if (!(birth < death)) throw ParseError(line.number, 3, "death must exceed birth");
    diagram.classes.push_back({static_cast<int>(dim), birth, death});
  }
  return diagram;
}

void write_plan(std::ostream& out, const SparsificationPlan& plan) {
  out << "landmark,parent,restriction,slope\n";
  for (std::size_t l = 0; l < plan.phi.parent.size(); ++l) {
    out << l << ',' << plan.phi.parent[l] << ',' << format_ext_real(plan.r.bound[l]) << ','
        << (plan.slope[l] ? 1 : 0) << '\n';
  }
}

SparsificationPlan read_plan(std::istream& in) {
  const auto lines = read_lines(in);
  expect_header(lines.front(), "landmark,parent,restriction,slope");
  const std::size_t n = lines.size() - 1;
  ParentFunction phi{std::vector<std::size_t>(n)};
  RestrictionFunction r{std::vector<ExtReal>(n)};
  std::vector<int> slope(n, -1);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto cells = split(line.text, ',');
    if (cells.size() != 4) throw ParseError(line.number, 0, "expected 4 cells");
    const std::size_t l = parse_index(cells[0], line, 1);
    if (l >= n || seen[l]) throw ParseError(line.number, 1, "landmark index out of range or repeated");
    seen[l] = true;
    phi.parent[l] = parse_index(cells[1], line, 2);
    if (phi.parent[l] >= n) throw ParseError(line.number, 2, "parent index out of range");
    r.bound[l] = parse_value(cells[2], line, 3);
    if (cells[3] != "0" && cells[3] != "1") throw ParseError(line.number, 4, "slope must be 0 or 1");
    slope[l] = cells[3] == "1";
  }
  SparsificationPlan plan = make_plan(std::move(phi), std::move(r));
  for (std::size_t l = 0; l < n; ++l) {
    if (static_cast<bool>(slope[l]) != plan.slope[l]) {
      throw ParseError(lines[1].number + l, 4, "slope flag of landmark " + std::to_string(l) +
                                                   " disagrees with parent and restriction");
    }
  }
  return plan;
}

void write_matching(std::ostream& out, const PersistenceDiagram& first, const MatchingCertificate& certificate) {
  out << "dimension,index_a,index_b\n";
  for (const auto& [a, b] : certificate.pairs) out << first.classes[a].dimension << ',' << a << ',' << b << '\n';
}

std::string diagram_svg(const PersistenceDiagram& diagram) {
  constexpr double kSize = 400.0;
  constexpr double kMargin = 30.0;
  double top = 0.0;
  for (const auto& c : diagram.classes) {
    top = std::max(top, c.birth.value());
    if (c.death.is_finite()) top = std::max(top, c.death.value());
  }
  if (top == 0.0) top = 1.0;
  const double span = kSize - 2 * kMargin;
  const auto x_of = [&](ExtReal v) { return kMargin + span * v.value() / (top * 1.1); };
  const auto y_of = [&](ExtReal v) {
    return kSize - (v.is_infinite() ? kMargin : kMargin + span * v.value() / (top * 1.1));
  };
  static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kSize - kMargin << "\" x2=\"" << kSize - kMargin << "\" y2=\""
      << kMargin << "\" stroke=\"#999\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kSize - kMargin << "\" y2=\"" << kMargin
      << "\" stroke=\"#ccc\" stroke-dasharray=\"4\"/>\n";
  for (const auto& c : diagram.classes) {
    const char* color = kColors[static_cast<std::size_t>(c.dimension) % 4];
    const double x = x_of(c.birth);
    const double y = y_of(c.death);
    if (c.dimension == 0) {
      svg << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    } else {
      svg << "<rect x=\"" << x - 3 << "\" y=\"" << y - 3 << "\" width=\"6\" height=\"6\" fill=\"" << color
          << "\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace dowker
