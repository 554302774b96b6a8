#include "parabmo/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace pbmo {

namespace {

void put(std::ostream& os, double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v,
                               std::chars_format::general, 17);
  os.write(buf, r.ptr - buf);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw ParameterError("malformed number in field file: " + s);
  return v;
}

std::size_t parse_size(const std::string& s) {
  std::size_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw ParameterError("malformed integer in field file: " + s);
  return v;
}

std::string expect_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line))
    throw ParameterError(std::string("truncated field file: missing ") + what);
  return line;
}

} // namespace

void save_field(const SampledField& f, std::ostream& os) {
  const GridSpec& g = f.grid();
  os << "parabmo-field,1\n";
  os << "n," << g.dim() << "\n";
  os << "nx";
  for (std::size_t c : g.nx) os << "," << c;
  os << "\nnt," << g.nt << "\n";
  for (std::size_t a = 0; a < g.dim(); ++a) {
    os << "space" << a << ",";
    put(os, g.domain.bounds.space[a].lo);
    os << ",";
    put(os, g.domain.bounds.space[a].hi);
    os << "\n";
  }
  os << "time,";
  put(os, g.domain.bounds.time.lo);
  os << ",";
  put(os, g.domain.bounds.time.hi);
  os << "\n";
  for (double v : f.values()) {
    put(os, v);
    os << "\n";
  }
}

void save_field(const SampledField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParameterError("cannot open field file for writing: " + path);
  save_field(f, os);
}

SampledField load_field(std::istream& is) {
  auto magic = split(expect_line(is, "magic"));
  if (magic.size() != 2 || magic[0] != "parabmo-field" || magic[1] != "1")
    throw ParameterError("not a parabmo field file");
  auto nline = split(expect_line(is, "n"));
  if (nline.size() != 2 || nline[0] != "n")
    throw ParameterError("field file: bad dimension line");
  const std::size_t n = parse_size(nline[1]);

  auto nxline = split(expect_line(is, "nx"));
  if (nxline.size() != n + 1 || nxline[0] != "nx")
    throw ParameterError("field file: bad nx line");
  std::vector<std::size_t> nx;
  for (std::size_t a = 0; a < n; ++a) nx.push_back(parse_size(nxline[a + 1]));

  auto ntline = split(expect_line(is, "nt"));
  if (ntline.size() != 2 || ntline[0] != "nt")
    throw ParameterError("field file: bad nt line");
  const std::size_t nt = parse_size(ntline[1]);

  Box bounds;
  for (std::size_t a = 0; a < n; ++a) {
    auto sl = split(expect_line(is, "space"));
    if (sl.size() != 3 || sl[0] != "space" + std::to_string(a))
      throw ParameterError("field file: bad space line");
    bounds.space.push_back({parse_double(sl[1]), parse_double(sl[2])});
  }
  auto tl = split(expect_line(is, "time"));
  if (tl.size() != 3 || tl[0] != "time")
    throw ParameterError("field file: bad time line");
  bounds.time = {parse_double(tl[1]), parse_double(tl[2])};

  GridSpec grid(Cylinder{bounds}, nx, nt);
  std::vector<double> values;
  values.reserve(grid.point_count());
  for (std::size_t i = 0; i < grid.point_count(); ++i)
    values.push_back(parse_double(expect_line(is, "value")));
  return SampledField(grid, std::move(values));
}

SampledField load_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("cannot open field file: " + path);
  return load_field(is);
}

} // namespace pbmo
