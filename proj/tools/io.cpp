#include "cli.hpp"

#include "ng/immersions.hpp"
#include "ng/pencils.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ng::cli {

std::filesystem::path Context::path(const std::string& name) const {
  std::filesystem::create_directories(out);
  return std::filesystem::path(out) / name;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw InputError("not a number: '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) throw InputError("empty number list");
  return out;
}

h2::Point parse_point(const std::string& s) {
  const auto v = parse_numbers(s);
  if (v.size() != 2 || !(v[1] > 0)) throw InputError("point must be 're,im' with im > 0: " + s);
  return {v[0], v[1]};
}

std::vector<int> parse_orbit(const RootSystem& sys, const std::string& spec) {
  if (spec == "Delta") {
    std::vector<int> all(sys.rank());
    for (int i = 0; i < sys.rank(); ++i) all[i] = i;
    return all;
  }
  if (spec.size() > 1 && spec[0] == 'O') {
    const auto orbits = weyl_orbits_of_simple_roots(sys);
    const int k = std::stoi(spec.substr(1));
    if (k < 1 || k > static_cast<int>(orbits.size())) throw InputError("no Weyl orbit " + spec);
    return orbits[k - 1];
  }
  std::vector<int> idx;
  for (double x : parse_numbers(spec)) {
    const int i = static_cast<int>(x);
    if (i != x || i < 0 || i >= sys.rank()) throw InputError("bad simple root index in '" + spec + "'");
    idx.push_back(i);
  }
  return idx;
}

Vec parse_tau(const RootSystem& sys, const std::string& spec) {
  if (spec == "Delta") return normalized_coroot(sys, parse_orbit(sys, "Delta"));
  if (spec.rfind("tau", 0) == 0) {
    const int k = std::stoi(spec.substr(3));
    if (k < 1 || k > sys.rank()) throw InputError("no fundamental direction " + spec);
    return fundamental_direction(sys, k - 1);
  }
  if (spec.rfind("orbit:", 0) == 0) return normalized_coroot(sys, parse_orbit(sys, spec.substr(6)));
  const auto c = parse_numbers(spec);
  if (static_cast<int>(c.size()) != sys.ambient_dim())
    throw InputError("tau needs " + std::to_string(sys.ambient_dim()) + " coordinates");
  const Vec v = sys.to_a(Vec::Map(c.data(), c.size()));
  if (sys.norm(v) < 1e-12) throw InputError("tau is zero");
  const Vec t = sys.normalized(v);
  if (!in_chamber(sys, t, 1e-9)) throw InputError("tau must lie in the closed positive chamber");
  return t;
}

Sl2Embedding make_embedding(const std::string& name, int n) {
  if (name == "irr") return irr_embedding(n);
  if (name == "red") return red_embedding(n);
  throw InputError("unknown embedding '" + name + "' (irr, red)");
}

std::unique_ptr<Surface> make_surface(const std::string& spec, int n) {
  if (spec.rfind("csv:", 0) == 0) {
    std::ifstream in(spec.substr(4));
    if (!in) throw InputError("cannot open " + spec.substr(4));
    return std::make_unique<JetSurface>(read_jet_csv(in));
  }
  return std::make_unique<EquivariantSurface>(make_embedding(spec, n));
}

CsvWriter::CsvWriter(const std::filesystem::path& p, const std::vector<std::string>& header) : out_(p) {
  if (!out_) throw InputError("cannot write " + p.string());
  for (const auto& h : header) *this << h;
  end_row();
}

void CsvWriter::sep() {
  if (!fresh_) out_ << ',';
  fresh_ = false;
}

CsvWriter& CsvWriter::operator<<(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  sep();
  out_ << buf;
  return *this;
}

CsvWriter& CsvWriter::operator<<(long x) {
  sep();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  sep();
  out_ << s;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  fresh_ = true;
}

void write_json(const std::filesystem::path& p, const Json& j) {
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

Json to_json(const Vec& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

std::vector<std::string> numbered(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void write_flag(CsvWriter& w, const FlagPoint& f) {
  const FlagPoint c = canonical(f);
  for (Eigen::Index k = 0; k < c.basis.size(); ++k) w << c.basis.data()[k];
}

CsvTable read_csv(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string());
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    return cells;
  };
  if (!std::getline(in, line)) throw InputError("empty csv " + p.string());
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line));
    if (t.rows.back().size() != t.header.size()) throw InputError("ragged row in " + p.string());
  }
  return t;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw InputError("missing column '" + name + "'");
}

// Header "quad,row,col,value"; entries missing from the file are zero.
std::vector<Mat> read_quadrics_csv(const std::filesystem::path& p) {
  const CsvTable t = read_csv(p);
  const int cq = t.column("quad"), cr = t.column("row"), cc = t.column("col"), cv = t.column("value");
  int nq = 0, n = 0;
  for (const auto& r : t.rows) {
    nq = std::max(nq, std::stoi(r[cq]) + 1);
    n = std::max({n, std::stoi(r[cr]) + 1, std::stoi(r[cc]) + 1});
  }
  if (nq == 0) throw InputError("no quadrics in " + p.string());
  std::vector<Mat> q(nq, Mat::Zero(n, n));
  for (const auto& r : t.rows) q[std::stoi(r[cq])](std::stoi(r[cr]), std::stoi(r[cc])) = std::stod(r[cv]);
  return q;
}

void write_quadrics_csv(const std::filesystem::path& p, const std::vector<Mat>& quads) {
  CsvWriter w(p, {"quad", "row", "col", "value"});
  for (std::size_t k = 0; k < quads.size(); ++k)
    for (int i = 0; i < quads[k].rows(); ++i)
      for (int j = 0; j < quads[k].cols(); ++j) {
        w << static_cast<long>(k) << i << j << quads[k](i, j);
        w.end_row();
      }
}

std::vector<FlagPoint> read_flags_csv(const std::filesystem::path& p, const std::vector<int>& type) {
  const CsvTable t = read_csv(p);
  int m = 0;
  for (const auto& h : t.header) m += h.size() > 1 && h[0] == 'b' && h.find_first_not_of("0123456789", 1) == std::string::npos;
  const int n = static_cast<int>(std::lround(std::sqrt(double(m))));
  if (n * n != m) throw InputError("flag basis columns b0.. do not form a square matrix in " + p.string());
  if (n < 2) throw InputError("no flag basis columns b0.. in " + p.string());
  std::vector<int> cols;
  for (int k = 0; k < n * n; ++k) cols.push_back(t.column("b" + std::to_string(k)));
  std::vector<FlagPoint> out;
  for (const auto& r : t.rows) {
    Mat b(n, n);
    for (int k = 0; k < n * n; ++k) b.data()[k] = std::stod(r[cols[k]]);
    out.push_back(FlagPoint::from_vectors(b, type));
  }
  return out;
}

}  // namespace ng::cli
