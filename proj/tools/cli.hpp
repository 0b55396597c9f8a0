#pragma once

#include "ng/common.hpp"
#include "ng/flags.hpp"
#include "ng/rootsys.hpp"
#include "ng/surface.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ng::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInconclusive = 4;

struct Context {
  std::string out = "ng_out";
  std::uint64_t seed = kDefaultSeed;
  int workers = 0;  // 0: all available

  Exec exec() const { return workers == 1 ? Exec::Serial : Exec::Parallel; }
  std::filesystem::path path(const std::string& name) const;
};

// Each command returns its exit status.
using Runner = std::function<int(const Context&)>;
void register_commands(CLI::App& app, Runner& selected);

// "Delta", "tauK" (K-th fundamental direction, 1-based), "orbit:i,j" (0-based simple roots), or coordinates.
Vec parse_tau(const RootSystem& sys, const std::string& spec);
std::vector<int> parse_orbit(const RootSystem& sys, const std::string& spec);
std::vector<double> parse_numbers(const std::string& s);
h2::Point parse_point(const std::string& s);

// "irr", "red", or "csv:PATH" (jet file).
std::unique_ptr<Surface> make_surface(const std::string& spec, int n);
Sl2Embedding make_embedding(const std::string& name, int n);

// Comma-separated with a header; numbers with 12 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& p, const std::vector<std::string>& header);
  CsvWriter& operator<<(double x);
  CsvWriter& operator<<(long x);
  CsvWriter& operator<<(int x) { return *this << static_cast<long>(x); }
  CsvWriter& operator<<(const std::string& s);
  CsvWriter& operator<<(const char* s) { return *this << std::string(s); }
  void end_row();

 private:
  void sep();
  std::ofstream out_;
  bool fresh_ = true;
};

void write_json(const std::filesystem::path& p, const Json& j);
Json to_json(const Vec& v);
std::vector<std::string> numbered(const std::string& prefix, int count);
void write_flag(CsvWriter& w, const FlagPoint& f);  // basis column-major

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& p);

// Header "quad,row,col,value".
std::vector<Mat> read_quadrics_csv(const std::filesystem::path& p);
void write_quadrics_csv(const std::filesystem::path& p, const std::vector<Mat>& quads);
// Columns b0.. hold the basis column-major; other columns are ignored.
std::vector<FlagPoint> read_flags_csv(const std::filesystem::path& p, const std::vector<int>& type);

}  // namespace ng::cli
