#pragma once

// CSV serialization of sweep records and per-curve figure series.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrfhss/errors.hpp"
#include "lrfhss/experiment.hpp"

namespace lrfhss {

inline constexpr std::string_view kCsvHeader =
    "dr,scheme,r,n_nodes,lambda_per_hour,mdp_analytic,mdp_sim,ci_low,ci_high,ee_analytic,toa_m_s,"
    "runs,seed";

namespace detail {

inline std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string format_opt(const std::optional<double>& v) {
  return v ? format_g6(*v) : std::string();
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    out.emplace_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

inline double parse_double(const std::string& s, std::string_view field) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw InvalidArgument("bad numeric value '" + s + "' in column " + std::string(field));
  return v;
}

inline std::uint64_t parse_u64(const std::string& s, std::string_view field) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    throw InvalidArgument("bad integer value '" + s + "' in column " + std::string(field));
  return v;
}

inline std::optional<double> parse_opt(const std::string& s, std::string_view field) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, field);
}

}  // namespace detail

inline std::string csv_row(const SweepRecord& r) {
  std::string row;
  row += to_string(r.dr);
  row += ',';
  row += to_string(r.scheme);
  row += ',' + std::to_string(r.r);
  row += ',' + std::to_string(r.n_nodes);
  row += ',' + detail::format_g6(r.lambda_per_hour);
  row += ',' + detail::format_g6(r.mdp_analytic);
  row += ',' + detail::format_opt(r.mdp_sim);
  row += ',' + detail::format_opt(r.ci_low);
  row += ',' + detail::format_opt(r.ci_high);
  row += ',' + detail::format_g6(r.ee_analytic);
  row += ',' + detail::format_g6(r.toa_m);
  row += ',' + std::to_string(r.runs);
  row += ',' + std::to_string(r.seed);
  return row;
}

/// Header plus one row per record, LF line endings. Returns data rows written.
inline std::size_t write_csv(const std::vector<SweepRecord>& records, std::ostream& os) {
  os << kCsvHeader << '\n';
  if (!os) throw IoError("failed writing CSV header", 0);
  std::size_t rows = 0;
  for (const SweepRecord& r : records) {
    os << csv_row(r) << '\n';
    if (!os) throw IoError("failed writing CSV row " + std::to_string(rows + 1), rows);
    ++rows;
  }
  os.flush();
  if (!os) throw IoError("failed flushing CSV output", rows);
  return rows;
}

inline std::size_t write_csv(const std::vector<SweepRecord>& records,
                             const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing", 0);
  return write_csv(records, os);
}

inline std::vector<SweepRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader)
    throw InvalidArgument("CSV header does not match the sweep schema");

  std::vector<SweepRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 13)
      throw InvalidArgument("CSV row has " + std::to_string(f.size()) + " fields, expected 13");
    SweepRecord r;
    r.dr = parse_data_rate(f[0]);
    r.scheme = parse_scheme(f[1]);
    r.r = static_cast<int>(detail::parse_u64(f[2], "r"));
    r.n_nodes = detail::parse_u64(f[3], "n_nodes");
    r.lambda_per_hour = detail::parse_double(f[4], "lambda_per_hour");
    r.mdp_analytic = detail::parse_double(f[5], "mdp_analytic");
    r.mdp_sim = detail::parse_opt(f[6], "mdp_sim");
    r.ci_low = detail::parse_opt(f[7], "ci_low");
    r.ci_high = detail::parse_opt(f[8], "ci_high");
    r.ee_analytic = detail::parse_double(f[9], "ee_analytic");
    r.toa_m = detail::parse_double(f[10], "toa_m_s");
    r.runs = detail::parse_u64(f[11], "runs");
    r.seed = detail::parse_u64(f[12], "seed");
    out.push_back(r);
  }
  return out;
}

inline std::vector<SweepRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string(), 0);
  return read_csv(is);
}

enum class FigureId { Fig2a, Fig2b, Fig3, Fig4, Fig5a, Fig5b };

inline std::string_view to_string(FigureId id) {
  switch (id) {
    case FigureId::Fig2a: return "fig2a";
    case FigureId::Fig2b: return "fig2b";
    case FigureId::Fig3: return "fig3";
    case FigureId::Fig4: return "fig4";
    case FigureId::Fig5a: return "fig5a";
    case FigureId::Fig5b: return "fig5b";
  }
  return "?";
}

inline FigureId parse_figure(std::string_view s) {
  for (FigureId id : {FigureId::Fig2a, FigureId::Fig2b, FigureId::Fig3, FigureId::Fig4,
                      FigureId::Fig5a, FigureId::Fig5b})
    if (to_string(id) == s) return id;
  throw InvalidArgument("unknown figure '" + std::string(s) + "'");
}

// Which curves a figure draws.
struct FigureLayout {
  std::vector<DataRate> drs;
  Metric metric = Metric::MDP;
  double lambda_per_hour = 4.0;
};

inline FigureLayout figure_layout(FigureId id) {
  const std::vector<DataRate> both{DataRate::DR8, DataRate::DR9};
  switch (id) {
    case FigureId::Fig2a: return {{DataRate::DR8}, Metric::MDP, 4.0};
    case FigureId::Fig2b: return {{DataRate::DR9}, Metric::MDP, 4.0};
    case FigureId::Fig3: return {both, Metric::MDP, 4.0};
    case FigureId::Fig4: return {both, Metric::EE, 4.0};
    case FigureId::Fig5a: return {both, Metric::MDP, 8.0};
    case FigureId::Fig5b: return {both, Metric::EE, 8.0};
  }
  return {};
}

using Series = std::vector<std::pair<std::uint64_t, double>>;

inline std::string series_file_name(FigureId id, const Combo& c, Metric m) {
  return std::string(to_string(id)) + "_" + std::string(to_string(c.dr)) + "_" +
         std::string(to_string(c.scheme)) + "_r" + std::to_string(c.r) + "_" +
         (m == Metric::MDP ? "mdp" : "ee") + ".dat";
}

/// Writes one whitespace-separated (N, value) file per curve of the figure
/// into `dir`. Returns the written paths in curve order.
inline std::vector<std::filesystem::path> emit_figure_dataset(
    const std::vector<SweepRecord>& records, FigureId id, const std::filesystem::path& dir) {
  const FigureLayout layout = figure_layout(id);

  std::vector<std::pair<Combo, Series>> curves;
  for (DataRate dr : layout.drs) {
    for (const SchemeR& sr : default_scheme_r_list()) {
      const Combo combo{dr, sr.scheme, sr.r};
      Series series;
      for (const SweepRecord& rec : records)
        if (rec.combo() == combo && std::abs(rec.lambda_per_hour - layout.lambda_per_hour) < 1e-9)
          series.emplace_back(rec.n_nodes, metric_value(rec, layout.metric));
      if (series.empty())
        throw IncompleteData(std::string(to_string(id)) + " needs curve " + to_string(combo) +
                             " at lambda=" + detail::format_g6(layout.lambda_per_hour) + "/h");
      std::sort(series.begin(), series.end());
      curves.emplace_back(combo, std::move(series));
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message(), 0);

  std::vector<std::filesystem::path> written;
  for (const auto& [combo, series] : curves) {
    const auto path = dir / series_file_name(id, combo, layout.metric);
    std::ofstream os(path, std::ios::binary);
    os << "# " << to_string(id) << ' ' << to_string(combo) << ' '
       << (layout.metric == Metric::MDP ? "mdp" : "ee_msgs_per_joule") << '\n';
    for (const auto& [n, v] : series) os << n << ' ' << detail::format_g6(v) << '\n';
    os.flush();
    if (!os) throw IoError("failed writing " + path.string(), written.size());
    written.push_back(path);
  }
  return written;
}

inline Series read_series(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string(), 0);
  Series out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::uint64_t n = 0;
    double v = 0.0;
    if (!(ls >> n >> v)) throw InvalidArgument("malformed series line '" + line + "'");
    std::string extra;
    if (ls >> extra) throw InvalidArgument("series line has more than two columns");
    out.emplace_back(n, v);
  }
  return out;
}

}  // namespace lrfhss
