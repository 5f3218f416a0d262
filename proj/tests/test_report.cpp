#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lrfhss/report.hpp"

using namespace lrfhss;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lrfhss_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

bool close_6sig(double got, double src) {
  // Parsed value equals the 6-significant-digit rounding of the source.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", src);
  return got == std::strtod(buf, nullptr);
}

}  // namespace

TEST(Csv, HeaderOnly) {
  std::ostringstream os;
  EXPECT_EQ(write_csv({}, os), 0u);
  EXPECT_EQ(os.str(), std::string(kCsvHeader) + "\n");
}

TEST(Csv, RowCountAndRoundTrip) {
  SweepSpec spec = baseline_sweep();
  spec.node_counts = log_spaced_nodes(100, 100'000, 10);
  auto recs = run_sweep(spec);
  recs[3].mdp_sim = 0.123456789;
  recs[3].ci_low = 0.1;
  recs[3].ci_high = 0.2;
  recs[3].runs = 77;

  std::ostringstream os;
  EXPECT_EQ(write_csv(recs, os), 100u);
  EXPECT_EQ(count_lines(os.str()), 101);
  EXPECT_EQ(os.str().find('\r'), std::string::npos);

  std::istringstream is(os.str());
  const auto back = read_csv(is);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].combo(), recs[i].combo());
    EXPECT_EQ(back[i].n_nodes, recs[i].n_nodes);
    EXPECT_EQ(back[i].runs, recs[i].runs);
    EXPECT_EQ(back[i].seed, recs[i].seed);
    EXPECT_TRUE(close_6sig(back[i].mdp_analytic, recs[i].mdp_analytic));
    EXPECT_TRUE(close_6sig(back[i].ee_analytic, recs[i].ee_analytic));
    EXPECT_TRUE(close_6sig(back[i].toa_m, recs[i].toa_m));
    EXPECT_EQ(back[i].mdp_sim.has_value(), recs[i].mdp_sim.has_value());
  }
  EXPECT_TRUE(close_6sig(*back[3].mdp_sim, 0.123456789));

  // Byte-identical on rewrite.
  std::ostringstream again;
  write_csv(recs, again);
  EXPECT_EQ(again.str(), os.str());
}

TEST(Csv, ReaderRejectsMalformedInput) {
  std::istringstream bad_header("dr,scheme\n");
  EXPECT_THROW(read_csv(bad_header), InvalidArgument);
  std::istringstream short_row(std::string(kCsvHeader) + "\nDR8,none,1\n");
  EXPECT_THROW(read_csv(short_row), InvalidArgument);
  std::istringstream bad_num(std::string(kCsvHeader) + "\nDR8,none,1,100,4,x,,,,1,1,0,0\n");
  EXPECT_THROW(read_csv(bad_num), InvalidArgument);
}

TEST(Csv, WriteFailureReportsPartialRows) {
  std::ostringstream os;
  os.setstate(std::ios::badbit);
  try {
    write_csv({SweepRecord{}}, os);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.rows_written(), 0u);
  }
}

TEST(FigureDataset, Fig3HasTenSeries) {
  const auto recs = run_sweep(baseline_sweep());
  const auto dir = scratch_dir("fig3");
  const auto files = emit_figure_dataset(recs, FigureId::Fig3, dir);
  ASSERT_EQ(files.size(), 10u);
  for (const auto& f : files) {
    const auto series = read_series(f);
    EXPECT_EQ(series.size(), default_node_axis().size());
    EXPECT_TRUE(std::is_sorted(series.begin(), series.end()));
  }
  EXPECT_TRUE(fs::exists(dir / "fig3_DR9_fragment_r3_mdp.dat"));
}

TEST(FigureDataset, Fig4IsEnergyEfficiency) {
  const auto recs = run_sweep(baseline_sweep());
  const auto files = emit_figure_dataset(recs, FigureId::Fig4, scratch_dir("fig4"));
  ASSERT_EQ(files.size(), 10u);
  const auto s = read_series(files.front());  // DR8 none
  EXPECT_NEAR(s.front().second, 24.6201, 1e-4);
}

TEST(FigureDataset, MissingCurves) {
  SweepSpec spec = baseline_sweep();
  spec.dr_list = {DataRate::DR9};
  const auto recs = run_sweep(spec);
  EXPECT_THROW(emit_figure_dataset(recs, FigureId::Fig2a, scratch_dir("fig2a")), IncompleteData);
  EXPECT_EQ(emit_figure_dataset(recs, FigureId::Fig2b, scratch_dir("fig2b")).size(), 5u);
  // Fig. 5 needs the doubled-traffic sweep.
  EXPECT_THROW(emit_figure_dataset(recs, FigureId::Fig5a, scratch_dir("fig5a")), IncompleteData);
}

TEST(FigureDataset, FigureNames) {
  EXPECT_EQ(parse_figure("fig5b"), FigureId::Fig5b);
  EXPECT_THROW(parse_figure("fig6"), InvalidArgument);
}
