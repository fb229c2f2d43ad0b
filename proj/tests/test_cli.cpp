#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "lpwave/image.hpp"
#include "lpwave/io.hpp"
#include "lpwave/metrics.hpp"

using namespace lpwave;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = "cli_scratch";

std::string path(const std::string& name) { return (kDir / name).string(); }

int run_shell(const std::string& cmd) {
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

int run_cli(const std::string& args) {
  return run_shell(std::string(LPWAVE_CLI_PATH) + " " + args + " > " + path("stdout.txt") +
                   " 2> " + path("stderr.txt"));
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  EXPECT_TRUE(in.good()) << p;
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::string> lines_of(const std::string& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

double manifest_double(const std::string& manifest_path, const std::string& key) {
  const Manifest m = read_manifest(manifest_path);
  const std::string* v = manifest_get(m, key);
  EXPECT_NE(v, nullptr) << key << " missing from " << manifest_path;
  return v ? std::strtod(v->c_str(), nullptr) : 0.0;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
    ASSERT_EQ(run_cli("synth --rows 48 --cols 64 --out " + path("base")), 0);
  }
};

}  // namespace

TEST_F(Cli, SynthWritesFieldsAndManifest) {
  EXPECT_EQ(peek_kind(path("base.truth.lpw")), 1);
  EXPECT_EQ(peek_kind(path("base.grad.lpw")), 2);
  const Manifest m = read_manifest(path("base.manifest"));
  ASSERT_NE(manifest_get(m, "rerun"), nullptr);
  EXPECT_EQ(*manifest_get(m, "command"), "synth");
  EXPECT_EQ(*manifest_get(m, "rows"), "48");
}

TEST_F(Cli, SynthIsDeterministic) {
  ASSERT_EQ(run_cli("synth --rows 24 --cols 32 --noise 2 --seed 9 --out " + path("da")), 0);
  ASSERT_EQ(run_cli("synth --rows 24 --cols 32 --noise 2 --seed 9 --out " + path("db")), 0);
  EXPECT_EQ(slurp(path("da.truth.lpw")), slurp(path("db.truth.lpw")));
  EXPECT_EQ(slurp(path("da.grad.lpw")), slurp(path("db.grad.lpw")));
  ASSERT_EQ(run_cli("synth --rows 24 --cols 32 --noise 2 --seed 10 --out " + path("dc")), 0);
  EXPECT_NE(slurp(path("da.grad.lpw")), slurp(path("dc.grad.lpw")));  // seed matters
}

TEST_F(Cli, SynthRejectsDegenerateGrids) {
  EXPECT_EQ(run_cli("synth --rows 1 --out " + path("bad")), 2);
  EXPECT_EQ(run_cli("synth --rows 24 --cols 32 --mode sideways --out " + path("bad")), 2);
  EXPECT_EQ(run_cli("synth --rows 24 --cols 32"), 2);  // --out is required
}

TEST_F(Cli, IntegrateRecoversTruthAndReportsQ) {
  ASSERT_EQ(run_cli("integrate " + path("base.grad.lpw") + " --p 0 --truth " +
                    path("base.truth.lpw") + " --out " + path("w0.lpw")),
            0);
  EXPECT_LE(manifest_double(path("w0.lpw.manifest"), "q"), 1e-6);

  const ScalarField w = read_scalar(path("w0.lpw"));
  EXPECT_NEAR(w.mean(), 0.0, 1e-9);  // canonical gauge
}

TEST_F(Cli, IntegrateIsBitDeterministicAcrossRuns) {
  const std::string cmd =
      "integrate " + path("base.grad.lpw") + " --p 1 --seed 3 --out " + path("ra.lpw");
  ASSERT_EQ(run_cli(cmd), 0);
  const std::string wave = slurp(path("ra.lpw"));
  const std::string manifest = slurp(path("ra.lpw.manifest"));
  ASSERT_EQ(run_cli(cmd), 0);
  EXPECT_EQ(slurp(path("ra.lpw")), wave);
  EXPECT_EQ(slurp(path("ra.lpw.manifest")), manifest);
}

TEST_F(Cli, ManifestRerunLineReproducesOutputExactly) {
  ASSERT_EQ(run_cli("integrate " + path("base.grad.lpw") + " --p 0.5 --out " + path("mr.lpw")), 0);
  const std::string wave = slurp(path("mr.lpw"));
  const std::string manifest = slurp(path("mr.lpw.manifest"));

  const Manifest m = read_manifest(path("mr.lpw.manifest"));
  const std::string* rerun = manifest_get(m, "rerun");
  ASSERT_NE(rerun, nullptr);
  ASSERT_EQ(run_cli(*rerun), 0);
  EXPECT_EQ(slurp(path("mr.lpw")), wave);
  EXPECT_EQ(slurp(path("mr.lpw.manifest")), manifest);
}

TEST_F(Cli, IntegrateGuardsItsPreconditions) {
  const std::string in = path("base.grad.lpw");
  EXPECT_EQ(run_cli("integrate " + in + " --p 2 --out " + path("x.lpw")), 2);
  EXPECT_EQ(run_cli("integrate " + in + " --p -1 --out " + path("x.lpw")), 2);
  EXPECT_EQ(run_cli("integrate " + in + " --p 0 --epsilon 0 --out " + path("x.lpw")), 2);
  EXPECT_EQ(run_cli("integrate " + path("nothere.lpw") + " --out " + path("x.lpw")), 3);
  EXPECT_EQ(run_cli("integrate " + path("base.truth.lpw") + " --out " + path("x.lpw")), 3);
}

TEST_F(Cli, LeastSquaresIsNearExactOnIntegrableData) {
  ASSERT_EQ(run_cli("integrate " + path("base.grad.lpw") + " --p 2 --least-squares --truth " +
                    path("base.truth.lpw") + " --out " + path("wls.lpw")),
            0);
  EXPECT_LE(manifest_double(path("wls.lpw.manifest"), "q"), 1e-5);
}

TEST_F(Cli, ExhaustedOuterLoopStillWritesAndSignals) {
  EXPECT_EQ(run_cli("integrate " + path("base.grad.lpw") + " --p 0 --kmax 1 --out " +
                    path("wk.lpw")),
            4);
  EXPECT_TRUE(fs::exists(path("wk.lpw")));
  const Manifest m = read_manifest(path("wk.lpw.manifest"));
  ASSERT_NE(manifest_get(m, "status"), nullptr);
  EXPECT_EQ(*manifest_get(m, "status"), "kmax_exhausted");
}

TEST_F(Cli, ZeroGradientGivesZeroWavefront) {
  Grid g(10, 14);
  write_field(path("zero.lpw"), GradientField(g));
  ASSERT_EQ(run_cli("integrate " + path("zero.lpw") + " --p 1 --out " + path("zw.lpw")), 0);
  const ScalarField w = read_scalar(path("zw.lpw"));
  for (double v : w.values) EXPECT_LE(std::fabs(v), 1e-6);
}

TEST_F(Cli, CsvGradientPairIsAccepted) {
  {
    std::ofstream gx(path("gx.csv")), gy(path("gy.csv"));
    gx << "0.5,0.5,0\n0.5,0.5,0\n0.5,0.5,0\n";
    gy << "0,0,0\n0,0,0\n0,0,0\n";
  }
  ASSERT_EQ(run_cli("integrate " + path("gx.csv") + " " + path("gy.csv") + " --p 0 --out " +
                    path("cw.lpw")),
            0);
  const ScalarField w = read_scalar(path("cw.lpw"));
  // a 0.5-per-cell x slope, zero-mean: columns at -0.5, 0, +0.5
  EXPECT_NEAR(w.at(0, 2) - w.at(0, 0), 1.0, 1e-6);
  EXPECT_EQ(run_cli("integrate " + path("gx.csv") + " --p 0 --out " + path("cw.lpw")), 2);
}

TEST_F(Cli, CompareReportsQAndMaxDiff) {
  const std::string t = path("base.truth.lpw");
  ASSERT_EQ(run_cli("compare " + t + " " + t), 0);
  auto out = lines_of(path("stdout.txt"));
  ASSERT_GE(out.size(), 2u);
  EXPECT_EQ(out[0], "Q = 0");
  EXPECT_EQ(out[1], "max_abs_diff = 0");

  ScalarField shifted = read_scalar(t);
  for (double& v : shifted.values) v += 17.25;
  write_field(path("shifted.lpw"), shifted);
  ASSERT_EQ(run_cli("compare " + t + " " + path("shifted.lpw") + " --csv " + path("cmp.csv")), 0);
  out = lines_of(path("stdout.txt"));
  // constant offsets are gauge, not error; alignment leaves only roundoff
  ASSERT_EQ(out[0].substr(0, 4), "Q = ");
  EXPECT_LE(std::strtod(out[0].c_str() + 4, nullptr), 1e-12);
  auto csv = lines_of(path("cmp.csv"));
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[0], "file_a,file_b,Q,max_abs_diff");

  Grid other(9, 9);
  write_field(path("small.lpw"), ScalarField(other, 1.0));
  EXPECT_EQ(run_cli("compare " + t + " " + path("small.lpw")), 2);
}

TEST_F(Cli, CompareWritesDifferenceImage) {
  ASSERT_EQ(run_cli("compare " + path("base.truth.lpw") + " " + path("w0.lpw") + " --out " +
                    path("diff.pgm")),
            0);
  EXPECT_EQ(slurp(path("diff.pgm")).substr(0, 3), "P5\n");
}

TEST_F(Cli, SweepTableIsOrderedAndAccurate) {
  ASSERT_EQ(run_cli("sweep --rows 24 --cols 32 --p 1,0 --noise 0 --reps 2 --csv " +
                    path("sw.csv")),
            0);
  auto rows = lines_of(path("sw.csv"));
  ASSERT_EQ(rows.size(), 5u);  // header + 2 p * 1 level * 2 reps
  EXPECT_EQ(rows[0], "p,noise_level,seed,Q,outer_iters,inner_iters,seconds");
  EXPECT_EQ(rows[1].substr(0, 6), "0,0,1,");  // sorted by p then level then seed
  EXPECT_EQ(rows[2].substr(0, 6), "0,0,2,");
  EXPECT_EQ(rows[3].substr(0, 6), "1,0,1,");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const std::size_t q0 = rows[k].find(',', rows[k].find(',', rows[k].find(',') + 1) + 1) + 1;
    const double q = std::strtod(rows[k].c_str() + q0, nullptr);
    EXPECT_LE(q, 1e-5) << rows[k];
  }
}

TEST_F(Cli, SweepIsThreadCountInvariant) {
  const std::string args = std::string(LPWAVE_CLI_PATH) +
                           " sweep --rows 24 --cols 32 --p 0,1 --noise 0,2 --reps 2 --csv ";
  ASSERT_EQ(run_shell("LPW_THREADS=1 " + args + path("t1.csv") + " >/dev/null 2>&1"), 0);
  ASSERT_EQ(run_shell("LPW_THREADS=4 " + args + path("t4.csv") + " >/dev/null 2>&1"), 0);
  auto strip_seconds = [](const std::string& p) {
    std::string out;
    for (const std::string& line : lines_of(p)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  EXPECT_EQ(strip_seconds(path("t1.csv")), strip_seconds(path("t4.csv")));
}

TEST_F(Cli, SweepRejectsBadRequests) {
  EXPECT_EQ(run_cli("sweep --noise 0 --csv " + path("x.csv")), 2);  // no p values
  EXPECT_EQ(run_cli("sweep --p 2 --noise 0 --csv " + path("x.csv")), 2);
  EXPECT_EQ(run_cli("sweep --p 0 --noise -1 --csv " + path("x.csv")), 2);
  EXPECT_EQ(run_cli("sweep --p 0 --noise 0 --reps 0 --csv " + path("x.csv")), 2);
}

TEST_F(Cli, RenderConstantFieldIsMidGray) {
  Grid g(3, 5);
  write_field(path("const.lpw"), ScalarField(g, 7.0));
  ASSERT_EQ(run_cli("render " + path("const.lpw") + " --out " + path("flat") + " --range 6:8"),
            0);
  const std::string bytes = slurp(path("flat.pgm"));
  const std::string header = "P5\n5 3\n65535\n";
  ASSERT_EQ(bytes.size(), header.size() + 2u * 15u);
  for (std::size_t k = header.size(); k < bytes.size(); k += 2) {
    EXPECT_EQ(static_cast<unsigned char>(bytes[k]), 0x80);
    EXPECT_EQ(static_cast<unsigned char>(bytes[k + 1]), 0x00);
  }
}

TEST_F(Cli, RenderFringeMakesAVerticalCarrier) {
  Grid g(16, 24);
  write_field(path("flatphi.lpw"), ScalarField(g));
  ASSERT_EQ(run_cli("render " + path("flatphi.lpw") + " --out " + path("fringe") +
                    " --fringe --fringe-period 8 --range 0:1"),
            0);
  const std::string bytes = slurp(path("fringe.pgm"));
  const std::string header = "P5\n24 16\n65535\n";
  ASSERT_EQ(bytes.size(), header.size() + 2u * 16u * 24u);
  const auto px = [&](int i, int j) {
    const std::size_t off = header.size() + 2u * static_cast<std::size_t>(i * 24 + j);
    return (static_cast<unsigned>(static_cast<unsigned char>(bytes[off])) << 8) |
           static_cast<unsigned char>(bytes[off + 1]);
  };
  for (int i = 1; i < 16; ++i)
    for (int j = 0; j < 24; ++j) EXPECT_EQ(px(i, j), px(0, j));  // columns are constant
  EXPECT_NE(px(0, 0), px(0, 4));  // carrier varies along x (half period)
  EXPECT_EQ(px(0, 0), px(0, 8));  // and repeats every period
}

TEST_F(Cli, RenderGradientWritesBothComponents) {
  ASSERT_EQ(run_cli("render " + path("base.grad.lpw") + " --out " + path("g") + " --color"), 0);
  EXPECT_EQ(slurp(path("g.x.ppm")).substr(0, 3), "P6\n");
  EXPECT_EQ(slurp(path("g.y.ppm")).substr(0, 3), "P6\n");
  EXPECT_EQ(run_cli("render " + path("base.grad.lpw") + " --out " + path("g") + " --fringe"), 2);
}

TEST_F(Cli, NoSubcommandIsAUsageError) {
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("--help"), 0);
}
