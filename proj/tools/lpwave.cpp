// lpwave: integrate measured 2-D gradient fields into scalar wavefronts by
// L^p-norm minimization, generate the synthetic benchmark surface, compare
// results, sweep noise levels, and render fields to PGM/PPM images.
//
// Exit codes: 0 converged / success, 1 internal error, 2 usage error,
// 3 I/O error, 4 outer iteration cap exhausted, 5 solver breakdown.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lpwave/lpwave.hpp"

namespace {

using namespace lpwave;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitKmax = 4;
constexpr int kExitBreakdown = 5;

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::kmax_exhausted: return "kmax_exhausted";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "unknown";
}

int status_exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return kExitOk;
    case SolveStatus::kmax_exhausted: return kExitKmax;
    case SolveStatus::breakdown: return kExitBreakdown;
  }
  return kExitInternal;
}

// ---------------------------------------------------------------------------
// Canonical argument lines. Every command records its full effective
// configuration (defaults included) both as manifest keys and as a single
// "rerun" value; feeding that line back to the binary reproduces the outputs
// byte for byte. Doubles are formatted so that parsing returns the same bits.
// ---------------------------------------------------------------------------

struct ArgLine {
  std::string command;
  std::vector<std::pair<std::string, std::string>> args;  // "--flag" -> value ("" = bare flag)

  void opt(const std::string& flag, const std::string& v) { args.emplace_back(flag, v); }
  void opt(const std::string& flag, double v) { args.emplace_back(flag, format_double(v)); }
  void opt(const std::string& flag, int v) { args.emplace_back(flag, std::to_string(v)); }
  void opt(const std::string& flag, long v) { args.emplace_back(flag, std::to_string(v)); }
  void opt(const std::string& flag, std::uint64_t v) { args.emplace_back(flag, std::to_string(v)); }
  void positional(const std::string& v) { args.emplace_back("", v); }
  void flag_if(const std::string& flag, bool set) {
    if (set) args.emplace_back(flag, "");
  }

  std::string rerun() const {
    std::string line = command;
    for (const auto& [flag, v] : args) {
      if (!flag.empty()) line += " " + flag;
      if (!v.empty()) line += " " + v;
    }
    return line;
  }

  Manifest manifest_head() const {
    Manifest m;
    m.emplace_back("command", command);
    int pos = 0;
    for (const auto& [flag, v] : args) {
      if (flag.empty())
        m.emplace_back("arg" + std::to_string(pos++), v);
      else if (v.empty())
        m.emplace_back(flag.substr(2), "1");
      else
        m.emplace_back(flag.substr(2), v);
    }
    return m;
  }
};

void finish_manifest(Manifest& m, const ArgLine& line, const std::string& out_path) {
  m.emplace_back("rerun", line.rerun());
  write_manifest(out_path + ".manifest", m);
}

DisplayRange parse_range(const std::string& s) {
  const std::size_t sep = s.find(':');
  if (sep == std::string::npos || sep == 0 || sep + 1 == s.size())
    throw usage_error("--range expects 'lo:hi', got '" + s + "'");
  char* end = nullptr;
  const double lo = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + sep) throw usage_error("--range: bad low bound in '" + s + "'");
  const double hi = std::strtod(s.c_str() + sep + 1, &end);
  if (*end != '\0') throw usage_error("--range: bad high bound in '" + s + "'");
  if (!(lo <= hi)) throw usage_error("--range: low bound must not exceed high bound");
  return {lo, hi};
}

void print_report(const SolveReport& rep, const double* q) {
  std::printf("status = %s\n", status_name(rep.status));
  std::printf("outer_iters = %d\n", rep.outer_iters);
  std::printf("inner_iters = %ld\n", rep.total_inner_iters);
  std::printf("final_rel_change = %s\n", format_double(rep.final_rel_change).c_str());
  if (q) std::printf("q = %s\n", format_double(*q).c_str());
  std::printf("wall_seconds = %.3f\n", rep.wall_seconds);
}

// ---------------------------------------------------------------------------
// synth: ground-truth wavefront + (optionally noisy) gradient field
// ---------------------------------------------------------------------------

struct SynthArgs {
  int rows = 480, cols = 640;
  std::string mode = "discrete";
  double coord_scale = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::string out;
  bool preview = false;
};

int run_synth(const SynthArgs& a) {
  SyntheticSpec spec{Grid(a.rows, a.cols), a.coord_scale, parse_gradient_mode(a.mode)};
  spec.validate();
  const ScalarField truth = peaks_wavefront(spec);
  const GradientField psi = add_noise(gradient_of(truth, spec.mode, spec), a.noise, a.seed);

  const std::string truth_path = a.out + ".truth.lpw";
  const std::string grad_path = a.out + ".grad.lpw";
  write_field(truth_path, truth);
  write_field(grad_path, psi);
  if (a.preview) {
    write_pgm16(a.out + ".truth.pgm", truth);
    write_pgm16(a.out + ".grad.x.pgm", psi.x);
    write_pgm16(a.out + ".grad.y.pgm", psi.y);
  }

  ArgLine line;
  line.command = "synth";
  line.opt("--rows", a.rows);
  line.opt("--cols", a.cols);
  line.opt("--mode", a.mode);
  line.opt("--coord-scale", a.coord_scale);
  line.opt("--noise", a.noise);
  line.opt("--seed", a.seed);
  line.opt("--out", a.out);
  line.flag_if("--preview", a.preview);

  Manifest m = line.manifest_head();
  m.emplace_back("truth_file", truth_path);
  m.emplace_back("gradient_file", grad_path);
  finish_manifest(m, line, a.out);

  std::printf("wrote %s\n", truth_path.c_str());
  std::printf("wrote %s\n", grad_path.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// integrate: gradient file(s) -> wavefront file + manifest
// ---------------------------------------------------------------------------

struct IntegrateArgs {
  std::vector<std::string> inputs;  // one LPW1 gradient file, or x/y CSV pair
  double p = 1.0;
  bool least_squares = false;
  double epsilon = 0.1;
  int kmax = 100;
  double tol = 1e-3;
  double lmax_factor = 1.5;
  double kappa = 0.005;
  std::uint64_t seed = 1;
  std::string truth;
  std::string out;
};

bool has_csv_suffix(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

/// One LPW1 gradient file, or a pair of CSV grids (x then y component).
/// Gradient samples are per unit length in the file; the solver works in
/// per-cell differences, so components are scaled by the grid spacing here.
GradientField load_gradient_input(const std::vector<std::string>& inputs) {
  GradientField psi;
  if (inputs.size() == 2) {
    if (!has_csv_suffix(inputs[0]) || !has_csv_suffix(inputs[1]))
      throw usage_error("two inputs are only supported as a .csv x/y component pair");
    ScalarField gx = read_scalar_csv(inputs[0]);
    ScalarField gy = read_scalar_csv(inputs[1]);
    if (gx.grid.rows != gy.grid.rows || gx.grid.cols != gy.grid.cols)
      throw io_error("gradient component CSVs disagree on grid size");
    psi = GradientField(std::move(gx), std::move(gy));
  } else {
    if (has_csv_suffix(inputs[0]))
      throw usage_error("CSV gradient input needs two files: the x grid then the y grid");
    psi = read_gradient(inputs[0]);
  }
  for (double& v : psi.x.values) v *= psi.grid.hx;
  for (double& v : psi.y.values) v *= psi.grid.hy;
  return psi;
}

int run_integrate(const IntegrateArgs& a) {
  if (!(a.p >= 0.0)) throw usage_error("--p must be >= 0");
  if (a.p >= 2.0 && !a.least_squares)
    throw usage_error("p >= 2 is the least-squares regime; pass --least-squares");

  const GradientField psi = load_gradient_input(a.inputs);

  IntegrationParams prm;
  prm.p = a.p;
  prm.epsilon = a.epsilon;
  prm.k_max = a.kmax;
  prm.tol = a.tol;
  prm.seed = a.seed;
  if (!(a.lmax_factor > 0.0)) throw usage_error("--lmax-factor must be > 0");
  prm.pcg.l_max = static_cast<long>(a.lmax_factor * psi.grid.cells());
  prm.pcg.kappa = a.kappa;

  std::optional<ScalarField> truth;
  if (!a.truth.empty()) truth = load_scalar(a.truth);

  auto [phi, rep] = a.least_squares ? integrate_least_squares(psi, prm) : integrate(psi, prm);

  double q = 0.0;
  bool have_q = false;
  if (truth) {
    q = q_error(*truth, mean_align(phi, *truth));
    have_q = true;
  }

  write_field(a.out, phi);

  ArgLine line;
  line.command = "integrate";
  for (const std::string& in : a.inputs) line.positional(in);
  line.opt("--p", a.p);
  line.flag_if("--least-squares", a.least_squares);
  line.opt("--epsilon", a.epsilon);
  line.opt("--kmax", a.kmax);
  line.opt("--tol", a.tol);
  line.opt("--lmax-factor", a.lmax_factor);
  line.opt("--kappa", a.kappa);
  line.opt("--seed", a.seed);
  if (!a.truth.empty()) line.opt("--truth", a.truth);
  line.opt("--out", a.out);

  Manifest m = line.manifest_head();
  m.emplace_back("status", status_name(rep.status));
  m.emplace_back("outer_iters", std::to_string(rep.outer_iters));
  m.emplace_back("inner_iters", std::to_string(rep.total_inner_iters));
  m.emplace_back("final_rel_change", format_double(rep.final_rel_change));
  if (have_q) m.emplace_back("q", format_double(q));
  finish_manifest(m, line, a.out);

  print_report(rep, have_q ? &q : nullptr);
  std::printf("wrote %s\n", a.out.c_str());
  return status_exit_code(rep.status);
}

// ---------------------------------------------------------------------------
// compare: Q and max absolute difference of two scalar fields
// ---------------------------------------------------------------------------

struct CompareArgs {
  std::string file_a, file_b;
  std::string csv;
  std::string out;
  std::string range;
};

int run_compare(const CompareArgs& a) {
  const ScalarField fa = load_scalar(a.file_a);
  const ScalarField fb_aligned = mean_align(load_scalar(a.file_b), fa);
  const double q = q_error(fa, fb_aligned);
  const double mad = max_abs_diff(fa, fb_aligned);

  std::printf("Q = %s\n", format_double(q).c_str());
  std::printf("max_abs_diff = %s\n", format_double(mad).c_str());

  if (!a.out.empty()) {
    ScalarField diff(fa.grid);
    for (std::size_t k = 0; k < diff.values.size(); ++k)
      diff.values[k] = std::fabs(fa.values[k] - fb_aligned.values[k]);
    write_pgm16(a.out, diff, a.range.empty() ? auto_range(diff) : parse_range(a.range));
  }
  if (!a.csv.empty()) {
    std::ofstream csv(a.csv, std::ios::trunc);
    if (!csv) throw io_error("cannot open '" + a.csv + "' for writing");
    csv << "file_a,file_b,Q,max_abs_diff\n"
        << a.file_a << ',' << a.file_b << ',' << format_double(q) << ','
        << format_double(mad) << '\n';
    if (!csv) throw io_error("write failed for '" + a.csv + "'");
  }

  const std::string primary = !a.out.empty() ? a.out : a.csv;
  if (!primary.empty()) {
    ArgLine line;
    line.command = "compare";
    line.positional(a.file_a);
    line.positional(a.file_b);
    if (!a.csv.empty()) line.opt("--csv", a.csv);
    if (!a.out.empty()) line.opt("--out", a.out);
    if (!a.range.empty()) line.opt("--range", a.range);
    Manifest m = line.manifest_head();
    m.emplace_back("q", format_double(q));
    m.emplace_back("max_abs_diff", format_double(mad));
    finish_manifest(m, line, primary);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep: p values x noise levels x repetitions -> CSV table
// ---------------------------------------------------------------------------

struct SweepArgs {
  int rows = 480, cols = 640;
  std::string mode = "discrete";
  double coord_scale = 1.0;
  std::vector<double> ps;
  std::vector<double> noises;
  int reps = 1;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  int kmax = 100;
  double tol = 1e-3;
  double lmax_factor = 1.5;
  double kappa = 0.005;
  std::string csv;
};

struct SweepRow {
  double p = 0.0, noise = 0.0;
  std::uint64_t seed = 0;
  double q = 0.0;
  int outer = 0;
  long inner = 0;
  double seconds = 0.0;
  SolveStatus status = SolveStatus::breakdown;
};

int run_sweep(const SweepArgs& a) {
  if (a.ps.empty()) throw usage_error("--p needs at least one value");
  if (a.noises.empty()) throw usage_error("--noise needs at least one value");
  if (a.reps < 1) throw usage_error("--reps must be >= 1");
  for (double p : a.ps)
    if (!(p >= 0.0 && p < 2.0)) throw usage_error("sweep p values must lie in [0, 2)");
  for (double level : a.noises)
    if (!(level >= 0.0)) throw usage_error("noise levels must be >= 0");
  if (!(a.lmax_factor > 0.0)) throw usage_error("--lmax-factor must be > 0");

  SyntheticSpec spec{Grid(a.rows, a.cols), a.coord_scale, parse_gradient_mode(a.mode)};
  spec.validate();
  const ScalarField truth = peaks_wavefront(spec);
  const GradientField base = gradient_of(truth, spec.mode, spec);

  auto params_for = [&](double p, std::uint64_t seed) {
    IntegrationParams prm;
    prm.p = p;
    prm.epsilon = a.epsilon;
    prm.k_max = a.kmax;
    prm.tol = a.tol;
    prm.seed = seed;
    prm.pcg.l_max = static_cast<long>(a.lmax_factor * spec.grid.cells());
    prm.pcg.kappa = a.kappa;
    return prm;
  };
  // Workers must not throw; reject bad solver parameters before fan-out.
  params_for(a.ps.front(), a.seed).validate();
  WeightParams{a.ps.front(), a.epsilon}.validate();

  std::vector<double> ps = a.ps, noises = a.noises;
  std::sort(ps.begin(), ps.end());
  std::sort(noises.begin(), noises.end());

  std::vector<SweepRow> rows;
  for (double p : ps)
    for (double level : noises)
      for (int r = 0; r < a.reps; ++r) {
        SweepRow row;
        row.p = p;
        row.noise = level;
        row.seed = a.seed + static_cast<std::uint64_t>(r);
        rows.push_back(row);
      }

  const int njobs = static_cast<int>(rows.size());
  run_jobs(njobs, std::min(max_threads(), njobs), [&](int k) {
    SweepRow& row = rows[static_cast<std::size_t>(k)];
    const GradientField noisy = add_noise(base, row.noise, row.seed);
    auto [phi, rep] = integrate(noisy, params_for(row.p, row.seed));
    row.q = q_error(truth, mean_align(phi, truth));
    row.outer = rep.outer_iters;
    row.inner = rep.total_inner_iters;
    row.seconds = rep.wall_seconds;
    row.status = rep.status;
  });

  std::ofstream csv(a.csv, std::ios::trunc);
  if (!csv) throw io_error("cannot open '" + a.csv + "' for writing");
  csv << "p,noise_level,seed,Q,outer_iters,inner_iters,seconds\n";
  for (const SweepRow& row : rows) {
    csv << format_double(row.p) << ',' << format_double(row.noise) << ',' << row.seed << ','
        << format_double(row.q) << ',' << row.outer << ',' << row.inner << ','
        << std::to_string(row.seconds) << '\n';
  }
  if (!csv) throw io_error("write failed for '" + a.csv + "'");

  ArgLine line;
  line.command = "sweep";
  line.opt("--rows", a.rows);
  line.opt("--cols", a.cols);
  line.opt("--mode", a.mode);
  line.opt("--coord-scale", a.coord_scale);
  {
    std::string plist, nlist;
    for (double p : ps) plist += (plist.empty() ? "" : ",") + format_double(p);
    for (double v : noises) nlist += (nlist.empty() ? "" : ",") + format_double(v);
    line.opt("--p", plist);
    line.opt("--noise", nlist);
  }
  line.opt("--reps", a.reps);
  line.opt("--seed", a.seed);
  line.opt("--epsilon", a.epsilon);
  line.opt("--kmax", a.kmax);
  line.opt("--tol", a.tol);
  line.opt("--lmax-factor", a.lmax_factor);
  line.opt("--kappa", a.kappa);
  line.opt("--csv", a.csv);
  Manifest m = line.manifest_head();
  finish_manifest(m, line, a.csv);

  std::printf("wrote %s (%d rows)\n", a.csv.c_str(), njobs);
  int worst = kExitOk;
  for (const SweepRow& row : rows) {
    if (row.status == SolveStatus::breakdown) worst = kExitBreakdown;
    if (row.status == SolveStatus::kmax_exhausted && worst != kExitBreakdown) worst = kExitKmax;
  }
  return worst;
}

// ---------------------------------------------------------------------------
// render: field files -> PGM/PPM images, optional fringe preview
// ---------------------------------------------------------------------------

struct RenderArgs {
  std::string input;
  std::string out;
  std::string range;
  bool color = false;
  bool fringe = false;
  double fringe_period = 16.0;
  std::vector<double> fringe_direction{1.0, 0.0};
  double fringe_a = 0.5;
  double fringe_b = 0.5;
  double fringe_distance = 1.0;
};

int run_render(const RenderArgs& a) {
  const bool explicit_range = !a.range.empty();
  const DisplayRange range = explicit_range ? parse_range(a.range) : DisplayRange{};
  const auto write_image = [&](const std::string& path, const ScalarField& f) {
    const DisplayRange r = explicit_range ? range : auto_range(f);
    if (a.color)
      write_ppm8(path, f, r);
    else
      write_pgm16(path, f, r);
  };
  const char* ext = a.color ? ".ppm" : ".pgm";

  std::vector<std::string> written;
  const bool gradient_input = !has_csv_suffix(a.input) && peek_kind(a.input) == 2;
  if (a.fringe && gradient_input) throw usage_error("--fringe needs a scalar wavefront input");
  if (gradient_input) {
    const GradientField psi = read_gradient(a.input);
    write_image(a.out + ".x" + ext, psi.x);
    write_image(a.out + ".y" + ext, psi.y);
    written = {a.out + ".x" + ext, a.out + ".y" + ext};
  } else {
    ScalarField f = load_scalar(a.input);
    if (a.fringe) {
      if (a.fringe_direction.size() != 2)
        throw usage_error("--fringe-direction expects two components vx,vy");
      FringeSpec fs;
      fs.a = a.fringe_a;
      fs.b = a.fringe_b;
      fs.period = a.fringe_period;
      fs.vx = a.fringe_direction[0];
      fs.vy = a.fringe_direction[1];
      fs.screen_distance = a.fringe_distance;
      f = render_fringe(f, fs);
    }
    write_image(a.out + ext, f);
    written = {a.out + ext};
  }

  ArgLine line;
  line.command = "render";
  line.positional(a.input);
  line.opt("--out", a.out);
  if (explicit_range) line.opt("--range", a.range);
  line.flag_if("--color", a.color);
  if (a.fringe) {
    line.flag_if("--fringe", true);
    line.opt("--fringe-period", a.fringe_period);
    line.opt("--fringe-direction", format_double(a.fringe_direction[0]) + "," +
                                       format_double(a.fringe_direction[1]));
    line.opt("--fringe-a", a.fringe_a);
    line.opt("--fringe-b", a.fringe_b);
    line.opt("--fringe-distance", a.fringe_distance);
  }
  Manifest m = line.manifest_head();
  for (std::size_t k = 0; k < written.size(); ++k)
    m.emplace_back("image" + std::to_string(k), written[k]);
  finish_manifest(m, line, a.out);

  for (const std::string& path : written) std::printf("wrote %s\n", path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L^p-norm gradient-field integration"};
  app.require_subcommand(1);

  SynthArgs sy;
  CLI::App* synth = app.add_subcommand("synth", "generate the synthetic wavefront and gradient");
  synth->add_option("--rows", sy.rows, "grid rows")->capture_default_str();
  synth->add_option("--cols", sy.cols, "grid columns")->capture_default_str();
  synth->add_option("--mode", sy.mode, "gradient mode: discrete|analytic")->capture_default_str();
  synth->add_option("--coord-scale", sy.coord_scale, "peaks coordinate stretch")
      ->capture_default_str();
  synth->add_option("--noise", sy.noise, "gradient noise level, percent of RMS")
      ->capture_default_str();
  synth->add_option("--seed", sy.seed, "noise seed")->capture_default_str();
  synth->add_option("--out", sy.out, "output prefix")->required();
  synth->add_flag("--preview", sy.preview, "also write PGM previews");

  IntegrateArgs ig;
  CLI::App* integ = app.add_subcommand("integrate", "integrate a gradient field");
  integ->add_option("input", ig.inputs, "gradient file (LPW1), or x.csv y.csv pair")
      ->required()
      ->expected(1, 2);
  integ->add_option("--p", ig.p, "norm exponent")->capture_default_str();
  integ->add_flag("--least-squares", ig.least_squares, "constant-weight baseline (p = 2 regime)");
  integ->add_option("--epsilon", ig.epsilon, "weight normalizer")->capture_default_str();
  integ->add_option("--kmax", ig.kmax, "outer iteration cap")->capture_default_str();
  integ->add_option("--tol", ig.tol, "relative-change stopping tolerance")->capture_default_str();
  integ->add_option("--lmax-factor", ig.lmax_factor, "inner cap as a multiple of rows*cols")
      ->capture_default_str();
  integ->add_option("--kappa", ig.kappa, "inner residual-energy tolerance")->capture_default_str();
  integ->add_option("--seed", ig.seed, "random initializer seed")->capture_default_str();
  integ->add_option("--truth", ig.truth, "ground-truth wavefront for Q");
  integ->add_option("--out", ig.out, "output wavefront file")->required();

  CompareArgs cp;
  CLI::App* compare = app.add_subcommand("compare", "normalized error between two fields");
  compare->add_option("file_a", cp.file_a, "reference field")->required();
  compare->add_option("file_b", cp.file_b, "field to compare (mean-aligned first)")->required();
  compare->add_option("--csv", cp.csv, "also write a one-row CSV");
  compare->add_option("--out", cp.out, "absolute-difference image (PGM)");
  compare->add_option("--range", cp.range, "difference image display range lo:hi");

  SweepArgs sw;
  CLI::App* sweep = app.add_subcommand("sweep", "p x noise grid of integration runs");
  sweep->add_option("--rows", sw.rows, "grid rows")->capture_default_str();
  sweep->add_option("--cols", sw.cols, "grid columns")->capture_default_str();
  sweep->add_option("--mode", sw.mode, "gradient mode: discrete|analytic")->capture_default_str();
  sweep->add_option("--coord-scale", sw.coord_scale, "peaks coordinate stretch")
      ->capture_default_str();
  sweep->add_option("--p", sw.ps, "norm exponents (comma separated or repeated)")
      ->required()
      ->delimiter(',');
  sweep->add_option("--noise", sw.noises, "noise levels in percent")->required()->delimiter(',');
  sweep->add_option("--reps", sw.reps, "repetitions per cell, consecutive seeds")
      ->capture_default_str();
  sweep->add_option("--seed", sw.seed, "base seed")->capture_default_str();
  sweep->add_option("--epsilon", sw.epsilon, "weight normalizer")->capture_default_str();
  sweep->add_option("--kmax", sw.kmax, "outer iteration cap")->capture_default_str();
  sweep->add_option("--tol", sw.tol, "relative-change stopping tolerance")->capture_default_str();
  sweep->add_option("--lmax-factor", sw.lmax_factor, "inner cap as a multiple of rows*cols")
      ->capture_default_str();
  sweep->add_option("--kappa", sw.kappa, "inner residual-energy tolerance")->capture_default_str();
  sweep->add_option("--csv", sw.csv, "output CSV table")->required();

  RenderArgs rd;
  CLI::App* render = app.add_subcommand("render", "write field images (PGM/PPM)");
  render->add_option("input", rd.input, "scalar or gradient field file")->required();
  render->add_option("--out", rd.out, "output basename (extension appended)")->required();
  render->add_option("--range", rd.range, "display range lo:hi (default: field min/max)");
  render->add_flag("--color", rd.color, "write a diverging-colormap PPM instead of PGM");
  render->add_flag("--fringe", rd.fringe, "render a sinusoidal fringe pattern seen through phi");
  render->add_option("--fringe-period", rd.fringe_period, "carrier period")->capture_default_str();
  render->add_option("--fringe-direction", rd.fringe_direction, "carrier direction vx,vy")
      ->delimiter(',');
  render->add_option("--fringe-a", rd.fringe_a, "background level")->capture_default_str();
  render->add_option("--fringe-b", rd.fringe_b, "modulation amplitude")->capture_default_str();
  render->add_option("--fringe-distance", rd.fringe_distance, "slope-to-displacement factor")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) return run_synth(sy);
    if (integ->parsed()) return run_integrate(ig);
    if (compare->parsed()) return run_compare(cp);
    if (sweep->parsed()) return run_sweep(sw);
    if (render->parsed()) return run_render(rd);
    return kExitUsage;
  } catch (const io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
}
