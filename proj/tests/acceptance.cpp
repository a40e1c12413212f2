// Acceptance gate. Each criterion prints exactly one line:
//   [PASS] <name>: <detail>   or   [FAIL] <name>: <detail>
// Run with no arguments for the full gate, or pass criterion names to run a
// subset. Exit status is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/codec.hpp"
#include "core/corpus.hpp"
#include "core/haze.hpp"
#include "core/image.hpp"
#include "core/metrics.hpp"
#include "core/solver.hpp"
#include "core/solver_config.hpp"
#include "oracles.hpp"

using namespace defog;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

// Laplacian and one full explicit update against the brute-force forms on
// random images; both stencils must agree to 1e-10 in under 10 seconds.
Outcome check_stencil_oracle() {
  const double start = now_seconds();
  std::mt19937 rng(20260815);
  const SolverConfig cfg;
  double lap_dev = 0.0, step_dev = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const PlanarImage cur = oracle::random_image(rng, 12, 12, 3);
    lap_dev = std::max(
        lap_dev, oracle::max_abs_diff(laplacian(cur), oracle::lap_direct(cur)));

    const PlanarImage prev = oracle::random_image(rng, 12, 12, 3);
    const PlanarImage guidance = oracle::random_image(rng, 12, 12, 3);
    const PlanarImage T = oracle::random_image(rng, 12, 12, 1);
    EvolutionState state;
    state.current = cur;
    state.previous = prev;
    step(state, guidance, T, cfg);
    const PlanarImage expect = oracle::step_direct(cur, prev, guidance, T, cfg);
    step_dev = std::max(step_dev, oracle::max_abs_diff(state.current, expect));
  }
  const double elapsed = now_seconds() - start;
  Outcome o;
  o.ok = lap_dev <= 1e-10 && step_dev <= 1e-10 && elapsed < 10.0;
  o.detail = "100 trials, laplacian dev " + fmt(lap_dev) + ", step dev " +
             fmt(step_dev) + ", " + fmt(elapsed) + " s";
  return o;
}

// g stays inside [0, 1] across a million random states and hits its three
// analytic anchor values to 1e-12.
Outcome check_coefficient_range() {
  std::mt19937 rng(77);
  std::size_t samples = 0;
  bool in_range = true;
  for (int trial = 0; trial < 100 && in_range; ++trial) {
    const PlanarImage us = oracle::random_image(rng, 100, 100, 1, -1.0, 1.0);
    const PlanarImage ls = oracle::random_image(rng, 100, 100, 1, -6.0, 6.0);
    const PlanarImage g = diffusion_coefficient(us, ls, 2.0, 2.0);
    for (double v : g.data()) {
      if (!(v >= 0.0 && v <= 1.0)) {
        in_range = false;
        break;
      }
      ++samples;
    }
  }

  PlanarImage us(3, 3, 1);
  for (double& v : us.data()) v = 0.7;
  us.at(1, 1) = 0.0;
  PlanarImage ls(3, 3, 1);
  ls.at(0, 1) = 2.0;
  const PlanarImage g = diffusion_coefficient(us, ls, 2.0, 2.0);
  const double dev = std::max({std::abs(g.at(0, 0) - 1.0),
                               std::abs(g.at(1, 1) - 0.0),
                               std::abs(g.at(0, 1) - 0.5)});
  Outcome o;
  o.ok = in_range && samples == 1000000 && dev <= 1e-12;
  o.detail = std::to_string(samples) + " random states in [0,1], anchor dev " +
             fmt(dev);
  return o;
}

// Synthesizing fog with a known (level, airlight) and inverting with the
// true transmission must reproduce the clean image to 1e-12.
Outcome check_fog_roundtrip() {
  std::mt19937 rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const PlanarImage clean = oracle::random_image(rng, 16, 16, 3, 0.05, 0.95);
    for (double level : {0.1, 0.3, 0.6})
      for (double airlight : {0.7, 1.0}) {
        FogSpec spec;
        spec.level = level;
        spec.airlight = airlight;
        const PlanarImage foggy = synthesize_fog(clean, spec);
        PlanarImage t(16, 16, 1);
        for (double& v : t.data()) v = 1.0 - level;
        const PlanarImage back = recover_radiance(foggy, t, airlight, 0.1);
        worst = std::max(worst, oracle::max_abs_diff(back, clean));
      }

    FogSpec ramp;
    ramp.level = 0.35;
    ramp.airlight = 0.9;
    const PlanarImage foggy = synthesize_fog_ramp(clean, ramp);
    const double t_bottom = 1.0 - ramp.level;
    const double t_top = t_bottom * t_bottom;
    PlanarImage t(16, 16, 1);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        t.at(i, j) = t_top + (t_bottom - t_top) * i / 15.0;
    const PlanarImage back = recover_radiance(foggy, t, ramp.airlight, 0.1);
    worst = std::max(worst, oracle::max_abs_diff(back, clean));
  }
  Outcome o;
  o.ok = worst <= 1e-12;
  o.detail = "70 syntheses, worst roundtrip dev " + fmt(worst);
  return o;
}

std::vector<std::pair<std::string, PlanarImage>> clean_scenes() {
  return {{"blocks", scene_blocks()},
          {"stripes", scene_stripes()},
          {"checker", scene_checker()}};
}

// Stock parameters drive every bundled scene to the stopping tolerance
// within the iteration budget and without numeric blowups.
Outcome check_convergence() {
  Outcome o;
  std::ostringstream detail;
  int runs = 0;
  for (const auto& [name, clean] : clean_scenes()) {
    for (double level : {0.1, 0.2, 0.3}) {
      const PlanarImage foggy = synthesize_fog(clean, FogSpec{level, 0.9});
      const double start = now_seconds();
      const SolveResult res = solve(foggy, SolverConfig{});
      const double elapsed = now_seconds() - start;
      ++runs;
      const bool finite = res.restored.all_finite();
      const double final_err = res.state.rel_err_history.empty()
                                   ? 1.0
                                   : res.state.rel_err_history.back();
      if (!(res.state.converged && final_err < 1e-4 &&
            res.state.iteration <= 500 && finite && elapsed < 60.0)) {
        o.ok = false;
        detail << name << " L" << level << " iters " << res.state.iteration
               << " err " << fmt(final_err) << " finite " << finite << " "
               << fmt(elapsed) << "s; ";
      }
    }
  }
  if (o.ok)
    detail << runs << " scene/level runs converged below 1e-4 within budget";
  o.detail = detail.str();
  return o;
}

// For every scene and fog level the evolved result must beat the guidance
// on MSE and the foggy input on SSIM.
Outcome check_reference_ordering() {
  Outcome o;
  std::ostringstream detail;
  int wins = 0;
  for (const auto& [name, clean] : clean_scenes()) {
    for (double level : {0.1, 0.2, 0.3}) {
      const PlanarImage foggy = synthesize_fog(clean, FogSpec{level, 0.9});
      const SolveResult res = solve(foggy, SolverConfig{});
      const double mse_guidance = mse(clean, res.guidance);
      const double mse_proposed = mse(clean, res.restored);
      const double ssim_foggy = ssim(clean, foggy);
      const double ssim_proposed = ssim(clean, res.restored);
      if (mse_proposed < mse_guidance && ssim_proposed > ssim_foggy) {
        ++wins;
      } else {
        o.ok = false;
        detail << name << " L" << level << " mse " << fmt(mse_proposed)
               << " vs " << fmt(mse_guidance) << ", ssim "
               << fmt(ssim_proposed) << " vs " << fmt(ssim_foggy) << "; ";
      }
    }
  }
  if (o.ok)
    detail << wins
           << "/9 scene/level pairs: mse beats guidance, ssim beats foggy";
  o.detail = detail.str();
  return o;
}

// On the prefogged scenes the evolved result must read as less foggy than
// its input and must not lose contrast.
Outcome check_noreference_ordering() {
  Outcome o;
  std::ostringstream detail;
  const std::vector<std::pair<std::string, PlanarImage>> foggy_scenes = {
      {"ramp", foggy_ramp_scene()}, {"dense", foggy_dense_scene()}};
  for (const auto& [name, foggy] : foggy_scenes) {
    const SolveResult res = solve(foggy, SolverConfig{});
    const double fade_in = fade_surrogate(foggy);
    const double fade_out = fade_surrogate(res.restored);
    const double contrast = cri(foggy, res.restored);
    if (fade_out < fade_in && contrast >= 1.0) {
      detail << name << " fade " << fmt(fade_in) << "->" << fmt(fade_out)
             << " cri " << fmt(contrast) << "; ";
    } else {
      o.ok = false;
      detail << name << " FAILED fade " << fmt(fade_in) << "->"
             << fmt(fade_out) << " cri " << fmt(contrast) << "; ";
    }
  }
  o.detail = detail.str();
  return o;
}

Outcome check_metric_identities() {
  Outcome o;
  std::ostringstream detail;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      o.ok = false;
      detail << what << " failed; ";
    }
  };

  std::mt19937 rng(123);
  const PlanarImage a = oracle::random_image(rng, 16, 16, 3);
  expect(mse(a, a) == 0.0, "mse(a,a)=0");
  expect(ssim(a, a) == 1.0, "ssim(a,a)=1");
  const PlanarImage f = oracle::random_image(rng, 16, 16, 3, 0.2, 0.8);
  expect(cri(f, f) == 1.0, "cri(f,f)=1");

  PlanarImage constant(8, 8, 3);
  for (double& v : constant.data()) v = 0.375;
  expect(entropy(constant) == 0.0, "entropy(constant)=0");
  expect(ag(constant) == 0.0, "ag(constant)=0");

  PlanarImage uniform(16, 16, 1);
  for (int k = 0; k < 256; ++k)
    uniform.data()[static_cast<std::size_t>(k)] = (k + 0.5) / 255.0;
  expect(std::abs(entropy(uniform) - 8.0) <= 1e-9, "entropy(uniform-256)=8");

  const int W = 64;
  PlanarImage ramp(16, W, 1);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < W; ++j) ramp.at(i, j) = static_cast<double>(j) / W;
  expect(std::abs(ag(ramp) - 1.0 / W) <= 1e-12, "ag(ramp)=1/W");

  if (o.ok) detail << "all 7 identities hold";
  o.detail = detail.str();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "";
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Repeated benchmark runs of one plan, including different worker counts,
// must write byte-identical report.csv files.
Outcome check_determinism() {
  Outcome o;
  std::string cli;
  if (const char* env = std::getenv("DEFOG_CLI")) cli = env;
  if (cli.empty() || !fs::exists(cli)) {
    o.ok = false;
    o.detail = "set DEFOG_CLI to the defog executable path";
    return o;
  }

  const fs::path dir = fs::temp_directory_path() / "defog_acceptance_det";
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir / "scenes");
  write_corpus((dir / "scenes").string());

  const fs::path plan = dir / "plan.ini";
  std::ofstream(plan) << "[plan]\n"
                      << "input = "
                      << (dir / "scenes" / "clean_checker.png").string() << "\n"
                      << "fog_levels = 0.1, 0.2\n"
                      << "methods = dcp, proposed\n"
                      << "output_dir = " << (dir / "out").string() << "\n";

  auto run = [&](int threads) -> std::string {
    std::ostringstream cmd;
    cmd << "env DEFOG_THREADS=" << threads << " '" << cli << "' bench-ref '"
        << plan.string() << "' > /dev/null 2>&1";
    if (std::system(cmd.str().c_str()) != 0) return "";
    return slurp(dir / "out" / "report.csv");
  };

  const std::string first = run(1);
  const std::string second = run(1);
  const std::string threaded = run(4);
  o.ok = !first.empty() && first == second && first == threaded;
  o.detail = o.ok ? "3 runs (threads 1,1,4) byte-identical, " +
                        std::to_string(first.size()) + " bytes"
                  : "reports differ or a run failed";
  return o;
}

// Forcing the time step an order of magnitude past the stability bound must
// surface a warning; the stock step must stay silent on the whole corpus.
Outcome check_cfl_reporting() {
  Outcome o;
  std::ostringstream detail;

  int violations_with_defaults = 0;
  double g_max_seen = 0.0;
  for (const CorpusEntry& entry : bundled_corpus()) {
    const PlanarImage foggy =
        entry.foggy ? entry.image
                    : synthesize_fog(entry.image, FogSpec{0.2, 0.9});
    SolverConfig cfg;
    cfg.max_iters = 25;
    cfg.toll = 1e-12;
    const SolveResult res = solve(foggy, cfg);
    violations_with_defaults += res.state.cfl_violations;
    for (const std::string& w : res.state.warnings)
      if (w.find("cfl") != std::string::npos) {
        o.ok = false;
        detail << entry.name << " warned at stock tau; ";
      }
    for (double g : res.state.g_max_history) g_max_seen = std::max(g_max_seen, g);
  }
  if (violations_with_defaults != 0) {
    o.ok = false;
    detail << violations_with_defaults << " violations at stock tau; ";
  }

  if (g_max_seen <= 0.0) {
    o.ok = false;
    o.detail = detail.str() + "no positive conductance observed";
    return o;
  }
  SolverConfig forced;
  forced.tau = 10.0 / g_max_seen;  // ten times the h / max g bound
  forced.max_iters = 10;
  forced.toll = 1e-12;
  const PlanarImage foggy =
      synthesize_fog(scene_checker(), FogSpec{0.2, 0.9});
  const SolveResult res = solve(foggy, forced);
  bool warned = false;
  for (const std::string& w : res.state.warnings)
    if (w.find("cfl") != std::string::npos) warned = true;
  if (!(warned && res.state.cfl_violations >= 1)) {
    o.ok = false;
    detail << "forced tau " << fmt(forced.tau) << " produced no warning; ";
  }
  if (o.ok)
    detail << "stock tau silent on 5 scenes, forced tau " << fmt(forced.tau)
           << " warned with " << res.state.cfl_violations << " violations";
  o.detail = detail.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> gate = {
      {"stencil_oracle", check_stencil_oracle},
      {"coefficient_range", check_coefficient_range},
      {"fog_roundtrip", check_fog_roundtrip},
      {"convergence", check_convergence},
      {"reference_ordering", check_reference_ordering},
      {"noreference_ordering", check_noreference_ordering},
      {"metric_identities", check_metric_identities},
      {"determinism", check_determinism},
      {"cfl_reporting", check_cfl_reporting},
  };

  std::vector<std::string> wanted(argv + 1, argv + argc);
  for (const std::string& name : wanted) {
    bool known = false;
    for (const auto& [candidate, fn] : gate) known = known || candidate == name;
    if (!known) {
      std::cerr << "unknown criterion '" << name << "'; available:";
      for (const auto& [candidate, fn] : gate) std::cerr << ' ' << candidate;
      std::cerr << '\n';
      return 2;
    }
  }

  int failures = 0;
  for (const auto& [name, fn] : gate) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), name) == wanted.end())
      continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail
              << std::endl;
    if (!o.ok) ++failures;
  }
  return failures;
}
