// Command-line front end. Every subcommand writes CSV (or a short report) to
// --out, which is either "-" for standard output or a path written atomically.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sadj/circle.hpp"
#include "sadj/errors.hpp"
#include "sadj/halfline.hpp"
#include "sadj/interval.hpp"
#include "sadj/lattice.hpp"
#include "sadj/random.hpp"

using namespace sadj;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit(const std::string& out, const std::string& text) {
  if (out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(out);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot open output file " + tmp.string());
    f << text;
    if (!f.flush()) throw InputError("cannot write output file " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

BoundaryKind parse_bc(const std::string& s) {
  if (s == "neumann") return BoundaryKind::neumann();
  if (s == "dirichlet") return BoundaryKind::dirichlet();
  throw InputError("unknown boundary condition " + s);
}

void check_level(const BoundaryKind& bc, int l) {
  if (bc.kind == BoundaryKind::Kind::Dirichlet && l < 1) throw InputError("Dirichlet levels start at l = 1");
  if (l < 0) throw InputError("level must be non-negative");
}

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw InputError("invalid size '" + tok + "'");
    }
    if (used != tok.size()) throw InputError("invalid size '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

struct MomdistOpts {
  std::string bc = "neumann";
  int l = 0;
  double L = 1.0;
  int nmin = -10;
  int nmax = 10;
  double theta = 0.0;
  std::string out = "-";
};

std::string run_momdist(const MomdistOpts& o) {
  const BoundaryKind bc = parse_bc(o.bc);
  check_level(bc, o.l);
  if (o.nmax < o.nmin) throw InputError("nmax must not be below nmin");
  const IntervalParams p = interval::params_for_theta(o.L, o.theta);
  const auto dist = interval::measurement_distribution(p, bc, o.l, o.nmin, o.nmax);
  std::string text = "n,k,probability\n";
  for (const auto& e : dist.entries) text += std::to_string(e.n) + "," + fmt(e.k) + "," + fmt(e.probability) + "\n";
  text += "# sum=" + fmt(dist.sum()) + " tail=" + fmt(dist.tail_bound) + "\n";
  return text;
}

struct SpectrumOpts {
  std::string mode = "interval";
  double L = 1.0;
  double theta = 0.0;
  int count = 0;
  int N = 0;
  double a = 0.0;
  double beta0 = 0.0;
  double betaL = 0.0;
  std::string out = "-";
};

std::string run_spectrum(const SpectrumOpts& o) {
  std::string text = "index,value\n";
  if (o.mode == "interval") {
    if (o.count < 1) throw InputError("--count must be positive");
    const IntervalParams p = interval::params_for_theta(o.L, o.theta);
    for (const auto& [n, k] : interval::momentum_spectrum(p, 1, o.count)) text += std::to_string(n) + "," + fmt(k) + "\n";
  } else if (o.mode == "circle") {
    if (o.count < 1) throw InputError("--count must be positive");
    CircleParams c;
    c.theta = o.theta;
    for (int n = 0; n < o.count; ++n) text += std::to_string(n) + "," + fmt(circle::angular_eigenvalue(c, n)) + "\n";
  } else if (o.mode == "lattice") {
    if (o.N < 2) throw InputError("--N must be at least 2 in lattice mode");
    if (!(o.L > 0.0)) throw InputError("--L must be positive");
    const double a = o.a > 0.0 ? o.a : o.L / o.N;
    const LatticeConfig cfg{o.N, a, ExtensionLambda(o.beta0), ExtensionLambda(o.betaL), 1.0};
    const auto eig = lattice::lattice_momentum_spectrum(cfg);
    const std::size_t shown = o.count > 0 ? std::min<std::size_t>(o.count, eig.values.size()) : eig.values.size();
    for (std::size_t j = 0; j < shown; ++j) text += std::to_string(j + 1) + "," + fmt(eig.values[j]) + "\n";
  } else {
    throw InputError("unknown mode " + o.mode);
  }
  return text;
}

struct ConvergeOpts {
  int levels = 4;
  std::string sizes = "64,128,256,512";
  double beta0 = 0.0;
  double betaL = 0.0;
  double L = 1.0;
  std::string out = "-";
};

std::string run_converge(const ConvergeOpts& o) {
  const auto sizes = parse_sizes(o.sizes);
  if (sizes.size() < 2) throw InputError("at least two lattice sizes are needed to fit an order");
  const auto res = lattice::continuum_convergence(o.beta0, o.betaL, o.levels, sizes, o.L);
  std::string text = "level,target,slope,intercept,final_error\n";
  std::string notes;
  for (const auto& lc : res) {
    text += std::to_string(lc.level) + "," + fmt(lc.target) + "," + (lc.skipped ? "nan" : fmt(lc.slope)) + "," +
            (lc.skipped ? "nan" : fmt(lc.intercept)) + "," + fmt(lc.errors.back()) + "\n";
    if (!lc.notice.empty()) notes += "# level " + std::to_string(lc.level) + ": " + lc.notice + "\n";
  }
  return text + notes;
}

struct SampleOpts {
  std::string bc = "neumann";
  int l = 0;
  double L = 1.0;
  double theta = 0.0;
  int nmin = -1000;
  int nmax = 1000;
  long long shots = 100000;
  std::uint64_t seed = 0;
  std::string out = "-";
};

std::string run_sample(const SampleOpts& o) {
  if (o.shots <= 0) throw InputError("--shots must be positive");
  const BoundaryKind bc = parse_bc(o.bc);
  check_level(bc, o.l);
  if (o.nmax < o.nmin) throw InputError("nmax must not be below nmin");
  const IntervalParams p = interval::params_for_theta(o.L, o.theta);
  const auto dist = interval::measurement_distribution(p, bc, o.l, o.nmin, o.nmax);
  const auto res = interval::sample_measurement(dist, static_cast<std::uint64_t>(o.shots), o.seed);
  std::string text = "n,count,frequency,probability\n";
  for (std::size_t j = 0; j < dist.entries.size(); ++j) {
    const auto& e = dist.entries[j];
    text += std::to_string(e.n) + "," + std::to_string(res.counts[j]) + "," +
            fmt(static_cast<double>(res.counts[j]) / static_cast<double>(o.shots)) + "," + fmt(e.probability) + "\n";
  }
  text += "# shots=" + std::to_string(o.shots) + " rejected=" + std::to_string(res.rejected) +
          " seed=" + std::to_string(o.seed) + " collapsed_to_n=" + std::to_string(res.last_n) + "\n";
  return text;
}

struct HalflineOpts {
  double gamma = -1.0;
  bool bound = false;
  double kmax = 10.0;
  double dk = 0.5;
  std::string out = "-";
};

std::string run_halfline(const HalflineOpts& o) {
  if (!(o.gamma < 0.0)) throw InputError("a bound state requires gamma < 0");
  if (!(o.kmax > 0.0) || !(o.dk > 0.0)) throw InputError("--kmax and --dk must be positive");
  const long steps = std::lround(o.kmax / o.dk);
  if (std::abs(steps * o.dk - o.kmax) > 1e-9 * o.kmax) throw InputError("--kmax must be a multiple of --dk");

  std::string text = "k,density\n";
  if (o.bound) {
    for (long j = -steps; j <= steps; ++j) {
      const double k = j * o.dk;
      text += fmt(k) + "," + fmt(halfline::standard_momentum_density_bound(o.gamma, k)) + "\n";
    }
    return text;
  }
  // Without --bound the density comes from quadrature of the sampled bound state
  // against the doubled momentum eigenfunctions.
  PhysicalParams pp;
  pp.gamma = Robin(o.gamma);
  pp.xmax = std::max(40.0, 40.0 / std::abs(o.gamma));
  pp.grid = Grid::span(0.0, pp.xmax, 40001);
  const auto b = halfline::bound_state(pp);
  for (long j = -steps; j <= steps; ++j) {
    const double k = j * o.dk;
    const cplx amp = halfline::new_momentum_amplitude(b.wave, ExtensionLambda(0.0), k);
    text += fmt(k) + "," + fmt(std::norm(amp) / (2.0 * kPi)) + "\n";
  }
  return text;
}

struct WeylOpts {
  std::string mode = "halfline";
  double a = 0.3;
  double q = 2.0;
  int samples = 64;
  double tol = 1e-10;
  double L = 1.0;
  std::uint64_t seed = 0;
  std::string out = "-";
};

// Returns the maximum deviation; random states are drawn from a seeded generator.
double run_weyl(const WeylOpts& o) {
  if (o.samples < 1) throw InputError("--samples must be positive");
  if (!(o.tol >= 0.0)) throw InputError("--tol must be non-negative");
  std::mt19937_64 gen(o.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto rc = [&] { return cplx(unit(gen), unit(gen)); };

  if (o.mode == "halfline") {
    std::vector<MomentumSuperposition> states;
    for (int s = 0; s < o.samples; ++s) {
      const ExtensionLambda lam(3.0 * unit(gen));
      std::vector<MomentumComponent> comps;
      const int m = 1 + static_cast<int>(gen() % 4);
      for (int j = 0; j < m; ++j) comps.push_back({5.0 * unit(gen), rc()});
      states.emplace_back(lam.sigma(), 1.0 / std::sqrt(2.0), comps);
    }
    std::vector<double> xs;
    for (int j = 0; j < 41; ++j) xs.push_back(0.125 * j);
    return halfline::weyl_check(o.a, o.q, states, xs);
  }
  if (o.mode == "interval") {
    IntervalParams p;
    p.length = o.L;
    p.lambda0 = ExtensionLambda(2.0 * unit(gen));
    p.lambdaL = ExtensionLambda(2.0 * unit(gen));
    std::vector<MomentumSuperposition> states;
    for (int s = 0; s < o.samples; ++s) {
      std::vector<std::pair<int, cplx>> coeffs;
      const int m = 1 + static_cast<int>(gen() % 4);
      for (int j = 0; j < m; ++j) coeffs.emplace_back(static_cast<int>(gen() % 13) - 6, rc());
      states.push_back(interval::superposition(p, coeffs));
    }
    std::vector<double> xs;
    for (int j = 0; j <= 40; ++j) xs.push_back(o.L * j / 40.0);
    const auto rep = interval::commutator_check(p, o.a, states, xs);
    return std::max({rep.commutator, rep.commutator_dagger, rep.weyl});
  }
  if (o.mode == "circle") {
    CircleParams c;
    c.theta = kPi * (unit(gen) + 1.0);
    std::vector<circle::AngularSuperposition> states;
    for (int s = 0; s < o.samples; ++s) {
      std::vector<std::pair<int, cplx>> coeffs;
      const int m = 1 + static_cast<int>(gen() % 4);
      for (int j = 0; j < m; ++j) coeffs.emplace_back(static_cast<int>(gen() % 13) - 6, rc());
      states.emplace_back(c, coeffs);
    }
    std::vector<double> phis;
    for (int j = 0; j < 40; ++j) phis.push_back(-kPi + 2.0 * kPi * j / 40.0);
    return std::max(circle::weyl_check(o.a, states, phis), circle::commutator_check(states, phis));
  }
  throw InputError("unknown mode " + o.mode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-adjoint momentum operators on the half-line, interval, circle and lattice"};
  app.require_subcommand(1);

  MomdistOpts md;
  auto* momdist = app.add_subcommand("momdist", "momentum measurement distribution in an interval");
  momdist->add_option("--bc", md.bc, "neumann or dirichlet")->required();
  momdist->add_option("--l", md.l, "energy level")->required();
  momdist->add_option("--L", md.L, "interval length");
  momdist->add_option("--nmin", md.nmin, "lowest momentum index");
  momdist->add_option("--nmax", md.nmax, "highest momentum index");
  momdist->add_option("--theta", md.theta, "boundary phase theta in [0, 2 pi)");
  momdist->add_option("--out", md.out, "output path or - for stdout");

  SpectrumOpts sp;
  auto* spectrum = app.add_subcommand("spectrum", "momentum spectrum");
  spectrum->add_option("--mode", sp.mode, "interval, circle or lattice")->required();
  spectrum->add_option("--L", sp.L, "length");
  spectrum->add_option("--theta", sp.theta, "theta in [0, 2 pi)");
  spectrum->add_option("--count", sp.count, "number of levels");
  spectrum->add_option("--N", sp.N, "lattice sites");
  spectrum->add_option("--a", sp.a, "lattice spacing (default L/N)");
  spectrum->add_option("--beta0", sp.beta0, "lambda = i beta0 at x = 0");
  spectrum->add_option("--betaL", sp.betaL, "lambda_L = i betaL at x = L");
  spectrum->add_option("--out", sp.out, "output path or - for stdout");

  ConvergeOpts cv;
  auto* converge = app.add_subcommand("converge", "lattice continuum-limit convergence orders");
  converge->add_option("--levels", cv.levels, "number of positive levels");
  converge->add_option("--sizes", cv.sizes, "comma-separated lattice sizes");
  converge->add_option("--beta0", cv.beta0, "beta at x = 0");
  converge->add_option("--betaL", cv.betaL, "beta at x = L");
  converge->add_option("--L", cv.L, "interval length");
  converge->add_option("--out", cv.out, "output path or - for stdout");

  SampleOpts sm;
  auto* sample = app.add_subcommand("sample", "simulated momentum measurements");
  sample->add_option("--bc", sm.bc, "neumann or dirichlet")->required();
  sample->add_option("--l", sm.l, "energy level")->required();
  sample->add_option("--L", sm.L, "interval length");
  sample->add_option("--theta", sm.theta, "theta in [0, 2 pi)");
  sample->add_option("--nmin", sm.nmin, "lowest momentum index");
  sample->add_option("--nmax", sm.nmax, "highest momentum index");
  sample->add_option("--shots", sm.shots, "number of measurements");
  sample->add_option("--seed", sm.seed, "generator seed");
  sample->add_option("--out", sm.out, "output path or - for stdout");

  HalflineOpts hl;
  auto* half = app.add_subcommand("halfline", "momentum density of the half-line bound state");
  half->add_option("--gamma", hl.gamma, "Robin parameter");
  half->add_flag("--bound", hl.bound, "closed-form bound-state density");
  half->add_option("--kmax", hl.kmax, "largest |k|");
  half->add_option("--dk", hl.dk, "k step");
  half->add_option("--out", hl.out, "output path or - for stdout");

  WeylOpts wo;
  auto* weyl = app.add_subcommand("weylcheck", "Weyl relation and commutator checks on random states");
  weyl->add_option("--mode", wo.mode, "halfline, interval or circle")->required();
  weyl->add_option("--a", wo.a, "translation (angle in circle mode)");
  weyl->add_option("--q", wo.q, "momentum shift (half-line only)");
  weyl->add_option("--samples", wo.samples, "number of random states");
  weyl->add_option("--tol", wo.tol, "pass threshold");
  weyl->add_option("--L", wo.L, "interval length");
  weyl->add_option("--seed", wo.seed, "generator seed");
  weyl->add_option("--out", wo.out, "output path or - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*momdist) emit(md.out, run_momdist(md));
    if (*spectrum) emit(sp.out, run_spectrum(sp));
    if (*converge) emit(cv.out, run_converge(cv));
    if (*sample) emit(sm.out, run_sample(sm));
    if (*half) emit(hl.out, run_halfline(hl));
    if (*weyl) {
      const double dev = run_weyl(wo);
      const bool pass = dev <= wo.tol;
      emit(wo.out, "mode,samples,max_deviation,tol,result\n" + wo.mode + "," + std::to_string(wo.samples) + "," +
                       fmt(dev) + "," + fmt(wo.tol) + "," + (pass ? "PASS" : "FAIL") + "\n");
      return pass ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
