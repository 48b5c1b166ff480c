// Command-line front end. Every subcommand prints one JSON document on
// stdout (envelope prints CSV); diagnostics go to stderr.
//
// Exit codes: 1 malformed input, 2 infeasible data, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "specunc/errors.hpp"
#include "specunc/fixtures.hpp"
#include "specunc/io.hpp"
#include "specunc/schur_levinson.hpp"
#include "specunc/three.hpp"
#include "specunc/uncertainty.hpp"
#include "specunc/weak_metrics.hpp"

namespace fs = std::filesystem;
using namespace specunc;
using io::json;

namespace {

SpectralMeasure load_measure(const std::string& arg, int grid) {
  if (arg == "lebesgue") return SpectralMeasure::lebesgue(grid);
  return io::measure_from_json(io::read_file(arg));
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

double max_modulus_sample(const RegionK& k, Complex& where) {
  double r = -1.0;
  for (const auto& s : k.samples()) {
    if (std::abs(s.z) > r) {
      r = std::abs(s.z);
      where = s.z;
    }
  }
  return r;
}

// Rows of curve index, curve parameter, lower/upper P bounds and the disc
// center, optionally followed by P of extra measures.
std::string envelope_csv(const std::function<DiscEnvelope(Complex)>& disc, const RegionK& k,
                         const std::vector<std::pair<std::string, SpectralMeasure>>& extra) {
  std::ostringstream os;
  os.precision(12);
  os << "curve,t,lower,upper,center";
  for (const auto& e : extra) os << ',' << e.first;
  os << '\n';
  for (const auto& s : k.samples()) {
    const DiscEnvelope d = disc(s.z);
    os << s.curve << ',' << s.t << ',' << d.center.real() - d.radius << ',' << d.center.real() + d.radius << ','
       << d.center.real();
    for (const auto& e : extra) os << ',' << poisson_eval(e.second, s.z);
    os << '\n';
  }
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

json sec6_demo(C0Convention conv, const fs::path& dir) {
  const DemoFixture f = sec6_fixture(conv);
  fs::create_directories(dir);
  const SpectralMeasure nu = f.measure();
  io::write_file((dir / "measure.json").string(), io::to_json(nu));
  json report = {{"fixture", f.name}, {"c0_convention", to_string(conv)}, {"c0", f.c0()}};
  for (int n : {5, 20}) {
    const std::string tag = "n" + std::to_string(n);
    const CovarianceSequence c = f.covariance(n);
    const SpectralMeasure me = max_entropy_spectrum(c);
    const DiameterReport d = diameter_toeplitz(c, f.k);
    io::write_file((dir / ("covariance_" + tag + ".json")).string(), io::to_json(c));
    io::write_file((dir / ("me_" + tag + ".json")).string(), io::to_json(me));
    io::write_file((dir / ("diameter_" + tag + ".json")).string(), io::to_json(d));
    const ToeplitzDiscs discs(c);
    std::vector<std::pair<std::string, SpectralMeasure>> extra{{"true", nu}, {"me", me}};
    if (n == 20) {
      // The deterministic member with gamma_21 = 1.
      SchurParameters s = covariance_to_schur(c);
      s.gammas.push_back(Complex(1.0));
      s.singular = true;
      const SpectralMeasure line = atomic_measure(s);
      io::write_file((dir / "line_spectrum_n20.json").string(), io::to_json(line));
      extra.emplace_back("line", line);
    }
    write_text(dir / ("envelope_" + tag + ".csv"),
               envelope_csv([&](Complex z) { return discs.at(z); }, f.k, extra));
    report[tag] = {{"diameter", d.rho},
                   {"argmax_z", io::to_json(d.argmax_z)},
                   {"extremal_separation", d.extremal_separation},
                   {"delta_K_true_me", delta_K(nu, me, f.k)},
                   {"apriori_bound", apriori_bound_toeplitz(c.c0(), n, f.k)}};
  }
  report["reference"] = {{"n5", {{"diameter", 20.79}, {"delta_K_true_me", 5.66}}},
                     {"n20", {{"diameter", 2.52}, {"delta_K_true_me", 0.29}}}};
  io::write_file((dir / "report.json").string(), report);
  return report;
}

json sec8_demo(C0Convention conv, const fs::path& dir, std::size_t samples, std::uint64_t seed) {
  const DemoFixture f = sec8_fixture(conv);
  fs::create_directories(dir);
  const SpectralMeasure nu = f.measure();
  const CovarianceSequence c = f.covariance(20);
  const PickData p = generalized_moments(nu, f.poles);
  const FilterBank bank(f.poles);
  io::write_file((dir / "measure.json").string(), io::to_json(nu));
  io::write_file((dir / "covariance_n20.json").string(), io::to_json(c));
  io::write_file((dir / "pick.json").string(), io::to_json(p));
  io::write_file((dir / "filter_bank.json").string(), io::to_json(bank));

  const SpectralMeasure me = max_entropy_spectrum(c);
  const SpectralMeasure three = np_spectrum(p);
  io::write_file((dir / "me_n20.json").string(), io::to_json(me));
  io::write_file((dir / "three.json").string(), io::to_json(three));

  const DiameterReport dt = diameter_toeplitz(c, f.k);
  const DiameterReport dp = diameter_pick(p, f.k);
  io::write_file((dir / "diameter_toeplitz.json").string(), io::to_json(dt));
  io::write_file((dir / "diameter_pick.json").string(), io::to_json(dp));

  const ToeplitzDiscs tdiscs(c);
  const PickDiscs pdiscs(p);
  write_text(dir / "envelope_toeplitz.csv",
             envelope_csv([&](Complex z) { return tdiscs.at(z); }, f.k, {{"true", nu}, {"me", me}}));
  write_text(dir / "envelope_pick.csv",
             envelope_csv([&](Complex z) { return pdiscs.at(z); }, f.k, {{"true", nu}, {"three", three}}));

  json report = {{"fixture", f.name}, {"c0_convention", to_string(conv)}, {"c0", f.c0()}};
  const PickBound pb = apriori_bound_pick(f.poles, p.values()[0].real(), f.k);
  report["diameter_pick"] = dp.rho;
  report["diameter_toeplitz"] = dt.rho;
  report["diameter_ratio"] = dp.rho / dt.rho;
  report["bound_pick"] = pb.bound;
  report["bound_pick_per_w0"] = pb.bound / p.values()[0].real();
  report["bound_toeplitz"] = apriori_bound_toeplitz(c.c0(), 20, f.k);

  if (samples > 0) {
    const auto y = f.simulate(samples, seed);
    const WEstimate est = estimate_w_from_samples(y, bank);
    io::write_file((dir / "pick_estimated.json").string(), io::to_json(est.data));
    json rows = json::array();
    for (std::size_t k = 0; k < p.size(); ++k) {
      rows.push_back({{"node", io::to_json(p.nodes()[k])},
                      {"exact", io::to_json(p.values()[k])},
                      {"estimate", io::to_json(est.data.values()[k])},
                      {"stderr", {est.stderr_re[k], est.stderr_im[k]}}});
    }
    report["estimates"] = {{"samples", samples}, {"seed", seed}, {"w", rows}};
  }
  report["reference"] = {{"diameter_pick", 0.194}, {"diameter_toeplitz", 2.831},
                     {"bound_pick_per_w0", 0.151}, {"bound_toeplitz", 7.167}};
  io::write_file((dir / "report.json").string(), report);
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty of spectral estimates from covariance and filter-bank statistics"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  int grid = kDefaultGrid;
  int shape_samples = kDefaultShapeSamples;
  app.add_option("--grid", grid, "Grid size for measures built by the command")->check(CLI::PositiveNumber);
  app.add_option("--shape-samples", shape_samples, "Samples per region shape")->check(CLI::PositiveNumber);

  std::string measure_file, cov_file, pick_file, region_text, kernel_file, poles_file, a_file, b_file;
  std::string kind, init_file, measure_overlay;
  int n = 0, restarts = 8, evals_per_dim = 400, transport_grid = 256;
  double c0 = 0.0, w0 = 1.0, kappa = 1.0;
  std::uint64_t seed = 1;
  bool no_extremal = false, solve_dual = false;

  auto* moments_cmd = app.add_subcommand("moments", "Covariances c_0..c_n of a measure");
  moments_cmd->add_option("--measure", measure_file, "Measure file or 'lebesgue'")->required();
  moments_cmd->add_option("--n", n, "Largest lag")->required()->check(CLI::NonNegativeNumber);

  auto* me_cmd = app.add_subcommand("me", "Maximum-entropy spectrum of a covariance sequence");
  me_cmd->add_option("--cov", cov_file)->required();

  auto* three_cmd = app.add_subcommand("three", "Central Nevanlinna-Pick spectrum of Pick data");
  three_cmd->add_option("--pick", pick_file)->required();

  auto* diam_cmd = app.add_subcommand("diameter", "Diameter of the uncertainty set over a region");
  auto* diam_cov = diam_cmd->add_option("--cov", cov_file);
  auto* diam_pick = diam_cmd->add_option("--pick", pick_file);
  diam_cov->excludes(diam_pick);
  diam_cmd->add_option("--region", region_text)->required();
  diam_cmd->add_flag("--no-extremal", no_extremal, "Skip the extremal pair search");

  auto* bound_cmd = app.add_subcommand("bound", "A-priori uncertainty bound");
  auto* bound_c0 = bound_cmd->add_option("--c0", c0);
  bound_cmd->add_option("--n", n);
  auto* bound_poles = bound_cmd->add_option("--poles", poles_file, "Filter bank file");
  bound_cmd->add_option("--w0", w0);
  bound_c0->excludes(bound_poles);
  bound_cmd->add_option("--region", region_text)->required();

  auto* env_cmd = app.add_subcommand("envelope", "CSV of P-value bounds along the region");
  auto* env_cov = env_cmd->add_option("--cov", cov_file);
  auto* env_pick = env_cmd->add_option("--pick", pick_file);
  env_cov->excludes(env_pick);
  env_cmd->add_option("--region", region_text)->required();
  env_cmd->add_option("--circle-samples", shape_samples, "Samples per region shape")->check(CLI::PositiveNumber);
  env_cmd->add_option("--measure", measure_overlay, "Also tabulate P of this measure");

  auto* metric_cmd = app.add_subcommand("metric", "Distance between two measures");
  metric_cmd->add_option("--kind", kind)->required()->check(CLI::IsMember({"deltaK", "smooth", "transport"}));
  metric_cmd->add_option("--a", a_file)->required();
  metric_cmd->add_option("--b", b_file)->required();
  metric_cmd->add_option("--region", region_text);
  metric_cmd->add_option("--kernel", kernel_file);
  metric_cmd->add_option("--kappa", kappa);
  metric_cmd->add_option("--transport-grid", transport_grid)->check(CLI::PositiveNumber);
  metric_cmd->add_flag("--dual", solve_dual, "Also solve the Kantorovich-Rubinstein dual");

  auto* mass_cmd = app.add_subcommand("mass-range", "Range of the kernel-weighted mass over the uncertainty set");
  mass_cmd->add_option("--cov", cov_file)->required();
  mass_cmd->add_option("--kernel", kernel_file)->required();

  auto* tune_cmd = app.add_subcommand("tune-poles", "Filter-bank poles minimizing the a-priori bound");
  tune_cmd->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  tune_cmd->add_option("--region", region_text)->required();
  tune_cmd->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  tune_cmd->add_option("--seed", seed);
  tune_cmd->add_option("--w0", w0);
  tune_cmd->add_option("--init", init_file, "Filter bank for the first restart");
  tune_cmd->add_option("--evals-per-dim", evals_per_dim)->check(CLI::PositiveNumber);

  std::string demo_name, out_dir = ".", convention = "both";
  std::size_t demo_samples = 200000;
  auto* demo_cmd = app.add_subcommand("demo", "Write the sec6 or sec8 demo artifacts");
  demo_cmd->add_option("name", demo_name)->required()->check(CLI::IsMember({"sec6", "sec8"}));
  demo_cmd->add_option("--out", out_dir);
  demo_cmd->add_option("--convention", convention)
      ->check(CLI::IsMember({"both", "as-displayed", "as-stated"}));
  demo_cmd->add_option("--samples", demo_samples, "Simulated samples for the sec8 estimates (0 to skip)");
  demo_cmd->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*moments_cmd) {
      print(io::to_json(moments(load_measure(measure_file, grid), n)));
    } else if (*me_cmd) {
      print(io::to_json(max_entropy_spectrum(io::covariance_from_json(io::read_file(cov_file)), grid)));
    } else if (*three_cmd) {
      print(io::to_json(np_spectrum(io::pick_from_json(io::read_file(pick_file)), grid)));
    } else if (*diam_cmd) {
      const RegionK k = RegionK::parse(region_text, shape_samples);
      DiameterOptions opt;
      opt.extremal = !no_extremal;
      opt.grid = grid;
      if (!cov_file.empty()) {
        print(io::to_json(diameter_toeplitz(io::covariance_from_json(io::read_file(cov_file)), k, opt)));
      } else if (!pick_file.empty()) {
        print(io::to_json(diameter_pick(io::pick_from_json(io::read_file(pick_file)), k, opt)));
      } else {
        throw InputError("diameter: give --cov or --pick");
      }
    } else if (*bound_cmd) {
      const RegionK k = RegionK::parse(region_text, shape_samples);
      if (!poles_file.empty()) {
        const FilterBank bank = io::filter_bank_from_json(io::read_file(poles_file));
        const PickBound b = apriori_bound_pick(bank.poles(), w0, k);
        json eq = json::array();
        for (const auto& v : b.equality_values) eq.push_back(io::to_json(v));
        print({{"bound", b.bound}, {"argmax", io::to_json(b.argmax)}, {"equality_values", eq}});
      } else if (bound_c0->count() > 0) {
        Complex where;
        max_modulus_sample(k, where);
        print({{"bound", apriori_bound_toeplitz(c0, n, k)},
               {"argmax", io::to_json(where)},
               {"max_modulus", k.max_modulus()}});
      } else {
        throw InputError("bound: give --c0 and --n, or --poles and --w0");
      }
    } else if (*env_cmd) {
      const RegionK k = RegionK::parse(region_text, shape_samples);
      std::vector<std::pair<std::string, SpectralMeasure>> extra;
      if (!measure_overlay.empty()) extra.emplace_back("measure", load_measure(measure_overlay, grid));
      if (!cov_file.empty()) {
        const ToeplitzDiscs discs(io::covariance_from_json(io::read_file(cov_file)));
        std::cout << envelope_csv([&](Complex z) { return discs.at(z); }, k, extra);
      } else if (!pick_file.empty()) {
        const PickDiscs discs(io::pick_from_json(io::read_file(pick_file)));
        std::cout << envelope_csv([&](Complex z) { return discs.at(z); }, k, extra);
      } else {
        throw InputError("envelope: give --cov or --pick");
      }
    } else if (*metric_cmd) {
      const SpectralMeasure a = load_measure(a_file, grid);
      const SpectralMeasure b = load_measure(b_file, grid);
      if (kind == "deltaK") {
        if (region_text.empty()) throw InputError("metric deltaK: --region is required");
        print({{"kind", kind}, {"value", delta_K(a, b, RegionK::parse(region_text, shape_samples))}});
      } else if (kind == "smooth") {
        if (kernel_file.empty()) throw InputError("metric smooth: --kernel is required");
        const TestKernel g = io::kernel_from_json(io::read_file(kernel_file));
        if (g.min_fourier_magnitude() == 0.0) {
          std::cerr << "warning: kernel has a vanishing Fourier coefficient; the result is a pseudo-metric\n";
        }
        print({{"kind", kind}, {"value", delta_smooth(a, b, g)}});
      } else {
        TransportOptions opt;
        opt.grid = transport_grid;
        opt.solve_dual = solve_dual;
        const TransportResult r = transport_metric_detail(a, b, kappa, opt);
        json out = {{"kind", kind}, {"value", r.value}, {"lp_dual", r.lp_dual}, {"grid", r.grid}};
        if (r.lipschitz_dual) out["lipschitz_dual"] = *r.lipschitz_dual;
        print(out);
      }
    } else if (*mass_cmd) {
      const MassRange r = mass_range(io::covariance_from_json(io::read_file(cov_file)),
                                     io::kernel_from_json(io::read_file(kernel_file)));
      print({{"lo", r.lo}, {"hi", r.hi}, {"lo_dual", r.lo_dual}, {"hi_dual", r.hi_dual}});
    } else if (*tune_cmd) {
      TuneOptions opt;
      opt.restarts = restarts;
      opt.seed = seed;
      opt.evaluations_per_dim = evals_per_dim;
      if (!init_file.empty()) opt.init = io::filter_bank_from_json(io::read_file(init_file));
      print(io::to_json(tune_poles(n, RegionK::parse(region_text, shape_samples), w0, opt)));
    } else if (*demo_cmd) {
      std::vector<C0Convention> convs;
      if (convention != "as-stated") convs.push_back(C0Convention::as_displayed);
      if (convention != "as-displayed") convs.push_back(C0Convention::as_stated);
      json all = json::array();
      for (const auto conv : convs) {
        const fs::path dir = fs::path(out_dir) / demo_name / to_string(conv);
        std::cerr << "writing " << dir.string() << '\n';
        all.push_back(demo_name == "sec6" ? sec6_demo(conv, dir) : sec8_demo(conv, dir, demo_samples, seed));
      }
      io::write_file((fs::path(out_dir) / demo_name / "report.json").string(), all);
      print(all);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
