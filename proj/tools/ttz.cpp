// ttz: command-line front end for twisted Toeplitz spectral experiments.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ttz/experiment.hpp"
#include "ttz/ttz.hpp"

namespace {

using namespace ttz;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::string> n, seed, sigma, noise, mode, out, preset;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key=value config file (or a metrics.json to re-run)");
    app->add_option("--n", n, "matrix size, or a comma-separated list");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--sigma", sigma, "perturbation scale: a number or 1/n");
    app->add_option("--noise", noise, "paper-binomial | standard-normal | rademacher | uniform-sym");
    app->add_option("--mode", mode, "deterministic | perturbed | randomized");
    app->add_option("--out", out, "output directory");
    app->add_option("--preset", preset, "symbol preset: fig1 | fig2 | ex4 | ex5");
  }

  /// Config file keys, then flags on top.
  KeyValues merged() const {
    KeyValues kv = config.empty() ? KeyValues{} : load_config_file(config);
    if (preset) {
      for (auto it = kv.begin(); it != kv.end();) it = it->first.rfind("symbol.", 0) == 0 ? kv.erase(it) : std::next(it);
      kv["symbol.preset"] = *preset;
    }
    if (n) kv["n"] = *n;
    if (seed) kv["seed"] = *seed;
    if (sigma) kv["sigma"] = *sigma;
    if (noise) kv["noise.dist"] = *noise;
    if (mode) kv["mode"] = *mode;
    if (out) kv["out"] = *out;
    return kv;
  }
};

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : detail::split(text, ',')) out.push_back(detail::parse_real(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

ComplexRect parse_window(const std::string& text) {
  const std::vector<double> v = parse_list("--window", text);
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3]))
    throw ConfigError("--window expects re_min,re_max,im_min,im_max with min < max");
  return {v[0], v[1], v[2], v[3]};
}

std::string x_tag(std::size_t r) { return "x" + std::to_string(r); }

int cmd_spectrum(const CommonFlags& flags) {
  const ExperimentConfig cfg = ExperimentConfig::from_kv(flags.merged());
  const auto results = run_experiment(cfg);
  std::size_t unconverged = 0;
  for (const auto& r : results) {
    unconverged += r.unconverged;
    std::printf("n=%zu  sliced_w1_to_limit=%.6g  dir=%s  status=%s\n", r.n,
                r.metrics["distances"]["sliced_w1_to_limit"].get<double>(), r.dir.string().c_str(),
                r.metrics["status"].get<std::string>().c_str());
  }
  return unconverged ? kExitNumerical : kExitOk;
}

int cmd_potential(const CommonFlags& flags, std::size_t grid, const std::string& window_text, const std::string& xs_text) {
  const ExperimentConfig cfg = ExperimentConfig::from_kv(flags.merged());
  const LaurentSymbol sym = cfg.symbol();
  const ComplexRect window = window_text.empty() ? default_window(sym) : parse_window(window_text);
  const std::vector<double> xs = parse_list("--x", xs_text);
  for (double x : xs)
    if (x < 0.0 || x > 1.0) throw ConfigError("--x values must lie in [0, 1]");
  if (grid < 2) throw ConfigError("--grid must be >= 2");
  const std::size_t n = cfg.n.front();
  const BandedComplexMatrix m = build_for_mode(sym, n, cfg.mode, cfg.sigma, cfg.noise, cfg.seed);
  const bool tri = sym.is_tridiagonal();
  std::optional<TridiagonalSymbol> tsym;
  if (tri) tsym = TridiagonalSymbol::from_laurent(sym);

  std::vector<std::string> rows(grid * grid);
  parallel_for(grid, [&](std::size_t r) {
    const double re = window.re_min + window.width() * static_cast<double>(r) / static_cast<double>(grid - 1);
    for (std::size_t s = 0; s < grid; ++s) {
      const double im = window.im_min + window.height() * static_cast<double>(s) / static_cast<double>(grid - 1);
      const cplx z(re, im);
      std::string line = format_17g(re) + "," + format_17g(im);
      if (tri) {
        line += "," + format_17g(integrated_gamma(*tsym, z));
        for (double x : xs) line += "," + format_17g(gamma_field(*tsym, x, z));
      }
      const double ld = tri ? continuant_log_det(m, z) : log_abs_det(m, z);
      line += "," + format_17g(ld / static_cast<double>(n));
      rows[r * grid + s] = std::move(line);
    }
  });
  std::string header = "re,im";
  if (tri) {
    header += ",integrated_gamma";
    for (std::size_t r = 0; r < xs.size(); ++r) header += ",gamma_" + x_tag(r);
  }
  header += ",matrix_log_potential";
  std::string text = header + "\n";
  for (const auto& row : rows) text += row + "\n";
  const fs::path dir(cfg.out);
  write_text(dir / "potential.csv", text);

  json j;
  j["n"] = n;
  j["grid"] = grid;
  j["window"] = {window.re_min, window.re_max, window.im_min, window.im_max};
  j["x"] = xs;
  j["columns"] = header;
  j["seed"] = cfg.seed;
  j["rng"] = std::string(kRngAlgorithm);
  j["config"] = kv_to_json(cfg.to_kv());
  write_text(dir / "metrics.json", j.dump(2) + "\n");
  std::printf("wrote %s (%zu points)\n", (dir / "potential.csv").string().c_str(), grid * grid);
  return kExitOk;
}

int cmd_limit(const CommonFlags& flags, const std::string& xs_text, std::size_t grid, double tol) {
  const ExperimentConfig cfg = ExperimentConfig::from_kv(flags.merged());
  const LaurentSymbol sym = cfg.symbol();
  const fs::path dir(cfg.out);
  const std::vector<double> xs = parse_list("--x", xs_text);
  for (double x : xs)
    if (x < 0.0 || x > 1.0) throw ConfigError("--x values must lie in [0, 1]");
  json j;
  j["seed"] = cfg.seed;
  j["rng"] = std::string(kRngAlgorithm);
  const EigenOptions opts{cfg.balance, 200};
  if (sym.is_tridiagonal()) {
    const TridiagonalSymbol tri = TridiagonalSymbol::from_laurent(sym);
    const PointCloud mu = mu_sample(tri, cfg.limit_samples, cfg.seed);
    write_cloud_csv(dir / "mu_samples.csv", mu);
    const auto intervals = xi_support_tridiagonal(tri, 200);
    write_cloud_csv(dir / "xi_support.csv", sample_intervals(intervals, 201));
    std::string text = "x,center_re,center_im,half_width_re,half_width_im\n";
    for (std::size_t r = 0; r < intervals.size(); ++r) {
      const auto& iv = intervals[r];
      text += format_17g(static_cast<double>(r) / 200.0) + "," + format_17g(iv.center.real()) + "," +
              format_17g(iv.center.imag()) + "," + format_17g(iv.half_width.real()) + "," +
              format_17g(iv.half_width.imag()) + "\n";
    }
    write_text(dir / "xi_intervals.csv", text);
    j["mu_samples"] = mu.size();
  }
  std::vector<json> entries(xs.size());
  parallel_for(xs.size(), [&](std::size_t r) {
    const FrozenLaurent f = sym.frozen(xs[r]);
    const SchmidtSpitzerSet lam = schmidt_spitzer_set(f, default_window(f), grid, grid, tol);
    write_cloud_csv(dir / ("lambda_" + x_tag(r) + ".csv"), lam.points);
    const PointCloud nu = frozen_esm(f, cfg.frozen_m, opts);
    write_cloud_csv(dir / ("frozen_esm_" + x_tag(r) + ".csv"), nu);
    entries[r] = {{"x", xs[r]},
                  {"lambda_points", lam.points.size()},
                  {"lambda_skipped", lam.skipped},
                  {"grid_cell_diagonal", lam.cell_diagonal()},
                  {"frozen_esm_points", nu.size()}};
  });
  j["frozen"] = entries;
  j["grid"] = grid;
  j["tol"] = tol;
  j["config"] = kv_to_json(cfg.to_kv());
  write_text(dir / "metrics.json", j.dump(2) + "\n");
  std::printf("wrote limit objects to %s\n", dir.string().c_str());
  return kExitOk;
}

int cmd_compare(const std::string& a, const std::string& b, std::size_t angles, const std::optional<std::string>& out) {
  const PointCloud pa = read_cloud_csv(a), pb = read_cloud_csv(b);
  if (pa.empty() || pb.empty()) throw ConfigError("compare needs two non-empty clouds");
  json j;
  j["a"] = a;
  j["b"] = b;
  j["size_a"] = pa.size();
  j["size_b"] = pb.size();
  j["angles"] = angles;
  j["sliced_w1"] = sliced_w1(pa, pb, angles);
  j["hausdorff"] = hausdorff(pa, pb);
  j["directed_hausdorff_a_to_b"] = directed_hausdorff(pa, pb);
  j["directed_hausdorff_b_to_a"] = directed_hausdorff(pb, pa);
  std::cout << j.dump(2) << "\n";
  if (out) write_text(fs::path(*out) / "compare.json", j.dump(2) + "\n");
  return kExitOk;
}

int cmd_figure(const std::string& id, const CommonFlags& flags) {
  KeyValues kv = flags.merged();
  if (!kv.count("out")) kv["out"] = "figure-" + id;
  const FigureRequest req = FigureRequest::from_kv(id, kv);
  const FigureResult res = reproduce_figure(req);
  for (const auto& f : res.files) std::printf("wrote %s\n", f.string().c_str());
  return res.unconverged ? kExitNumerical : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of twisted Toeplitz matrices under structured random perturbations"};
  app.require_subcommand(1);

  CommonFlags spectrum_flags, potential_flags, limit_flags, figure_flags;

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, limit samples, distances and scatter plot");
  spectrum_flags.attach(spectrum);

  auto* potential = app.add_subcommand("potential", "gamma and integrated gamma over a z-grid");
  potential_flags.attach(potential);
  std::size_t pot_grid = 41;
  std::string pot_window, pot_x = "0,0.5,1";
  potential->add_option("--grid", pot_grid, "grid nodes per axis");
  potential->add_option("--window", pot_window, "re_min,re_max,im_min,im_max (default: padded symbol range)");
  potential->add_option("--x", pot_x, "x values for gamma(x, z) columns");

  auto* limit = app.add_subcommand("limit", "mu samples, Xi support, Schmidt-Spitzer sets and frozen spectra");
  limit_flags.attach(limit);
  std::string limit_x = "0,0.25,0.5,0.75,1";
  std::size_t limit_grid = 400;
  double limit_tol = 0.02;
  limit->add_option("--x", limit_x, "x values of the frozen symbols");
  limit->add_option("--grid", limit_grid, "Schmidt-Spitzer grid nodes per axis");
  limit->add_option("--tol", limit_tol, "relative modulus-gap threshold");

  auto* compare = app.add_subcommand("compare", "sliced W1 and Hausdorff distance between two CSV clouds");
  std::string cmp_a, cmp_b;
  std::size_t cmp_angles = 32;
  std::optional<std::string> cmp_out;
  compare->add_option("--a", cmp_a, "first cloud (re,im CSV)")->required();
  compare->add_option("--b", cmp_b, "second cloud (re,im CSV)")->required();
  compare->add_option("--angles", cmp_angles, "projection angles K");
  compare->add_option("--out", cmp_out, "directory for compare.json");

  auto* figure = app.add_subcommand("figure", "reproduce fig1 | fig2 | fig4 | fig5");
  std::string figure_id;
  figure->add_option("id", figure_id, "figure id")->required();
  figure_flags.attach(figure);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*spectrum) return cmd_spectrum(spectrum_flags);
    if (*potential) return cmd_potential(potential_flags, pot_grid, pot_window, pot_x);
    if (*limit) return cmd_limit(limit_flags, limit_x, limit_grid, limit_tol);
    if (*compare) return cmd_compare(cmp_a, cmp_b, cmp_angles, cmp_out);
    if (*figure) return cmd_figure(figure_id, figure_flags);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "expression error: %s\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
