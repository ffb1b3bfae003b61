// Config-driven experiment runs and figure reproduction.
//
// Config text is flat key=value, one per line, '#' starts a comment:
//   symbol.preset=fig1            (or symbol.d / symbol.b / symbol.c, or symbol.coeff.<power>)
//   n=125,250,500                 sigma=1/n            mode=perturbed
//   noise.dist=paper-binomial     noise.complex=false  noise.center=256
//   seed=1  limit.samples=100000  compare.angles=32    out=runs/fig1
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ttz/construct.hpp"
#include "ttz/errors.hpp"
#include "ttz/io.hpp"
#include "ttz/limits.hpp"
#include "ttz/linalg.hpp"
#include "ttz/measures.hpp"
#include "ttz/potential.hpp"
#include "ttz/rng.hpp"
#include "ttz/symbol.hpp"

namespace ttz {

using json = nlohmann::ordered_json;
using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    const unsigned long long r = std::stoull(v, &used, 10);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  const std::uint64_t r = parse_u64(key, v);
  if (r == 0) throw ConfigError(key + ": must be >= 1");
  return static_cast<std::size_t>(r);
}

inline double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double r = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(r)) throw std::invalid_argument("bad");
    return r;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::size_t lineno = 0;
  std::stringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

/// Loads key=value text, or a metrics.json whose "config" object echoes a previous run.
inline KeyValues load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".json") {
    json doc;
    try {
      doc = json::parse(buf.str());
    } catch (const json::exception& e) {
      throw ConfigError("config " + path.string() + ": " + e.what());
    }
    const json& cfg = doc.contains("config") ? doc["config"] : doc;
    if (!cfg.is_object()) throw ConfigError("config " + path.string() + ": expected an object");
    KeyValues kv;
    for (const auto& [k, v] : cfg.items()) kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return kv;
  }
  return parse_key_values(buf.str());
}

enum class Mode { Deterministic, Perturbed, Randomized };

inline Mode parse_mode(const std::string& s) {
  if (s == "deterministic") return Mode::Deterministic;
  if (s == "perturbed") return Mode::Perturbed;
  if (s == "randomized") return Mode::Randomized;
  throw ConfigError("mode must be deterministic, perturbed or randomized, got '" + s + "'");
}

inline std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Deterministic: return "deterministic";
    case Mode::Perturbed: return "perturbed";
    case Mode::Randomized: return "randomized";
  }
  return "?";
}

struct ExperimentConfig {
  std::string preset;                        // empty when given inline
  std::map<int, std::string> coefficients;   // power -> expression source
  std::vector<std::size_t> n{500};
  SigmaSpec sigma;
  NoiseSpec noise;
  Mode mode = Mode::Perturbed;
  std::uint64_t seed = 1;
  std::size_t limit_samples = 100000;
  std::size_t frozen_m = 300;     // banded symbols: Toeplitz size for frozen spectra
  std::size_t frozen_nodes = 11;  // banded symbols: x-grid of the frozen-spectrum limit proxy
  std::size_t compare_angles = 32;
  bool balance = true;
  std::string out = "out";

  static ExperimentConfig from_kv(const KeyValues& kv) {
    ExperimentConfig c;
    bool inline_symbol = false;
    for (const auto& [key, value] : kv) {
      if (key == "symbol.preset") {
        c.preset = value;
      } else if (key == "symbol.d" || key == "symbol.b" || key == "symbol.c") {
        const int power = key == "symbol.d" ? -1 : (key == "symbol.b" ? 0 : 1);
        if (c.coefficients.count(power)) throw ConfigError(key + ": coefficient of z^" + std::to_string(power) + " given twice");
        c.coefficients[power] = value;
        inline_symbol = true;
      } else if (key.rfind("symbol.coeff.", 0) == 0) {
        const std::string p = key.substr(13);
        int power = 0;
        try {
          std::size_t used = 0;
          power = std::stoi(p, &used);
          if (used != p.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          throw ConfigError(key + ": power must be an integer");
        }
        if (c.coefficients.count(power)) throw ConfigError(key + ": coefficient of z^" + p + " given twice");
        c.coefficients[power] = value;
        inline_symbol = true;
      } else if (key == "n") {
        c.n.clear();
        for (const std::string& item : detail::split(value, ',')) c.n.push_back(detail::parse_count("n", item));
        if (c.n.empty()) throw ConfigError("n: empty list");
      } else if (key == "sigma") {
        c.sigma = SigmaSpec::parse(value);
      } else if (key == "noise.dist") {
        const NoiseSpec parsed = NoiseSpec::parse(value);
        c.noise.kind = parsed.kind;
      } else if (key == "noise.complex") {
        c.noise.complex_valued = detail::parse_bool(key, value);
      } else if (key == "noise.center") {
        c.noise.center = detail::parse_real(key, value);
      } else if (key == "noise.trials") {
        c.noise.trials = static_cast<int>(detail::parse_count(key, value));
      } else if (key == "noise.half_width") {
        c.noise.half_width = detail::parse_real(key, value);
      } else if (key == "mode") {
        c.mode = parse_mode(value);
      } else if (key == "seed") {
        c.seed = detail::parse_u64(key, value);
      } else if (key == "limit.samples") {
        c.limit_samples = detail::parse_count(key, value);
      } else if (key == "limit.frozen_m") {
        c.frozen_m = detail::parse_count(key, value);
      } else if (key == "limit.frozen_nodes") {
        c.frozen_nodes = detail::parse_count(key, value);
        if (c.frozen_nodes < 2) throw ConfigError("limit.frozen_nodes must be >= 2");
      } else if (key == "compare.angles") {
        c.compare_angles = detail::parse_count(key, value);
      } else if (key == "eigen.balance") {
        c.balance = detail::parse_bool(key, value);
      } else if (key == "out") {
        c.out = value;
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
    if (!c.preset.empty() && inline_symbol) throw ConfigError("give either symbol.preset or inline coefficients, not both");
    if (c.preset.empty() && !inline_symbol) c.preset = "fig1";
    c.symbol();  // validates presets and expressions
    return c;
  }

  /// Canonical echo; from_kv(to_kv()) reproduces the configuration.
  KeyValues to_kv() const {
    KeyValues kv;
    if (!preset.empty()) {
      kv["symbol.preset"] = preset;
    } else {
      for (const auto& [p, src] : coefficients) kv["symbol.coeff." + std::to_string(p)] = src;
    }
    std::string ns;
    for (std::size_t k = 0; k < n.size(); ++k) ns += (k ? "," : "") + std::to_string(n[k]);
    kv["n"] = ns;
    kv["sigma"] = sigma.str();
    kv["noise.dist"] = noise.tag();
    kv["noise.complex"] = noise.complex_valued ? "true" : "false";
    kv["noise.center"] = detail::format_number(noise.center);
    kv["noise.trials"] = std::to_string(noise.trials);
    kv["noise.half_width"] = detail::format_number(noise.half_width);
    kv["mode"] = mode_name(mode);
    kv["seed"] = std::to_string(seed);
    kv["limit.samples"] = std::to_string(limit_samples);
    kv["limit.frozen_m"] = std::to_string(frozen_m);
    kv["limit.frozen_nodes"] = std::to_string(frozen_nodes);
    kv["compare.angles"] = std::to_string(compare_angles);
    kv["eigen.balance"] = balance ? "true" : "false";
    kv["out"] = out;
    return kv;
  }

  LaurentSymbol symbol() const {
    if (!preset.empty()) return preset_symbol(preset);
    std::vector<std::pair<int, std::string>> terms(coefficients.begin(), coefficients.end());
    return LaurentSymbol::from_strings(terms);
  }
};

inline json kv_to_json(const KeyValues& kv) {
  json j = json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// The first exception (in index order) is rethrown after all workers finish.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Building blocks shared by runs and figures.

inline BandedComplexMatrix build_for_mode(const LaurentSymbol& sym, std::size_t n, Mode mode, const SigmaSpec& sigma,
                                          const NoiseSpec& noise, std::uint64_t seed) {
  switch (mode) {
    case Mode::Deterministic: return build_twisted(sym, n);
    case Mode::Perturbed: return build_perturbed(sym, n, sigma.resolve(n), noise, seed);
    case Mode::Randomized: return build_randomized(sym, n, seed);
  }
  throw ConfigError("bad mode");
}

/// Sampled limit object: mu for tridiagonal symbols; for wider bands the union
/// of frozen Toeplitz spectra over an x-grid (an empirical proxy for the limit).
struct LimitCloud {
  std::string kind;
  PointCloud samples;
  PointCloud support;                                 // Xi samples or the frozen-spectrum cloud
  std::vector<std::pair<cplx, cplx>> support_segments;  // tridiagonal only
};

inline LimitCloud limit_cloud(const LaurentSymbol& sym, std::size_t samples, std::uint64_t seed,
                              std::size_t frozen_m, std::size_t frozen_nodes, const EigenOptions& opts) {
  LimitCloud out;
  if (sym.is_tridiagonal()) {
    const TridiagonalSymbol tri = TridiagonalSymbol::from_laurent(sym);
    out.kind = "mu";
    out.samples = mu_sample(tri, samples, seed);
    const auto intervals = xi_support_tridiagonal(tri, 200);
    out.support = sample_intervals(intervals, 201);
    for (const auto& iv : intervals) out.support_segments.emplace_back(iv.lower_end(), iv.upper_end());
  } else {
    out.kind = "frozen-spectra";
    for (std::size_t r = 0; r < frozen_nodes; ++r) {
      const double x = static_cast<double>(r) / static_cast<double>(frozen_nodes - 1);
      out.samples.append(frozen_esm(sym.frozen(x), frozen_m, opts));
    }
    out.support = out.samples;
  }
  return out;
}

inline SvgLayer range_layer(const LaurentSymbol& sym) {
  return {"range", "#1f4fd8", 0.7, 0.35, symbol_range(sym, 60, 256), {}};
}

inline ComplexRect plot_window(const LaurentSymbol& sym, const std::vector<const PointCloud*>& extra) {
  ComplexRect w = default_window(sym);
  for (const PointCloud* c : extra) {
    if (!c || c->empty()) continue;
    const ComplexRect b = ComplexRect::bounding_box(*c);
    w.re_min = std::min(w.re_min, b.re_min);
    w.re_max = std::max(w.re_max, b.re_max);
    w.im_min = std::min(w.im_min, b.im_min);
    w.im_max = std::max(w.im_max, b.im_max);
  }
  return w;
}

// ---------------------------------------------------------------------------

struct RunResult {
  std::size_t n = 0;
  fs::path dir;
  std::size_t unconverged = 0;
  json metrics;
};

inline RunResult run_single(const ExperimentConfig& cfg, std::size_t n, const fs::path& dir) {
  using clock = std::chrono::steady_clock;
  const LaurentSymbol sym = cfg.symbol();
  const EigenOptions opts{cfg.balance, 200};
  RunResult res;
  res.n = n;
  res.dir = dir;

  auto t0 = clock::now();
  const BandedComplexMatrix m = build_for_mode(sym, n, cfg.mode, cfg.sigma, cfg.noise, cfg.seed);
  const double t_build = detail::seconds_since(t0);

  t0 = clock::now();
  const Spectrum spec = eigenvalues(m, opts);
  const double t_eig = detail::seconds_since(t0);
  res.unconverged = spec.unconverged_count();

  t0 = clock::now();
  const LimitCloud limit = limit_cloud(sym, cfg.limit_samples, cfg.seed, cfg.frozen_m, cfg.frozen_nodes, opts);
  const double t_limit = detail::seconds_since(t0);

  t0 = clock::now();
  const PointCloud eig{spec.values};
  const ComplexRect window = default_window(sym);
  std::size_t inside = 0;
  for (const cplx& z : eig) inside += window.contains(z);
  const double w1 = sliced_w1(eig, limit.samples, cfg.compare_angles);
  const double to_support = directed_hausdorff(eig, limit.support);
  const double t_dist = detail::seconds_since(t0);

  write_cloud_csv(dir / "eigenvalues.csv", eig);
  write_cloud_csv(dir / "limit_samples.csv", limit.samples);

  SvgPanel panel;
  panel.title = mode_name(cfg.mode) + ", n = " + std::to_string(n);
  panel.window = plot_window(sym, {&eig});
  panel.layers.push_back(range_layer(sym));
  SvgLayer support{"limit-support", "#000000", 0.6, 0.8, {}, limit.support_segments};
  if (limit.support_segments.empty()) support.points = limit.support;
  panel.layers.push_back(std::move(support));
  panel.layers.push_back({"eigenvalues", "#d62728", 1.6, 0.9, eig, {}});
  write_text(dir / "scatter.svg", render_svg({panel}));

  ExperimentConfig echo = cfg;
  echo.n = {n};
  echo.out = dir.string();
  json j;
  j["n"] = n;
  j["mode"] = mode_name(cfg.mode);
  j["sigma"] = cfg.mode == Mode::Perturbed ? cfg.sigma.resolve(n) : 0.0;
  j["seed"] = cfg.seed;
  j["rng"] = std::string(kRngAlgorithm);
  j["eigen"] = {{"balanced", cfg.balance},
                {"unconverged", spec.unconverged_count()},
                {"iterations", spec.iterations},
                {"trace_residual", std::abs(spec.sum() - m.trace())}};
  j["limit"] = {{"kind", limit.kind}, {"samples", limit.samples.size()}};
  j["distances"] = {{"sliced_w1_to_limit", w1},
                    {"angles", cfg.compare_angles},
                    {"directed_hausdorff_eigenvalues_to_support", to_support},
                    {"fraction_in_default_window", static_cast<double>(inside) / static_cast<double>(n)}};
  j["runtime_seconds"] = {{"build", t_build}, {"eigensolve", t_eig}, {"limit", t_limit}, {"distances", t_dist}};
  j["status"] = spec.all_converged() ? "ok" : "eigensolver-not-converged";
  j["config"] = kv_to_json(echo.to_kv());
  write_text(dir / "metrics.json", j.dump(2) + "\n");
  res.metrics = std::move(j);
  return res;
}

/// One run per n; a single n writes into cfg.out, several into cfg.out/n<value>.
inline std::vector<RunResult> run_experiment(const ExperimentConfig& cfg) {
  std::vector<RunResult> results(cfg.n.size());
  const fs::path base(cfg.out);
  parallel_for(cfg.n.size(), [&](std::size_t i) {
    const fs::path dir = cfg.n.size() == 1 ? base : base / ("n" + std::to_string(cfg.n[i]));
    results[i] = run_single(cfg, cfg.n[i], dir);
  });
  if (cfg.n.size() > 1) {
    json summary;
    summary["rng"] = std::string(kRngAlgorithm);
    summary["config"] = kv_to_json(cfg.to_kv());
    summary["runs"] = json::array();
    for (const auto& r : results)
      summary["runs"].push_back({{"n", r.n},
                                 {"dir", r.dir.filename().string()},
                                 {"sliced_w1_to_limit", r.metrics["distances"]["sliced_w1_to_limit"]},
                                 {"status", r.metrics["status"]}});
    write_text(base / "summary.json", summary.dump(2) + "\n");
  }
  return results;
}

// ---------------------------------------------------------------------------
// Figure reproduction.

struct FigureRequest {
  std::string id = "fig1";
  std::size_t n = 500;
  std::uint64_t seed = 1;
  SigmaSpec sigma;
  NoiseSpec noise;
  std::size_t frozen_m = 300;
  std::size_t limit_samples = 100000;
  bool balance = true;
  std::string out = "figure";

  static FigureRequest from_kv(const std::string& id, const KeyValues& kv) {
    FigureRequest r;
    r.id = id;
    for (const auto& [key, value] : kv) {
      if (key == "n") r.n = detail::parse_count(key, value);
      else if (key == "seed") r.seed = detail::parse_u64(key, value);
      else if (key == "sigma") r.sigma = SigmaSpec::parse(value);
      else if (key == "noise.dist") r.noise.kind = NoiseSpec::parse(value).kind;
      else if (key == "noise.complex") r.noise.complex_valued = detail::parse_bool(key, value);
      else if (key == "noise.center") r.noise.center = detail::parse_real(key, value);
      else if (key == "noise.trials") r.noise.trials = static_cast<int>(detail::parse_count(key, value));
      else if (key == "noise.half_width") r.noise.half_width = detail::parse_real(key, value);
      else if (key == "limit.frozen_m") r.frozen_m = detail::parse_count(key, value);
      else if (key == "limit.samples") r.limit_samples = detail::parse_count(key, value);
      else if (key == "eigen.balance") r.balance = detail::parse_bool(key, value);
      else if (key == "out") r.out = value;
      else if (key == "figure" || key == "mode" || key.rfind("symbol.", 0) == 0) {
        // fixed by the figure id
      } else {
        throw ConfigError("unknown config key '" + key + "' for figure");
      }
    }
    return r;
  }

  KeyValues to_kv() const {
    return {{"figure", id},
            {"n", std::to_string(n)},
            {"seed", std::to_string(seed)},
            {"sigma", sigma.str()},
            {"noise.dist", noise.tag()},
            {"noise.complex", noise.complex_valued ? "true" : "false"},
            {"noise.center", detail::format_number(noise.center)},
            {"noise.trials", std::to_string(noise.trials)},
            {"noise.half_width", detail::format_number(noise.half_width)},
            {"limit.frozen_m", std::to_string(frozen_m)},
            {"limit.samples", std::to_string(limit_samples)},
            {"eigen.balance", balance ? "true" : "false"},
            {"out", out}};
  }
};

struct FigureResult {
  std::vector<fs::path> files;
  std::size_t unconverged = 0;
  json metrics;
};

inline std::string figure_preset(const std::string& id) {
  if (id == "fig1") return "fig1";
  if (id == "fig2") return "fig2";
  if (id == "fig4") return "ex4";
  if (id == "fig5") return "ex5";
  throw ConfigError("unknown figure '" + id + "' (expected fig1, fig2, fig4 or fig5)");
}

/// x values of the frozen spectra in the right panel of fig4 (5) and fig5 (9).
inline std::vector<double> figure_frozen_x(const std::string& id) {
  const std::size_t count = id == "fig4" ? 5 : 9;
  std::vector<double> xs(count);
  for (std::size_t r = 0; r < count; ++r) xs[r] = static_cast<double>(r) / static_cast<double>(count - 1);
  return xs;
}

inline FigureResult reproduce_figure(const FigureRequest& req) {
  const std::string preset = figure_preset(req.id);
  const LaurentSymbol sym = preset_symbol(preset);
  const EigenOptions opts{req.balance, 200};
  const fs::path base(req.out);
  FigureResult res;
  json j;
  j["figure"] = req.id;
  j["symbol"] = preset;
  j["n"] = req.n;
  j["seed"] = req.seed;
  j["rng"] = std::string(kRngAlgorithm);

  // Both panel matrices are independent solves.
  Spectrum specs[2];
  const Mode modes[2] = {Mode::Deterministic, Mode::Perturbed};
  parallel_for(2, [&](std::size_t k) {
    specs[k] = eigenvalues(build_for_mode(sym, req.n, modes[k], req.sigma, req.noise, req.seed), opts);
  });
  const PointCloud det{specs[0].values}, per{specs[1].values};
  res.unconverged = specs[0].unconverged_count() + specs[1].unconverged_count();
  res.files.push_back(base / "deterministic" / "eigenvalues.csv");
  write_cloud_csv(res.files.back(), det);
  res.files.push_back(base / "perturbed" / "eigenvalues.csv");
  write_cloud_csv(res.files.back(), per);
  j["eigen"] = {{"deterministic_unconverged", specs[0].unconverged_count()},
                {"perturbed_unconverged", specs[1].unconverged_count()}};

  std::vector<SvgPanel> panels;
  if (sym.is_tridiagonal()) {
    const LimitCloud limit = limit_cloud(sym, req.limit_samples, req.seed, req.frozen_m, 2, opts);
    const ComplexRect window = plot_window(sym, {&det, &per});
    for (int k = 0; k < 2; ++k) {
      SvgPanel p;
      p.title = (k == 0 ? "T_n(a), n = " : "R_n(a), n = ") + std::to_string(req.n);
      p.window = window;
      p.layers.push_back(range_layer(sym));
      p.layers.push_back({"limit-support", "#000000", 0.6, 0.8, {}, limit.support_segments});
      p.layers.push_back({"eigenvalues", "#d62728", 1.6, 0.9, k == 0 ? det : per, {}});
      panels.push_back(std::move(p));
    }
    const TridiagonalSymbol tri = TridiagonalSymbol::from_laurent(sym);
    const auto intervals = xi_support_tridiagonal(tri, 400);
    auto near_xi = [&](const PointCloud& c) {
      std::size_t count = 0;
      for (const cplx& z : c) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& iv : intervals) best = std::min(best, iv.distance(z));
        count += best < 0.05;
      }
      return static_cast<double>(count) / static_cast<double>(c.size());
    };
    j["distances"] = {{"sliced_w1_deterministic_to_mu", sliced_w1(det, limit.samples)},
                      {"sliced_w1_perturbed_to_mu", sliced_w1(per, limit.samples)},
                      {"fraction_deterministic_within_0.05_of_xi", near_xi(det)},
                      {"fraction_perturbed_within_0.05_of_xi", near_xi(per)},
                      {"hausdorff_xi_to_range", hausdorff(limit.support, symbol_range(sym, 100, 256))}};
    res.files.push_back(base / "limit_samples.csv");
    write_cloud_csv(res.files.back(), limit.samples);
  } else {
    const std::vector<double> xs = figure_frozen_x(req.id);
    std::vector<PointCloud> frozen(xs.size());
    parallel_for(xs.size(), [&](std::size_t r) { frozen[r] = frozen_esm(sym.frozen(xs[r]), req.frozen_m, opts); });
    PointCloud all_frozen;
    json jf = json::array();
    for (std::size_t r = 0; r < xs.size(); ++r) {
      char name[32];
      std::snprintf(name, sizeof(name), "x%zu.csv", r);
      res.files.push_back(base / "frozen" / name);
      write_cloud_csv(res.files.back(), frozen[r]);
      all_frozen.append(frozen[r]);
      jf.push_back({{"x", xs[r]}, {"file", std::string("frozen/") + name}, {"points", frozen[r].size()}});
    }
    j["frozen"] = jf;
    const ComplexRect window = plot_window(sym, {&det, &per, &all_frozen});
    SvgPanel left{"T_n(a) (green) and R_n(a) (red), n = " + std::to_string(req.n), window, {}};
    left.layers.push_back(range_layer(sym));
    left.layers.push_back({"deterministic-eigenvalues", "#2ca02c", 1.6, 0.9, det, {}});
    left.layers.push_back({"eigenvalues", "#d62728", 1.6, 0.9, per, {}});
    SvgPanel right{"frozen spectra, m = " + std::to_string(req.frozen_m), window, {}};
    right.layers.push_back(range_layer(sym));
    right.layers.push_back({"limit-support", "#000000", 1.1, 0.9, all_frozen, {}});
    panels.push_back(std::move(left));
    panels.push_back(std::move(right));
    j["distances"] = {{"sliced_w1_perturbed_to_frozen", sliced_w1(per, all_frozen)},
                      {"sliced_w1_deterministic_to_frozen", sliced_w1(det, all_frozen)}};
  }
  res.files.push_back(base / "figure.svg");
  write_text(res.files.back(), render_svg(panels));
  j["status"] = res.unconverged == 0 ? "ok" : "eigensolver-not-converged";
  j["config"] = kv_to_json(req.to_kv());
  res.files.push_back(base / "metrics.json");
  write_text(res.files.back(), j.dump(2) + "\n");
  res.metrics = std::move(j);
  return res;
}

}  // namespace ttz
