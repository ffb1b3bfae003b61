#include <gtest/gtest.h>

#include <fstream>

#include "ttz/experiment.hpp"

using namespace ttz;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ttz-test-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small(const std::string& out) {
  return ExperimentConfig::from_kv(
      {{"symbol.preset", "fig1"}, {"n", "40"}, {"limit.samples", "2000"}, {"seed", "11"}, {"out", out}});
}

}  // namespace

TEST(Config, KeyValueSyntax) {
  const KeyValues kv = parse_key_values("# comment\n n = 10,20 \n\nsigma=1/n # trailing\n");
  EXPECT_EQ(kv.at("n"), "10,20");
  EXPECT_EQ(kv.at("sigma"), "1/n");
  EXPECT_THROW(parse_key_values("n 10"), ConfigError);
  EXPECT_THROW(parse_key_values("=3"), ConfigError);
  EXPECT_THROW(parse_key_values("n=1\nn=2"), ConfigError);
}

TEST(Config, Rejections) {
  const std::vector<KeyValues> bad = {
      {{"n", "0"}},
      {{"n", "ten"}},
      {{"n", "-5"}},
      {{"sigma", "-0.1"}},
      {{"mode", "chaotic"}},
      {{"noise.dist", "cauchy"}},
      {{"symbol.preset", "fig3"}},
      {{"symbol.preset", "fig1"}, {"symbol.b", "x"}},
      {{"symbol.coeff.one", "1"}},
      {{"symbol.c", "1"}, {"symbol.coeff.1", "2"}},
      {{"colour", "red"}},
      {{"eigen.balance", "maybe"}},
      {{"limit.frozen_nodes", "1"}},
  };
  for (const KeyValues& kv : bad) EXPECT_THROW(ExperimentConfig::from_kv(kv), ConfigError) << kv.begin()->first;
  EXPECT_THROW(ExperimentConfig::from_kv({{"symbol.b", "x+"}}), ParseError);
}

TEST(Config, PresetAndInlineSymbols) {
  const ExperimentConfig dflt = ExperimentConfig::from_kv({});
  EXPECT_EQ(dflt.preset, "fig1");
  const ExperimentConfig inl =
      ExperimentConfig::from_kv({{"symbol.d", "i"}, {"symbol.b", "1-2*x"}, {"symbol.c", "i/4"}});
  EXPECT_TRUE(inl.preset.empty());
  const LaurentSymbol a = inl.symbol(), b = preset_symbol("fig1");
  for (double x : {0.0, 0.3, 1.0})
    for (int j = -1; j <= 1; ++j) EXPECT_EQ(a.fourier_coefficient(j, x), b.fourier_coefficient(j, x));
  const ExperimentConfig wide = ExperimentConfig::from_kv({{"symbol.coeff.-2", "1"}, {"symbol.coeff.3", "x^2"}});
  EXPECT_EQ(wide.symbol().lower(), 2);
  EXPECT_EQ(wide.symbol().upper(), 3);
}

TEST(Config, EchoRoundTrip) {
  const ExperimentConfig c = ExperimentConfig::from_kv({{"symbol.coeff.-1", "exp(i*x)"},
                                                        {"symbol.coeff.0", "x"},
                                                        {"symbol.coeff.2", "1/2"},
                                                        {"n", "7,9"},
                                                        {"sigma", "0.125"},
                                                        {"noise.dist", "rademacher"},
                                                        {"noise.complex", "true"},
                                                        {"mode", "randomized"},
                                                        {"seed", "18446744073709551615"},
                                                        {"eigen.balance", "off"}});
  const KeyValues kv = c.to_kv();
  EXPECT_EQ(ExperimentConfig::from_kv(kv).to_kv(), kv);
  // through json as well, the way metrics.json is read back
  const fs::path dir = scratch("echo");
  fs::create_directories(dir);
  write_text(dir / "metrics.json", json{{"config", kv_to_json(kv)}}.dump());
  EXPECT_EQ(load_config_file(dir / "metrics.json"), kv);
  EXPECT_THROW(load_config_file(dir / "missing.cfg"), ConfigError);
  fs::remove_all(dir);
}

TEST(Run, OutputsAndMetrics) {
  const fs::path dir = scratch("run");
  const RunResult r = run_single(small(dir.string()), 40, dir);
  EXPECT_EQ(r.unconverged, 0u);
  for (const char* f : {"eigenvalues.csv", "limit_samples.csv", "scatter.svg", "metrics.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const std::string csv = slurp(dir / "eigenvalues.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 41);  // header plus one row per eigenvalue
  const json m = json::parse(slurp(dir / "metrics.json"));
  EXPECT_EQ(m["status"], "ok");
  EXPECT_EQ(m["rng"], kRngAlgorithm);
  EXPECT_EQ(m["n"], 40);
  EXPECT_DOUBLE_EQ(m["sigma"].get<double>(), 1.0 / 40.0);
  EXPECT_GE(m["distances"]["sliced_w1_to_limit"].get<double>(), 0.0);
  fs::remove_all(dir);
}

TEST(Run, RerunFromEchoIsBitIdentical) {
  const fs::path a = scratch("first"), b = scratch("second");
  run_single(small(a.string()), 40, a);
  KeyValues kv = load_config_file(a / "metrics.json");
  kv["out"] = b.string();
  const ExperimentConfig again = ExperimentConfig::from_kv(kv);
  run_experiment(again);
  EXPECT_EQ(slurp(a / "eigenvalues.csv"), slurp(b / "eigenvalues.csv"));
  EXPECT_EQ(slurp(a / "limit_samples.csv"), slurp(b / "limit_samples.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, SeveralSizesGetSubdirectories) {
  const fs::path dir = scratch("multi");
  ExperimentConfig c = small(dir.string());
  c.n = {20, 30};
  const auto results = run_experiment(c);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "n20" / "metrics.json"));
  EXPECT_TRUE(fs::exists(dir / "n30" / "metrics.json"));
  const json s = json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(s["runs"].size(), 2u);
  fs::remove_all(dir);
}

TEST(Run, BandedSymbolUsesFrozenProxy) {
  const fs::path dir = scratch("banded");
  const ExperimentConfig c = ExperimentConfig::from_kv({{"symbol.preset", "ex4"},
                                                       {"n", "30"},
                                                       {"limit.frozen_m", "40"},
                                                       {"limit.frozen_nodes", "3"},
                                                       {"out", dir.string()}});
  const RunResult r = run_single(c, 30, dir);
  EXPECT_NE(r.metrics["limit"]["kind"].get<std::string>(), "mu");
  EXPECT_EQ(r.metrics["limit"]["samples"], 120);
  fs::remove_all(dir);
}

TEST(Figure, BandedFigureFiles) {
  const fs::path dir = scratch("fig4");
  FigureRequest req = FigureRequest::from_kv("fig4", {{"n", "60"}, {"limit.frozen_m", "40"}});
  req.out = dir.string();
  const FigureResult r = reproduce_figure(req);
  EXPECT_EQ(r.unconverged, 0u);
  for (const fs::path& f : r.files) EXPECT_TRUE(fs::exists(f)) << f;
  EXPECT_TRUE(fs::exists(dir / "frozen" / "x4.csv"));
  EXPECT_FALSE(fs::exists(dir / "frozen" / "x5.csv"));
  EXPECT_THROW(figure_preset("fig3"), ConfigError);
  EXPECT_THROW(FigureRequest::from_kv("fig1", {{"bogus", "1"}}), ConfigError);
  fs::remove_all(dir);
}

TEST(Figure, RandomizedFigTwoStaysInsideWindow) {
  const LaurentSymbol fig2 = preset_symbol("fig2");
  const ComplexRect w = default_window(fig2);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Spectrum s = eigenvalues(build_randomized(fig2, 300, seed));
    ASSERT_TRUE(s.all_converged());
    for (const cplx& z : s.values) EXPECT_TRUE(w.contains(z)) << z;
  }
}

TEST(Parallel, PropagatesExceptions) {
  std::vector<int> hit(50, 0);
  parallel_for(50, [&](std::size_t k) { hit[k] = 1; });
  EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 50);
  EXPECT_THROW(parallel_for(8, [](std::size_t k) {
                 if (k == 5) throw NumericalError("boom");
               }),
               NumericalError);
}
