// bvkit command-line front end: norm computations, duality studies,
// convergence experiments, classical 1D checks and self-verifying oracles.
//
// Exit codes: 0 ok, 1 degenerate-kappa warning, 2 bad config, 3 runtime
// failure, 4 oracle mismatch.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "bvkit/approx.hpp"
#include "bvkit/atoms.hpp"
#include "bvkit/builtins.hpp"
#include "bvkit/io.hpp"
#include "bvkit/variation.hpp"

namespace fs = std::filesystem;
using bvkit::json;

namespace {

struct JobConfig {
  std::string command;
  int k = 1;
  int d = 1;
  double lambda = 0.0;
  std::string p = "2";
  std::string q = "2";
  int m = 6;
  int max_level = -1;  // -1: use m
  std::string input = "builtin:sine";
  std::string out;
  std::uint64_t seed = 1;
  std::vector<int> levels = {0, 1, 2, 3, 4, 5};
  std::vector<int> n_list = {2, 4, 8, 16};
  int count = 20;
  bool exact = false;
  bool quick = false;
  bool svg = false;

  json to_json() const {
    return json{{"command", command},
                {"kappa", {{"k", k}, {"d", d}, {"lambda", lambda}, {"p", p}, {"q", q}}},
                {"m", m},
                {"max_level", max_level},
                {"input", input},
                {"out", out},
                {"seed", seed},
                {"levels", levels},
                {"n_list", n_list},
                {"count", count},
                {"exact", exact},
                {"quick", quick},
                {"svg", svg}};
  }

  static JobConfig from_json(const json& j) {
    JobConfig c;
    c.command = j.value("command", c.command);
    if (j.contains("kappa")) {
      const json& kj = j.at("kappa");
      c.k = kj.value("k", c.k);
      c.d = kj.value("d", c.d);
      c.lambda = kj.value("lambda", c.lambda);
      if (kj.contains("p")) {
        c.p = kj.at("p").is_string() ? kj.at("p").get<std::string>()
                                     : std::to_string(kj.at("p").get<double>());
      }
      if (kj.contains("q")) {
        c.q = kj.at("q").is_string() ? kj.at("q").get<std::string>()
                                     : std::to_string(kj.at("q").get<double>());
      }
    }
    c.m = j.value("m", c.m);
    c.max_level = j.value("max_level", c.max_level);
    c.input = j.value("input", c.input);
    c.out = j.value("out", c.out);
    c.seed = j.value("seed", c.seed);
    c.levels = j.value("levels", c.levels);
    c.n_list = j.value("n_list", c.n_list);
    c.count = j.value("count", c.count);
    c.exact = j.value("exact", c.exact);
    c.quick = j.value("quick", c.quick);
    c.svg = j.value("svg", c.svg);
    return c;
  }

  bvkit::Kappa kappa() const {
    return bvkit::Kappa(k, d, lambda, bvkit::Exponent::parse(p), bvkit::Exponent::parse(q));
  }

  int effective_max_level() const { return max_level < 0 ? m : max_level; }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bvkit::GridFunction resolve_input(const JobConfig& cfg) {
  if (cfg.input.rfind("builtin:", 0) == 0) {
    return bvkit::make_builtin(cfg.input.substr(8), cfg.d, cfg.m, cfg.seed);
  }
  const fs::path path(cfg.input);
  if (path.extension() == ".csv") return bvkit::load_csv_1d(path);
  return bvkit::load_grid(path);
}

void emit(const JobConfig& cfg, const std::string& name, const std::string& content) {
  if (cfg.out.empty()) return;
  fs::create_directories(cfg.out);
  bvkit::write_text_atomic(fs::path(cfg.out) / name, content);
}

bvkit::GridFunction random_moment_free(int d, int m, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(std::int64_t(1) << (m * d)));
  for (auto& x : v) x = gauss(rng);
  bvkit::GridFunction raw(d, m, std::move(v));
  const bvkit::PolyBasis basis = bvkit::PolyBasis::total_degree(d, k);
  const Eigen::MatrixXd A = bvkit::detail::basis_matrix(raw, raw.whole_window(), basis);
  const Eigen::VectorXd vv = bvkit::detail::window_values(raw, raw.whole_window());
  const Eigen::VectorXd c = (A.transpose() * A).ldlt().solve(A.transpose() * vv);
  const Eigen::VectorXd r = vv - A * c;
  std::vector<double> out(r.data(), r.data() + r.size());
  return bvkit::GridFunction(d, m, std::move(out));
}

int cmd_vnorm(const JobConfig& cfg) {
  const bvkit::Kappa kappa = cfg.kappa();
  const bvkit::Regime regime = bvkit::classify(kappa);
  const bvkit::GridFunction f = resolve_input(cfg);
  const bvkit::NormReport report = bvkit::v_seminorm(f, kappa, cfg.effective_max_level());

  std::cout << "kappa " << kappa.str() << "  s(kappa) = " << bvkit::smoothness(kappa) << "\n";
  std::cout << "regime: degenerate=" << regime.degenerate << " maximal=" << regime.maximal
            << " duality_valid=" << regime.duality_valid
            << " two_stars_valid=" << regime.two_stars_valid << "\n";
  std::cout << "value " << fmt(report.value) << "\n";
  std::cout << "certificate cubes: " << report.certificate.size() << "\n";

  json out = bvkit::to_json(report);
  out["regime"] = {{"degenerate", regime.degenerate},
                   {"maximal", regime.maximal},
                   {"duality_valid", regime.duality_valid},
                   {"two_stars_valid", regime.two_stars_valid}};
  emit(cfg, "vnorm.json", out.dump(2) + "\n");

  if (regime.degenerate) {
    std::cerr << "warning: s(kappa) > k; the space degenerates to polynomials\n";
    return 1;
  }
  return 0;
}

int cmd_duality(const JobConfig& cfg) {
  const bvkit::Kappa kappa = cfg.kappa();
  const bvkit::Regime regime = bvkit::classify(kappa);
  if (!regime.duality_valid) {
    std::cerr << "error: duality requires q > 1 and s(kappa) <= k (got kappa " << kappa.str()
              << ")\n";
    return 2;
  }
  const std::int64_t cells = std::int64_t(1) << (cfg.m * cfg.d);
  const bool exact = cfg.exact && cells <= 64 && !kappa.q.is_inf() && kappa.q.value() == 2.0 &&
                     (kappa.p.is_inf() || kappa.p.value() == 2.0);

  std::ostringstream csv;
  csv << "id,lower,upper,relative_gap\n";
  double max_gap = 0.0, sum_gap = 0.0;
  for (int i = 0; i < cfg.count; ++i) {
    const bvkit::GridFunction g = random_moment_free(cfg.d, cfg.m, cfg.k, cfg.seed * 1000 + i);
    const bvkit::GapReport gap = bvkit::duality_gap(g, kappa, {}, exact);
    csv << i << "," << fmt(gap.lower) << "," << fmt(gap.upper) << "," << fmt(gap.relative_gap)
        << "\n";
    max_gap = std::max(max_gap, gap.relative_gap);
    sum_gap += gap.relative_gap;
  }
  emit(cfg, "duality.csv", csv.str());
  json summary{{"count", cfg.count},
               {"exact", exact},
               {"max_relative_gap", max_gap},
               {"mean_relative_gap", sum_gap / std::max(1, cfg.count)}};
  emit(cfg, "duality.json", summary.dump(2) + "\n");
  std::cout << "duality: count=" << cfg.count << " exact=" << exact
            << " max_gap=" << fmt(max_gap) << "\n";
  return 0;
}

int cmd_mollify_study(const JobConfig& cfg) {
  const bvkit::Kappa kappa = cfg.kappa();
  const bvkit::GridFunction f = resolve_input(cfg);
  const auto rows = bvkit::convergence_study(f, kappa, cfg.n_list);
  std::ostringstream csv;
  csv << "n,err_q,seminorm\n";
  std::vector<double> xs, ys;
  for (const auto& row : rows) {
    csv << row.n << "," << fmt(row.err_q) << "," << fmt(row.seminorm) << "\n";
    xs.push_back(row.n);
    ys.push_back(row.err_q);
    std::cout << "n=" << row.n << " err_q=" << fmt(row.err_q)
              << " seminorm=" << fmt(row.seminorm) << "\n";
  }
  emit(cfg, "mollify.csv", csv.str());
  if (cfg.svg) emit(cfg, "mollify.svg", bvkit::svg_polyline(xs, ys, "mollifier error", true));
  return 0;
}

int cmd_little_v(const JobConfig& cfg) {
  const bvkit::Kappa kappa = cfg.kappa();
  const bvkit::GridFunction f = resolve_input(cfg);
  bvkit::ECache cache(f);
  const auto profile = bvkit::little_v_profile(f, kappa, cfg.levels, &cache);
  std::ostringstream csv;
  csv << "eps,value\n";
  std::vector<double> xs, ys;
  for (const auto& pt : profile.points) {
    csv << fmt(pt.eps) << "," << fmt(pt.value) << "\n";
    xs.push_back(pt.eps);
    ys.push_back(pt.value);
    std::cout << "eps=" << fmt(pt.eps) << " value=" << fmt(pt.value) << "\n";
  }
  std::cout << "loglog_slope " << fmt(profile.loglog_slope) << "\n";
  emit(cfg, "little_v.csv", csv.str());
  json summary{{"slope", profile.loglog_slope}, {"smoothness", bvkit::smoothness(kappa)}};
  emit(cfg, "little_v.json", summary.dump(2) + "\n");
  if (cfg.svg) emit(cfg, "little_v.svg", bvkit::svg_polyline(xs, ys, "restricted sup", true));
  return 0;
}

int cmd_classical(const JobConfig& cfg) {
  if (cfg.d != 1) {
    std::cerr << "error: classical checks are one-dimensional\n";
    return 2;
  }
  const bvkit::Kappa kappa = cfg.kappa();
  const bvkit::GridFunction f = resolve_input(cfg);

  const double var = bvkit::var_1d(f, cfg.k, cfg.lambda, kappa.p);
  const double pack = bvkit::var_1d_packing_form(f, cfg.k, cfg.lambda, kappa.p);
  const double ratio = pack > 0 ? var / pack : 0.0;
  const bvkit::NormReport bmo = bvkit::bmo_seminorm(f, kappa.p, cfg.effective_max_level());
  const double bv = bvkit::bvk_seminorm(f, cfg.k);

  std::ostringstream csv;
  csv << "quantity,value\n";
  csv << "var_1d," << fmt(var) << "\n";
  csv << "packing_form," << fmt(pack) << "\n";
  csv << "var_to_packing_ratio," << fmt(ratio) << "\n";
  csv << "bmo," << fmt(bmo.value) << "\n";
  csv << "bvk," << fmt(bv) << "\n";
  emit(cfg, "classical.csv", csv.str());
  std::cout << "var_1d " << fmt(var) << "\npacking_form " << fmt(pack) << "\nratio "
            << fmt(ratio) << "\nbmo " << fmt(bmo.value) << "\nbvk " << fmt(bv) << "\n";
  return 0;
}

int cmd_oracle(const JobConfig& cfg) {
  bool all_ok = true;

  // DP against exhaustive packing enumeration, bit-identical arithmetic.
  {
    std::mt19937_64 rng(cfg.seed);
    const bvkit::Exponent exps[3] = {bvkit::Exponent::finite(1), bvkit::Exponent::finite(2),
                                     bvkit::Exponent::infinity()};
    std::vector<std::pair<int, int>> settings = {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}};
    if (cfg.quick) settings = {{1, 2}, {2, 1}};
    const int trials = cfg.quick ? 3 : 10;
    bool ok = true;
    for (auto [d, L] : settings) {
      for (int t = 0; t < trials; ++t) {
        std::vector<double> v(static_cast<std::size_t>(std::int64_t(1) << (L * d)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto& x : v) x = gauss(rng);
        const bvkit::GridFunction f(d, L, std::move(v));
        const bvkit::Kappa kappa(1 + int(rng() % 2), d, (t % 2) * 0.25, exps[rng() % 3],
                                 exps[rng() % 3]);
        bvkit::ECache cache(f);
        const double dp = bvkit::v_seminorm(f, kappa, L, &cache).value;
        double raw = 0.0;
        bvkit::enumerate_packings(d, L, [&](const bvkit::Packing& pi) {
          raw = std::max(raw, bvkit::gamma_raw(f, pi, kappa, &cache));
        });
        double brute = raw;
        if (!kappa.p.is_inf()) {
          const double pv = kappa.p.value();
          brute = pv == 1.0 ? raw : (pv == 2.0 ? std::sqrt(raw) : std::pow(raw, 1.0 / pv));
        }
        ok = ok && dp == brute;
      }
    }
    std::cout << (ok ? "PASS" : "FAIL") << " dp-vs-enumeration\n";
    all_ok = all_ok && ok;
  }

  // LP fits against a coefficient-lattice brute force.
  {
    std::mt19937_64 rng(cfg.seed + 7);
    bool ok = true;
    for (int t = 0; t < (cfg.quick ? 2 : 6); ++t) {
      std::vector<double> v(8);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (auto& x : v) x = gauss(rng);
      const bvkit::GridFunction f(1, 3, std::move(v));
      for (const bvkit::Exponent& q :
           {bvkit::Exponent::finite(1), bvkit::Exponent::infinity()}) {
        const bvkit::LocalFit fit =
            bvkit::local_approx_error(f, bvkit::DyadicCube::root(1), 2, q);
        const bvkit::CellWindow w = f.whole_window();
        const bvkit::PolyBasis basis = bvkit::PolyBasis::total_degree(1, 2);
        const Eigen::MatrixXd A = bvkit::detail::basis_matrix(f, w, basis);
        const Eigen::VectorXd vv = bvkit::detail::window_values(f, w);
        const Eigen::VectorXd c0 = (A.transpose() * A).ldlt().solve(A.transpose() * vv);
        double best = 1e300;
        const int steps = 61;
        for (int i = 0; i < steps; ++i) {
          for (int j = 0; j < steps; ++j) {
            Eigen::VectorXd c = c0;
            c(0) += 0.5 * (2.0 * i / (steps - 1.0) - 1.0);
            c(1) += 0.5 * (2.0 * j / (steps - 1.0) - 1.0);
            const Eigen::VectorXd r = vv - A * c;
            const double err =
                q.is_inf() ? r.lpNorm<Eigen::Infinity>() : r.lpNorm<1>() * f.cell_volume();
            best = std::min(best, err);
          }
        }
        ok = ok && fit.error <= best + 1e-10 && best <= fit.error + 0.05;
      }
    }
    std::cout << (ok ? "PASS" : "FAIL") << " lp-vs-lattice\n";
    all_ok = all_ok && ok;
  }

  return all_ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bvkit: multivariate bounded-variation norms on dyadic grids"};
  app.require_subcommand(1);

  std::string config_path, kappa_spec, input, out;
  std::optional<int> m_flag, max_level_flag, count_flag;
  std::optional<std::uint64_t> seed_flag;
  std::vector<int> levels_flag, n_list_flag;
  bool exact_flag = false, quick_flag = false, svg_flag = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config; flags override its fields");
    sub->add_option("--kappa", kappa_spec, "k,d,lambda,p,q (p,q may be 'inf')");
    sub->add_option("--m", m_flag, "grid resolution exponent");
    sub->add_option("--max-level", max_level_flag, "deepest packing level (default m)");
    sub->add_option("--input", input, "builtin:<id> or grid file (.gfbin/.csv)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed_flag, "rng seed");
    sub->add_option("--levels", levels_flag, "levels for little-v ladders");
    sub->add_option("--n-list", n_list_flag, "mollifier indices");
    sub->add_option("--count", count_flag, "ensemble size");
    sub->add_flag("--exact", exact_flag, "tiny-instance exact dual oracle");
    sub->add_flag("--quick", quick_flag, "reduced oracle suite");
    sub->add_flag("--svg", svg_flag, "emit decorative SVG plots");
  };

  CLI::App* sub_vnorm = app.add_subcommand("vnorm", "packing-supremum seminorm of one input");
  CLI::App* sub_duality = app.add_subcommand("duality", "duality-gap ensemble study");
  CLI::App* sub_mollify = app.add_subcommand("mollify-study", "mollifier convergence table");
  CLI::App* sub_little = app.add_subcommand("little-v", "mesh-restricted sup profile");
  CLI::App* sub_classical = app.add_subcommand("classical", "1D variation/BMO/BV cross-checks");
  CLI::App* sub_oracle = app.add_subcommand("oracle", "DP and LP self-verification suites");
  for (CLI::App* sub :
       {sub_vnorm, sub_duality, sub_mollify, sub_little, sub_classical, sub_oracle}) {
    add_common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  JobConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw std::runtime_error("cannot open config: " + config_path);
      json j;
      is >> j;
      cfg = JobConfig::from_json(j);
    }
    // Flags override config fields.
    if (!kappa_spec.empty()) {
      std::stringstream ss(kappa_spec);
      std::string tok;
      std::vector<std::string> parts;
      while (std::getline(ss, tok, ',')) parts.push_back(tok);
      if (parts.size() != 5) throw std::invalid_argument("--kappa needs k,d,lambda,p,q");
      cfg.k = std::stoi(parts[0]);
      cfg.d = std::stoi(parts[1]);
      cfg.lambda = std::stod(parts[2]);
      cfg.p = parts[3];
      cfg.q = parts[4];
    }
    if (m_flag) cfg.m = *m_flag;
    if (max_level_flag) cfg.max_level = *max_level_flag;
    if (!input.empty()) cfg.input = input;
    if (!out.empty()) cfg.out = out;
    if (seed_flag) cfg.seed = *seed_flag;
    if (!levels_flag.empty()) cfg.levels = levels_flag;
    if (!n_list_flag.empty()) cfg.n_list = n_list_flag;
    if (count_flag) cfg.count = *count_flag;
    cfg.exact = cfg.exact || exact_flag;
    cfg.quick = cfg.quick || quick_flag;
    cfg.svg = cfg.svg || svg_flag;

    if (app.got_subcommand(sub_vnorm)) cfg.command = "vnorm";
    if (app.got_subcommand(sub_duality)) cfg.command = "duality";
    if (app.got_subcommand(sub_mollify)) cfg.command = "mollify-study";
    if (app.got_subcommand(sub_little)) cfg.command = "little-v";
    if (app.got_subcommand(sub_classical)) cfg.command = "classical";
    if (app.got_subcommand(sub_oracle)) cfg.command = "oracle";

    // Parsed config must round-trip through serialization unchanged.
    if (JobConfig::from_json(cfg.to_json()).to_json() != cfg.to_json()) {
      throw std::logic_error("config round-trip failed");
    }

    cfg.kappa();  // malformed kappa is a config error
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cfg.command == "vnorm") return cmd_vnorm(cfg);
    if (cfg.command == "duality") return cmd_duality(cfg);
    if (cfg.command == "mollify-study") return cmd_mollify_study(cfg);
    if (cfg.command == "little-v") return cmd_little_v(cfg);
    if (cfg.command == "classical") return cmd_classical(cfg);
    if (cfg.command == "oracle") return cmd_oracle(cfg);
    std::cerr << "config error: unknown command '" << cfg.command << "'\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
}
