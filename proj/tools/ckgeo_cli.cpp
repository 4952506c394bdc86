// Command-line surface: pointwise conformal-Kaehler classification runs,
// named verification suites, the example gallery, and congruence checks.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ckgeo/classifier.hpp"

using nlohmann::json;

namespace {

int run_analyze(const std::string& config_path, const std::string& example_id,
                int n, int grid, std::uint64_t seed,
                const std::string& out_path, const ckgeo::Tolerances& tol) {
  ckgeo::AnalysisConfig cfg;
  json doc;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot read config file: " << config_path << "\n";
      return 1;
    }
    in >> doc;
    cfg = ckgeo::AnalysisConfig::from_json(doc);
  } else {
    cfg.example_id = example_id;
    if (n > 0 && cfg.example_id.find("-n") == std::string::npos)
      cfg.example_id += "-n" + std::to_string(n);
    cfg.grid = grid;
    cfg.seed = seed;
    cfg.tol = tol;
  }
  if (config_path.empty()) {
    cfg.tol = tol;  // explicit flags win
    cfg.seed = seed;
  }
  const ckgeo::GalleryExample example = ckgeo::example_for(
      cfg, config_path.empty() ? nullptr : &doc);
  const ckgeo::RunReport report = ckgeo::analyze(example, cfg);
  const json out = report.to_json();
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    if (!os) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    os << out.dump(2) << "\n";
  } else {
    std::cout << out.dump(2) << "\n";
  }
  std::cerr << example.name << ": "
            << report.aggregate.classification << " over "
            << report.points.size() << " points\n";
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed,
               const ckgeo::Tolerances& tol) {
  const ckgeo::SuiteResult res = ckgeo::verify_suite(suite, seed, tol);
  std::cout << "suite " << suite << ": " << (res.pass ? "pass" : "FAIL")
            << "\n";
  for (const auto& [k, v] : res.metrics)
    std::cout << "  " << k << " = " << v << "\n";
  return res.pass ? 0 : 1;
}

int run_congruence(const std::string& left, const std::string& right,
                   std::uint64_t seed) {
  const ckgeo::GalleryExample el = ckgeo::gallery_get(left);
  const ckgeo::GalleryExample er = ckgeo::gallery_get(right);
  if (el.patch.domain_dim() != er.patch.domain_dim() ||
      el.patch.ambient_dim() != er.patch.ambient_dim() ||
      (el.patch.lo() - er.patch.lo()).norm() > 0 ||
      (el.patch.hi() - er.patch.hi()).norm() > 0) {
    std::cerr << "examples are not defined over the same chart\n";
    return 1;
  }
  const ckgeo::LightConeTriple triple =
      ckgeo::LightConeTriple::canonical(el.patch.ambient_dim());
  const ckgeo::LightConeRep rl = ckgeo::make_rep(el.patch, el.lambda, triple);
  const ckgeo::LightConeRep rr = ckgeo::make_rep(er.patch, er.lambda, triple);
  const Eigen::VectorXd base = 0.5 * (el.patch.lo() + el.patch.hi());
  const ckgeo::CongruenceReport rep = ckgeo::congruence_defect(
      rl, rr, base, ckgeo::sample_uniform(el.patch, 30, seed));
  std::cout << "congruence defect: " << rep.defect << "\n"
            << "frame Gram defect: " << rep.gram_defect << "\n"
            << "metric defect:     " << rep.metric_defect << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conformal Kaehler submanifold classification toolkit"};
  app.require_subcommand(1);

  ckgeo::Tolerances tol;
  app.add_option("--tol-rank", tol.rank, "rank/degeneracy threshold");
  app.add_option("--tol-flat", tol.flat, "flatness threshold");
  app.add_option("--tol-var", tol.var, "field-constancy threshold");

  std::string config_path, example_id, out_path;
  int n = 0, grid = 3;
  std::uint64_t seed = 0;
  CLI::App* analyze = app.add_subcommand("analyze", "classify an example");
  analyze->add_option("--config", config_path, "config JSON path");
  analyze->add_option("--example", example_id, "gallery example id");
  analyze->add_option("--n", n, "complex dimension for parametric ids");
  analyze->add_option("--grid", grid, "samples per axis");
  analyze->add_option("--seed", seed, "subsampling seed");
  analyze->add_option("--out", out_path, "report output path");

  std::string suite;
  std::uint64_t vseed = 0;
  CLI::App* verify = app.add_subcommand("verify", "run a named suite");
  verify->add_option("--suite", suite, "suite name")->required();
  verify->add_option("--seed", vseed, "suite seed");

  bool list = false;
  CLI::App* gallery = app.add_subcommand("gallery", "example registry");
  gallery->add_flag("--list", list, "print example ids");

  std::string left, right;
  std::uint64_t cseed = 0;
  CLI::App* congruence =
      app.add_subcommand("congruence", "compare two representatives");
  congruence->add_option("--left", left, "left example id")->required();
  congruence->add_option("--right", right, "right example id")->required();
  congruence->add_option("--seed", cseed, "sample seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) {
      if (config_path.empty() && example_id.empty()) {
        std::cerr << "analyze needs --config or --example\n"
                  << analyze->help();
        return 2;
      }
      return run_analyze(config_path, example_id, n, grid, seed, out_path,
                         tol);
    }
    if (verify->parsed()) return run_verify(suite, vseed, tol);
    if (gallery->parsed()) {
      for (const std::string& id : ckgeo::gallery_ids())
        std::cout << id << "\n";
      return 0;
    }
    if (congruence->parsed()) return run_congruence(left, right, cseed);
  } catch (const ckgeo::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
