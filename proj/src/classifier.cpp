#include "ckgeo/classifier.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

namespace ckgeo {

using nlohmann::json;

json AnalysisConfig::to_json() const {
  return json{{"example", example_id},
              {"grid", grid},
              {"seed", seed},
              {"max_points", max_points},
              {"tolerances",
               {{"rank", tol.rank}, {"flat", tol.flat}, {"var", tol.var}}}};
}

AnalysisConfig AnalysisConfig::from_json(const json& j) {
  AnalysisConfig cfg;
  cfg.example_id = j.value("example", std::string());
  cfg.grid = j.value("grid", 3);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.max_points = j.value("max_points", 512);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    cfg.tol.rank = t.value("rank", kRankTol);
    cfg.tol.flat = t.value("flat", 1e-6);
    cfg.tol.var = t.value("var", 1e-6);
  }
  if (cfg.grid < 2) throw error(errc::bad_params, "grid must be >= 2");
  if (!(cfg.tol.rank > 0.0 && cfg.tol.flat > 0.0 && cfg.tol.var > 0.0))
    throw error(errc::bad_params, "tolerances must be positive");
  return cfg;
}

GalleryExample example_for(const AnalysisConfig& cfg,
                           const json* inline_doc) {
  if (!cfg.example_id.empty()) return gallery_get(cfg.example_id);
  if (inline_doc == nullptr || !inline_doc->contains("patch"))
    throw error(errc::generation_failed,
                "config names no example and carries no inline patch");
  ChartPatch patch = ChartPatch::from_json(inline_doc->at("patch"));
  ChartPatch reference =
      inline_doc->contains("reference")
          ? ChartPatch::from_json(inline_doc->at("reference"))
          : patch;
  Expr lambda = inline_doc->contains("lambda")
                    ? Expr::from_json(inline_doc->at("lambda"))
                    : Expr::constant(1.0);
  ComplexStructure j = ComplexStructure::standard(patch.domain_dim());
  return GalleryExample{"inline",         std::move(patch),
                        std::move(j),     std::move(reference),
                        std::move(lambda), std::nullopt};
}

std::vector<VectorXd> sample_grid(const ChartPatch& patch, int grid,
                                  std::uint64_t seed, int cap) {
  const int d = patch.domain_dim();
  const VectorXd lo = patch.lo(), span = patch.hi() - patch.lo();
  auto point_of = [&](const std::vector<int>& k) {
    VectorXd x(d);
    for (int i = 0; i < d; ++i)
      x[i] = lo[i] + (k[i] + 0.5) * span[i] / grid;
    return x;
  };
  double total = 1.0;
  for (int i = 0; i < d; ++i) total *= grid;

  std::set<std::vector<int>> chosen;
  if (total <= cap) {
    std::vector<int> k(d, 0);
    while (true) {
      chosen.insert(k);
      int i = d - 1;
      while (i >= 0 && ++k[i] == grid) k[i--] = 0;
      if (i < 0) break;
    }
  } else {
    std::mt19937_64 rng(seed ^ 0xA5A5A5A5A5A5A5A5ull);
    std::uniform_int_distribution<int> ui(0, grid - 1);
    const long budget = 200l * cap;
    for (long it = 0; it < budget && static_cast<int>(chosen.size()) < cap;
         ++it) {
      std::vector<int> k(d);
      for (int i = 0; i < d; ++i) k[i] = ui(rng);
      chosen.insert(std::move(k));
    }
  }
  std::vector<VectorXd> out;
  out.reserve(chosen.size());
  for (const auto& k : chosen) out.push_back(point_of(k));
  return out;
}

std::vector<VectorXd> sample_uniform(const ChartPatch& patch, int count,
                                     std::uint64_t seed) {
  const int d = patch.domain_dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  std::vector<VectorXd> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    VectorXd x(d);
    for (int i = 0; i < d; ++i)
      x[i] = patch.lo()[i] + ud(rng) * (patch.hi()[i] - patch.lo()[i]);
    out.push_back(std::move(x));
  }
  return out;
}

namespace {

void bump(std::map<std::string, double>& m, const std::string& key,
          double v) {
  auto it = m.find(key);
  if (it == m.end())
    m[key] = v;
  else
    it->second = std::max(it->second, v);
}

}  // namespace

RunReport analyze(const GalleryExample& example, const AnalysisConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.config = cfg;

  const int d = example.patch.domain_dim();
  const int m = example.patch.ambient_dim();
  const int p = m + 2 - d;
  const LightConeRep rep =
      make_rep(example.patch, example.lambda, LightConeTriple::canonical(m));
  const std::vector<VectorXd> samples =
      sample_grid(example.patch, cfg.grid, cfg.seed, cfg.max_points);

  for (const VectorXd& x : samples) {
    PointRecord r;
    r.coords = x;
    try {
      conformal_factor(example.patch, example.reference, x, 1e-6);
      const SFFData sff = sff_at(rep.F, x, cfg.tol.rank);
      r.res_sff_radial = sff_radial_check(sff);
      r.a_f_identity = radial_shape_identity_defect(sff);
      const CurvatureTensor curv = curvature_at(sff);
      if (curv.flat_point()) {
        r.flat_point = true;
        report.points.push_back(std::move(r));
        continue;
      }
      const BilinearForm alpha = second_fundamental_form(sff);
      const BilinearForm beta = j_couple(alpha, example.J);
      r.res_flat = flatness_defect(beta);
      r.nullity = nullity_defect(beta);
      if (span_and_kernel(beta, cfg.tol.rank).kernel.cols() != 0)
        throw error(errc::nullity_too_large,
                    "right kernel of the coupled form is nonzero at a "
                    "non-flat point");
      const VectorXd f_coords = normal_coordinates(sff, sff.value);
      const StructureReport sr = structure_decompose(
          alpha, example.J, cfg.tol.rank, cfg.tol.flat, &f_coords);
      r.s = sr.s;
      r.case_tag = case_tag_name(sr.case_tag);
      r.dim_delta = sr.dim_Delta;
      r.res_alpha1_sym = sr.alpha1_symmetry_defect;
      r.res_delta_orth = sr.delta_orthogonality_defect;
      if (sr.case_tag == CaseTag::deg_L) {
        r.delta = sff.normal * sr.delta;
        r.a_delta = sff.shape_operator(sr.delta).cwiseAbs().maxCoeff();
        if (sr.s == 4 && sr.alpha_U1_coeffs.size() == 2) {
          const Eigen::LLT<MatrixXd> gl(sff.metric);
          const MatrixXd a1 = gl.solve(sr.alpha_U1_coeffs[0]);
          const MatrixXd a2 = gl.solve(sr.alpha_U1_coeffs[1]);
          r.coupling =
              min_rotation_coupling_defect(a1, a2, example.J.matrix());
          const SFFData src = sff_at(example.reference, x, cfg.tol.rank);
          const VectorXd h = src.normal * src.mean_curvature();
          r.minimality = h.norm() / std::max(1.0, src.alpha_scale());
        }
      }
    } catch (const error& e) {
      r.error = errc_name(e.code());
    } catch (const std::exception&) {
      r.error = "BAD_PARAMS";
    }
    report.points.push_back(std::move(r));
  }

  // Aggregation over classified (non-flat, error-free) points.
  Aggregate& agg = report.aggregate;
  std::vector<const PointRecord*> classified;
  for (const PointRecord& r : report.points) {
    if (!r.error.empty()) {
      ++agg.counts["error"];
      continue;
    }
    if (r.flat_point) {
      ++agg.counts["flat"];
      continue;
    }
    ++agg.counts["s" + std::to_string(r.s) + "_" + r.case_tag];
    classified.push_back(&r);
    bump(agg.max_residuals, "flat", r.res_flat);
    bump(agg.max_residuals, "sff_radial", r.res_sff_radial);
    bump(agg.max_residuals, "alpha1_sym", r.res_alpha1_sym);
    bump(agg.max_residuals, "delta_orth", r.res_delta_orth);
    bump(agg.max_residuals, "a_delta", r.a_delta);
    bump(agg.max_residuals, "a_f_identity", r.a_f_identity);
    bump(agg.max_residuals, "nullity", r.nullity);
    bump(agg.max_residuals, "coupling", r.coupling);
    bump(agg.max_residuals, "minimality", r.minimality);
  }

  if (static_cast<int>(classified.size()) < 10) {
    agg.classification = "UNDETERMINED";
  } else {
    const bool all_s2 = std::all_of(
        classified.begin(), classified.end(), [](const PointRecord* r) {
          return r->s == 2 && r->case_tag == "DEG_L";
        });
    const bool all_s4 = std::all_of(
        classified.begin(), classified.end(), [](const PointRecord* r) {
          return r->s == 4 && r->case_tag == "DEG_L";
        });
    if (all_s2) {
      VectorXd mean = VectorXd::Zero(m + 2);
      for (const PointRecord* r : classified) mean += r->delta;
      mean /= static_cast<double>(classified.size());
      const double scale = std::max(1.0, mean.cwiseAbs().maxCoeff());
      double var = 0.0;
      for (const PointRecord* r : classified)
        var = std::max(var,
                       (r->delta - mean).cwiseAbs().maxCoeff() / scale);
      agg.delta_variance = var;
      agg.classification =
          var <= cfg.tol.var ? "CASE_I_REAL_KAEHLER" : "CASE_II_COMPOSITION";
    } else if (all_s4 && agg.max_residuals["nullity"] <= cfg.tol.flat &&
               agg.max_residuals["coupling"] <= cfg.tol.flat) {
      agg.classification = "MINIMAL_S4";
    } else {
      agg.classification = "MIXED";
    }
    // Theorem hypotheses bound the complex dimension from below.
    const int nc = d / 2;
    agg.in_theorem_range =
        (agg.classification == "CASE_I_REAL_KAEHLER" && p == 3) ? nc >= 4
                                                                : nc >= 5;
  }

  report.timing_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

RunReport analyze(const AnalysisConfig& cfg) {
  return analyze(example_for(cfg, nullptr), cfg);
}

json RunReport::to_json() const {
  json pts = json::array();
  for (const PointRecord& r : points) {
    json jr;
    jr["coords"] = std::vector<double>(r.coords.data(),
                                       r.coords.data() + r.coords.size());
    jr["s"] = r.s;
    jr["case"] = r.case_tag;
    jr["dim_delta"] = r.dim_delta;
    jr["residuals"] = {{"flat", r.res_flat},
                       {"sff_radial", r.res_sff_radial},
                       {"alpha1_sym", r.res_alpha1_sym},
                       {"delta_orth", r.res_delta_orth}};
    jr["delta"] = std::vector<double>(r.delta.data(),
                                      r.delta.data() + r.delta.size());
    jr["flat_point"] = r.flat_point;
    jr["error"] = r.error.empty() ? json() : json(r.error);
    pts.push_back(std::move(jr));
  }
  return json{{"config", config.to_json()},
              {"points", std::move(pts)},
              {"aggregate",
               {{"classification", aggregate.classification},
                {"delta_variance", aggregate.delta_variance},
                {"counts", aggregate.counts},
                {"max_residuals", aggregate.max_residuals},
                {"in_theorem_range", aggregate.in_theorem_range}}},
              {"version", version},
              {"timing_ms", timing_ms}};
}

namespace {

SuiteResult suite_psi(std::uint64_t seed) {
  SuiteResult res;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> mdist(2, 12);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  double null_d = 0.0, slice_d = 0.0, pair_d = 0.0, alpha_d = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const int m = mdist(rng);
    LightConeTriple triple = LightConeTriple::canonical(m);
    if (it % 3 == 0)
      triple = triple.transformed(random_lorentz(m + 2, rng()));
    const ChartPatch psi = psi_patch(triple, VectorXd::Constant(m, -3.0),
                                     VectorXd::Constant(m, 3.0));
    VectorXd x(m), y(m);
    for (int i = 0; i < m; ++i) {
      x[i] = ud(rng);
      y[i] = ud(rng);
    }
    const MatrixXd g = psi.ambient().gram();
    const VectorXd px = psi.value_at(x), py = psi.value_at(y);
    null_d = std::max(null_d, std::abs(px.dot(g * px)));
    slice_d = std::max(slice_d, std::abs(px.dot(g * triple.w) - 1.0));
    pair_d = std::max(pair_d,
                      std::abs(px.dot(g * py) + 0.5 * (x - y).squaredNorm()));
    if (it % 25 == 0) {
      // alpha(X,Y) = -<X,Y> w through the full second-order machinery.
      const SFFData sff = sff_at(psi, x);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const VectorXd av = sff.normal * sff.alpha_value(i, j);
          alpha_d = std::max(
              alpha_d,
              (av + sff.metric(i, j) * triple.w).cwiseAbs().maxCoeff());
        }
    }
  }
  res.metrics["null"] = null_d;
  res.metrics["slice"] = slice_d;
  res.metrics["pair"] = pair_d;
  res.metrics["alpha"] = alpha_d;
  res.pass = null_d <= 1e-10 && slice_d <= 1e-10 && pair_d <= 1e-10 &&
             alpha_d <= 1e-9;
  return res;
}

SuiteResult suite_sff(std::uint64_t seed) {
  SuiteResult res;
  double metric_d = 0.0, radial_d = 0.0;
  for (const char* id : {"catenoid-cyl-n2", "inv-catenoid-cyl-n2"}) {
    const GalleryExample e = gallery_get(id);
    const LightConeRep rep =
        make_rep(e.patch, e.lambda,
                 LightConeTriple::canonical(e.patch.ambient_dim()));
    for (const VectorXd& x : sample_uniform(e.patch, 20, seed)) {
      const MatrixXd gf = metric_at(rep.F, x);
      const MatrixXd gr = metric_at(e.reference, x);
      metric_d = std::max(metric_d, (gf - gr).cwiseAbs().maxCoeff() /
                                        gr.cwiseAbs().maxCoeff());
      radial_d = std::max(radial_d, sff_radial_check(rep, x));
    }
  }
  res.metrics["metric"] = metric_d;
  res.metrics["radial"] = radial_d;
  res.pass = metric_d <= 1e-9 && radial_d <= 1e-6;
  return res;
}

SuiteResult suite_flatness(std::uint64_t seed) {
  SuiteResult res;
  double flat_d = 0.0;
  for (const char* id : {"inv-catenoid-cyl-n4", "graph-sumsq-n5"}) {
    const GalleryExample e = gallery_get(id);
    const LightConeRep rep =
        make_rep(e.patch, e.lambda,
                 LightConeTriple::canonical(e.patch.ambient_dim()));
    for (const VectorXd& x : sample_uniform(e.patch, 10, seed)) {
      const SFFData sff = sff_at(rep.F, x);
      if (curvature_at(sff).flat_point()) continue;
      flat_d = std::max(
          flat_d, flatness_defect(j_couple(second_fundamental_form(sff), e.J)));
    }
  }
  res.metrics["flatness"] = flat_d;
  res.pass = flat_d <= 1e-6;
  return res;
}

SuiteResult suite_costum(std::uint64_t seed) {
  SuiteResult res;
  std::mt19937_64 rng(seed);
  int violations = 0, produced = 0;
  while (produced < 1000) {
    SynthSpec spec;
    spec.p = 1 + static_cast<int>(rng() % 5);
    const int n_min = 2 * spec.p + 2;
    const int slots = (12 - n_min) / 2 + 1;
    spec.n = n_min + 2 * static_cast<int>(rng() % slots);
    spec.s = 0;  // nondegenerate-span instances
    spec.case_tag = CaseTag::nondeg_L;
    const int r_max = std::min(spec.p, spec.n / 2);
    const int r = 1 + static_cast<int>(rng() % r_max);
    spec.kernel_dim = spec.n - 2 * r;
    spec.seed = rng();
    SynthInstance inst = synth_flat(spec);
    const CostumReport rep = costum_verify(inst.alpha, inst.j);
    if (!rep.applicable || !rep.span_nondegenerate) continue;
    ++produced;
    if (!rep.satisfied) ++violations;
  }
  res.metrics["instances"] = produced;
  res.metrics["violations"] = violations;
  res.pass = violations == 0;
  return res;
}

SuiteResult suite_roundtrip(std::uint64_t seed) {
  SuiteResult res;
  std::mt19937_64 rng(seed);
  int failures = 0;
  double delta_d = 0.0, sym_d = 0.0, orth_d = 0.0;
  for (int it = 0; it < 200; ++it) {
    SynthSpec spec;
    spec.case_tag = (it % 2 == 0) ? CaseTag::deg_L : CaseTag::nondeg_L;
    spec.s = (it % 4 < 2) ? 2 : 4;
    spec.p = spec.s + 1 + static_cast<int>(rng() % (5 - spec.s));
    const int n_min = 2 * spec.p + 2;
    const int slots = (12 - n_min) / 2 + 1;
    spec.n = n_min + 2 * static_cast<int>(rng() % slots);
    const int q = spec.p - spec.s;
    const int r_max = std::min(q, spec.n / 2);
    const int r = r_max > 0 ? 1 + static_cast<int>(rng() % r_max) : 0;
    spec.kernel_dim = spec.n - 2 * r;
    spec.seed = rng();
    const SynthInstance inst = synth_flat(spec);
    try {
      const StructureReport sr = structure_decompose(inst.alpha, inst.j);
      bool ok = sr.s == spec.s && sr.case_tag == spec.case_tag &&
                sr.dim_Delta == spec.kernel_dim;
      if (spec.case_tag == CaseTag::deg_L) {
        delta_d = std::max(
            delta_d,
            (sr.delta - inst.planted.delta).cwiseAbs().maxCoeff());
        orth_d = std::max(orth_d, sr.delta_orthogonality_defect);
        ok = ok && delta_d <= 1e-6;
      }
      sym_d = std::max(sym_d, sr.alpha1_symmetry_defect);
      if (!ok) ++failures;
    } catch (const error&) {
      ++failures;
    }
  }
  res.metrics["failures"] = failures;
  res.metrics["delta_recovery"] = delta_d;
  res.metrics["alpha1_sym"] = sym_d;
  res.metrics["delta_orth"] = orth_d;
  res.pass = failures == 0 && sym_d <= 1e-8 && orth_d <= 1e-8;
  return res;
}

SuiteResult suite_congruence(std::uint64_t seed) {
  SuiteResult res;
  double moebius_d = 0.0, lorentz_d = 0.0, triple_d = 0.0;
  for (const char* id : {"catenoid-cyl-n2", "graph-z1z2-n2"}) {
    const GalleryExample e = gallery_get(id);
    const GalleryExample inv = gallery_get(std::string("inv-") + id);
    const int m = e.patch.ambient_dim();
    const LightConeTriple triple = LightConeTriple::canonical(m);
    const LightConeRep rf = make_rep(e.patch, e.lambda, triple);
    const LightConeRep rg = make_rep(inv.patch, inv.lambda, triple);
    const VectorXd base = 0.5 * (e.patch.lo() + e.patch.hi());
    const auto samples = sample_uniform(e.patch, 30, seed);
    moebius_d = std::max(moebius_d,
                         congruence_defect(rf, rg, base, samples).defect);
    // The same source through a Lorentz-moved triple must be congruent.
    const LightConeRep rl = make_rep(
        e.patch, e.lambda, triple.transformed(random_lorentz(m + 2, seed)));
    const CongruenceReport cr = congruence_defect(rf, rl, base, samples);
    lorentz_d = std::max(lorentz_d, std::max(cr.defect, cr.gram_defect));
    triple_d = std::max(triple_d, cr.defect);
  }
  // Negative control: conformally equal flat metrics, but no congruence.
  const GalleryExample fid = gallery_get("flat-identity");
  const GalleryExample fz2 = gallery_get("flat-z2");
  const LightConeTriple t2 = LightConeTriple::canonical(2);
  const LightConeRep r1 = make_rep(fid.patch, fid.lambda, t2);
  const LightConeRep r2 = make_rep(fz2.patch, fz2.lambda, t2);
  const VectorXd base = 0.5 * (fid.patch.lo() + fid.patch.hi());
  // Probe the box corners too: the discrepancy peaks at the domain boundary.
  auto neg_samples = sample_uniform(fid.patch, 30, seed);
  for (int mask = 0; mask < 4; ++mask) {
    VectorXd c(2);
    for (int k = 0; k < 2; ++k)
      c[k] = (mask >> k) & 1 ? fid.patch.hi()[k] : fid.patch.lo()[k];
    neg_samples.push_back(c);
  }
  const double neg = congruence_defect(r1, r2, base, neg_samples).defect;
  res.metrics["moebius"] = moebius_d;
  res.metrics["lorentz"] = lorentz_d;
  res.metrics["triple_independence"] = triple_d;
  res.metrics["negative_control"] = neg;
  res.pass = moebius_d <= 1e-6 && lorentz_d <= 1e-10 && triple_d <= 1e-8 &&
             neg >= 0.1;
  return res;
}

SuiteResult suite_delta(std::uint64_t seed) {
  SuiteResult res;
  const GalleryExample iso = gallery_get("catenoid-cyl-n4");
  const GalleryExample inv = gallery_get("inv-catenoid-cyl-n4");
  const int m = iso.patch.ambient_dim();
  const LightConeTriple triple = LightConeTriple::canonical(m);

  const LightConeRep riso = make_rep(iso.patch, iso.lambda, triple);
  const auto siso = sample_uniform(iso.patch, 12, seed);
  const auto diso = delta_detect(riso, iso.J, siso);
  double w_dev = 1.0, iso_var = 1.0;
  if (diso) {
    w_dev = (diso->delta - triple.w).cwiseAbs().maxCoeff();
    iso_var = diso->variance;
  }

  const LightConeRep rinv = make_rep(inv.patch, inv.lambda, triple);
  const auto dinv = delta_detect(rinv, inv.J, siso);
  const double inv_var = dinv ? dinv->variance : 1.0;

  // Conformal but not Moebius-equivalent to an isometry: no constant field.
  const GalleryExample z2 = gallery_get("flat-z2");
  const LightConeTriple t2 = LightConeTriple::canonical(2);
  const LightConeRep rz2 = make_rep(z2.patch, z2.lambda, t2);
  const auto sz2 = sample_uniform(z2.patch, 12, seed);
  const auto loose =
      delta_detect(rz2, z2.J, sz2, std::numeric_limits<double>::infinity());
  const double z2_var = loose ? loose->variance : 0.0;
  const bool z2_none = !delta_detect(rz2, z2.J, sz2, 1e-6).has_value();

  res.metrics["w_deviation"] = w_dev;
  res.metrics["isometric_variance"] = iso_var;
  res.metrics["inversion_variance"] = inv_var;
  res.metrics["z2_variance"] = z2_var;
  res.pass = diso.has_value() && w_dev <= 1e-8 && iso_var <= 1e-10 &&
             dinv.has_value() && inv_var <= 1e-6 && z2_none &&
             z2_var >= 10.0 * 1e-6;
  return res;
}

}  // namespace

SuiteResult verify_suite(const std::string& name, std::uint64_t seed,
                         const Tolerances& tol) {
  (void)tol;
  if (name == "psi") return suite_psi(seed);
  if (name == "sff") return suite_sff(seed);
  if (name == "flatness") return suite_flatness(seed);
  if (name == "costum") return suite_costum(seed);
  if (name == "roundtrip") return suite_roundtrip(seed);
  if (name == "congruence") return suite_congruence(seed);
  if (name == "delta") return suite_delta(seed);
  throw error(errc::unknown_suite, "no suite named '" + name + "'");
}

}  // namespace ckgeo
