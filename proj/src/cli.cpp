#include "zollfins/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "zollfins/errors.hpp"
#include "zollfins/finsler.hpp"
#include "zollfins/geodesics.hpp"
#include "zollfins/io.hpp"
#include "zollfins/jacobi.hpp"
#include "zollfins/moduli.hpp"
#include "zollfins/parallel.hpp"
#include "zollfins/profile.hpp"

namespace zollfins {
namespace {

constexpr double kPi = std::numbers::pi;

int samples_or(const RunConfig& config, int fallback) { return config.samples > 0 ? config.samples : fallback; }

std::vector<double> r_list_or(const RunConfig& config, std::vector<double> fallback) {
  return config.R.empty() ? fallback : config.R;
}

void print_witness(std::ostream& err, const CurvatureWitness& w) {
  fmt::print(err, "Gauss curvature not positive: G = {} at x = {}\n", format_number(w.g), format_number(w.x));
}

// One verification entry of the report.
struct Check {
  std::string name;
  std::string status;  // pass | fail | skip
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

Check measure(std::string name, double tolerance, const std::function<double()>& residual) {
  Check c{std::move(name), "pass", 0.0, tolerance, {}};
  try {
    c.residual = residual();
    if (!(c.residual < tolerance)) c.status = "fail";
  } catch (const std::exception& e) {
    c.status = "fail";
    c.residual = std::numeric_limits<double>::infinity();
    c.detail = e.what();
  }
  return c;
}

std::vector<double> interior_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 1; i <= n; ++i) out.push_back(lo + (hi - lo) * i / (n + 1));
  return out;
}

const std::vector<double> kVerifyClairaut = {0.0, 0.1, -0.1, 0.3, -0.3, 0.5, -0.5, 0.7, -0.7, 0.9, -0.9};
const std::vector<double> kVerifyR = {-1.2, -0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9, 1.2};

std::vector<Check> run_checks(const ZollProfile& profile) {
  std::vector<Check> checks;
  const CurvatureWitness witness = check_positive_curvature(profile);
  checks.push_back({"curvature_positive", witness.positive ? "pass" : "fail", witness.g, 0.0,
                    fmt::format("min G = {} at x = {}", format_number(witness.g), format_number(witness.x))});

  if (!witness.positive) {
    // Convexity must fail with G: exhibit a negative indicatrix curvature.
    Check conv{"indicatrix_convexity", "fail", 0.0, 0.0, {}};
    const double r_bad = std::acos(std::clamp(witness.x, -1.0, 1.0));
    const double r_probe = std::clamp(r_bad, 0.05, kPi - 0.05);
    try {
      const CurvaturePair k = indicatrix_curvature(profile, 0.0, r_probe, 1);
      conv.residual = k.from_curve;
      conv.detail = fmt::format("indicatrix curvature {} at R = 0, r = {}", format_number(k.from_curve),
                                format_number(r_probe));
    } catch (const std::exception& e) {
      conv.detail = e.what();
    }
    checks.push_back(conv);
    for (const char* name : {"curvature_fd", "closure_integrals", "zoll_geodesic_closure", "jacobi_wronskian",
                             "jacobi_equation", "representation_agreement", "regularization_agreement",
                             "convexity_curvature", "finsler_homogeneity", "finsler_unit_indicatrix",
                             "fundamental_tensor_pd", "f_equation_roots", "invariant_flow",
                             "finsler_geodesic_closure", "finsler_meeting"}) {
      checks.push_back({name, "skip", 0.0, 0.0, "requires G > 0"});
    }
    return checks;
  }

  checks.push_back(measure("curvature_fd", 1e-6, [&] {
    double worst = 0.0;
    for (double r : interior_grid(0.05, kPi - 0.05, 60)) {
      worst = std::max(worst, std::abs(gauss_curvature(profile, r) - curvature_fd_check(profile, r, 1e-4)));
    }
    return worst;
  }));

  checks.push_back(measure("closure_integrals", 1e-8, [&] {
    double worst = 0.0;
    for (double c : kVerifyClairaut) {
      const ClosureIntegrals ci = closure_integrals(profile, c);
      worst = std::max({worst, std::abs(ci.period - kPi), std::abs(ci.advance - kPi)});
    }
    return worst;
  }));

  checks.push_back(measure("zoll_geodesic_closure", 1e-7, [&] {
    double worst = 0.0;
    for (double c : {0.3, -0.6, 0.0}) {
      const GeodesicState s{c == 0.0 ? 0.4 : std::asin(std::abs(c)) + 0.2, 0.5, c, 1};
      const GeodesicTrace tr = integrate_geodesic(profile, s, 2.0 * kPi, 1e-11, 64);
      const GeodesicSample& e = tr.samples.back();
      worst = std::max({worst, std::abs(e.r - s.r), std::abs(std::remainder(e.theta - s.theta, 2.0 * kPi))});
    }
    return worst;
  }));

  checks.push_back(measure("jacobi_wronskian", 1e-9, [&] {
    double worst = 0.0;
    for (double c : {0.0, 0.3, -0.6}) {
      const double rc = std::asin(std::abs(c));
      for (double r : interior_grid(rc, kPi - rc, 41)) {
        for (int sign : {1, -1}) {
          worst = std::max(worst, std::abs(jacobi_pair(profile, c, r, sign).wronskian() + 1.0));
        }
      }
    }
    return worst;
  }));

  checks.push_back(measure("jacobi_equation", 1e-5, [&] {
    double worst = 0.0;
    for (double c : {0.2, -0.6}) {
      const double rc = std::asin(std::abs(c));
      const std::vector<double> grid = interior_grid(rc + 0.05, kPi - rc - 0.05, 30);
      worst = std::max(worst, jacobi_ode_check(profile, c, grid));
    }
    return worst;
  }));

  checks.push_back(measure("representation_agreement", 1e-8, [&] {
    std::vector<double> worst(kVerifyR.size(), 0.0);
    parallel_for(kVerifyR.size(), [&](std::size_t i) {
      const double R = kVerifyR[i];
      const double rc = std::abs(R);
      for (double r : interior_grid(rc, kPi - rc, 200)) {
        for (int branch : {1, -1}) {
          const IndicatrixSample s = indicatrix_parametric(profile, R, r, branch);
          worst[i] = std::max(worst[i], std::abs(implicit_residual(profile, R, s.v1, s.v2)));
        }
      }
    });
    return *std::max_element(worst.begin(), worst.end());
  }));

  checks.push_back(measure("regularization_agreement", 1e-10, [&] {
    double worst = 0.0;
    for (double R : {-0.7, 0.0, 0.5}) {
      const double rc = std::abs(R);
      for (double r : interior_grid(rc, kPi - rc, 40)) {
        if (std::abs(r - 0.5 * kPi) <= 0.1) continue;
        const double a = indicatrix_parametric(profile, R, r, 1).v2;
        const double b = indicatrix_regularized(profile, R, r, 1).v2;
        worst = std::max(worst, std::abs(a - b));
      }
    }
    return worst;
  }));

  checks.push_back(measure("convexity_curvature", 1e-6, [&] {
    double worst = 0.0;
    for (double R : {-0.9, 0.0, 0.4, 1.2}) {
      const double rc = std::abs(R);
      for (double r : interior_grid(rc, kPi - rc, 40)) {
        const CurvaturePair k = indicatrix_curvature(profile, R, r, 1);
        if (!(k.from_curve > 0.0 && k.from_metric > 0.0)) throw ConvexityError("non-positive indicatrix curvature");
        worst = std::max(worst, std::abs(k.from_curve - k.from_metric) / std::abs(k.from_metric));
      }
      const IndicatrixCurve curve = indicatrix_curve(profile, R, 100);
      require_convex(curve);
    }
    return worst;
  }));

  const FinslerMetric metric(profile);
  auto v_grid = [](int n) {
    std::vector<Vec2> out;
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * kPi * (k + 0.5) / n;
      out.push_back({0.8 * std::cos(a), 1.3 * std::sin(a)});
    }
    return out;
  };

  checks.push_back(measure("finsler_homogeneity", 1e-10, [&] {
    double worst = 0.0;
    for (double R : {-0.8, 0.0, 0.4, 1.1}) {
      for (const Vec2& v : v_grid(40)) {
        const double f = metric.F(R, v);
        for (double l : {1e-3, 0.5, 2.0, 1e3}) {
          worst = std::max(worst, std::abs(metric.F(R, {l * v[0], l * v[1]}) / (l * f) - 1.0));
        }
      }
    }
    return worst;
  }));

  checks.push_back(measure("finsler_unit_indicatrix", 1e-9, [&] {
    double worst = 0.0;
    for (double R : {-0.8, 0.0, 0.4, 1.1}) {
      const double rc = std::abs(R);
      for (double r : interior_grid(rc, kPi - rc, 30)) {
        for (int branch : {1, -1}) {
          const IndicatrixSample s = indicatrix_parametric(profile, R, r, branch);
          worst = std::max(worst, std::abs(metric.F(R, {s.v1, s.v2}) - 1.0));
        }
      }
    }
    return worst;
  }));

  {
    Check pd{"fundamental_tensor_pd", "pass", 0.0, 0.0, {}};
    double min_det = std::numeric_limits<double>::infinity();
    for (double R : {-0.8, 0.0, 0.4, 1.1}) {
      for (const Vec2& v : v_grid(100)) {
        const FinslerEval g = fundamental_tensor(metric, R, 0.0, v);
        min_det = std::min(min_det, g.det());
        if (!g.positive_definite()) pd.status = "fail";
      }
    }
    pd.residual = min_det;
    pd.detail = fmt::format("min det g = {}", format_number(min_det));
    checks.push_back(pd);
  }

  checks.push_back(measure("f_equation_roots", 1e-9, [&] {
    double worst = 0.0;
    for (double R : {0.0, 0.4, -1.0}) {
      for (const Vec2& v : v_grid(24)) {
        const double f = metric.F(R, v);
        double best = std::numeric_limits<double>::infinity();
        for (double root : metric.polynomial_candidates(R, v)) best = std::min(best, std::abs(root - f) / f);
        worst = std::max(worst, best);
      }
    }
    return worst;
  }));
  checks.back().detail = fmt::format("F-equation degree {}", implicit_polynomial(profile, 0.3).f_degree);

  if (profile.is_round()) {
    checks.push_back(measure("invariant_flow", 1e-12, [&] {
      double worst = 0.0;
      for (double r : interior_grid(0.05, kPi - 0.05, 30)) {
        for (double phi : interior_grid(0.0, 2.0 * kPi, 12)) {
          const InvariantPair p = invariants_IJ(profile, r, phi);
          worst = std::max(worst, std::abs(p.I) + std::abs(p.J));
        }
      }
      return worst;
    }));
    checks.back().detail = "Riemannian: I = J = 0";
  } else {
    checks.push_back(measure("invariant_flow", 1e-4, [&] {
      double worst = 0.0;
      for (double r : {0.4, 1.0, 1.3, 2.2}) {
        for (double phi : {0.0, 0.7, 2.0, 4.0}) {
          worst = std::max(worst, invariant_flow_check(profile, r, phi, 1e-5));
        }
      }
      return worst;
    }));
    checks.back().detail = fmt::format("sigma = {}, calibrated {}", kFiberRotationSign,
                                       calibrate_fiber_rotation(profile, 1.0, 0.7, 1e-5));
  }

  checks.push_back(measure("finsler_geodesic_closure", 1e-3, [&] {
    const ModuliPoint start{0.2, 0.0};
    const FinslerTrace tr = finsler_geodesic(metric, start, unit_direction(metric, 0.2, 0.3), 2.0 * kPi, 1e-9, 64);
    const FinslerSample& e = tr.samples.back();
    return chart_distance({e.R, e.Theta}, start);
  }));

  checks.push_back(measure("finsler_meeting", 1e-3, [&] {
    const ModuliPoint start{0.2, 0.0};
    const FinslerTrace a = finsler_geodesic(metric, start, unit_direction(metric, 0.2, 0.3), kPi, 1e-9, 64);
    const FinslerTrace b = finsler_geodesic(metric, start, unit_direction(metric, 0.2, 1.9), kPi, 1e-9, 64);
    return chart_distance({a.samples.back().R, a.samples.back().Theta},
                          {b.samples.back().R, b.samples.back().Theta});
  }));
  return checks;
}

}  // namespace

void RunConfig::validate() const {
  if (!(tol >= 1e-12 && tol <= 1e-2)) throw DomainError(fmt::format("tolerance {} outside [1e-12, 1e-2]", tol));
  if (samples != 0 && samples < 16) throw DomainError("sample counts must be at least 16");
  if (side != "zoll" && side != "finsler") throw DomainError(fmt::format("unknown side '{}'", side));
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t-end must be positive");
  if (width < 64 || height < 64) throw DomainError("plot dimensions must be at least 64");
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) throw DomainError(fmt::format("not a number: '{}'", token));
    out.push_back(v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',') {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      token += ch;
    }
  }
  flush();
  return out;
}

int cmd_curvature(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ZollProfile profile = ZollProfile::parse(config.h);
  write_file_atomic(config.out / "curvature.csv", curvature_csv(profile, samples_or(config, 2001)));
  const CurvatureWitness w = check_positive_curvature(profile);
  if (!w.positive) {
    print_witness(err, w);
    return kExitGeometry;
  }
  fmt::print(out, "min G = {} at x = {}\n", format_number(w.g), format_number(w.x));
  return kExitOk;
}

int cmd_indicatrix(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ZollProfile profile = ZollProfile::parse(config.h);
  const CurvatureWitness w = check_positive_curvature(profile);
  if (!w.positive) {
    print_witness(err, w);
    return kExitGeometry;
  }
  const std::vector<double> Rs = r_list_or(config, {0.2, 0.6, 1.0, 1.3});
  const int per_branch = samples_or(config, 200);
  std::vector<IndicatrixCurve> curves;
  for (double R : Rs) {
    IndicatrixCurve curve = indicatrix_curve(profile, R, per_branch);
    if (!curve.violation.empty()) {
      fmt::print(err, "convexity violation: {}\n", curve.violation);
      return kExitGeometry;
    }
    write_file_atomic(config.out / indicatrix_file_name(R), indicatrix_csv(curve));
    fmt::print(out, "R = {}: {} samples, closure gap {:.3g}, winding {}\n", R, curve.samples.size(),
               curve.closure_gap, curve.winding);
    curves.push_back(std::move(curve));
  }
  PlotOptions plot{config.width, config.height, fmt::format("Indicatrices, h = {}", profile.literal())};
  write_file_atomic(config.out / "indicatrices.svg", indicatrices_svg(curves, plot));
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const ZollProfile profile = ZollProfile::parse(config.h);
  const std::vector<Check> checks = run_checks(profile);
  bool all = true;
  nlohmann::ordered_json report;
  report["profile"] = profile.literal();
  report["fiber_rotation_sign"] = kFiberRotationSign;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    if (c.status == "fail") all = false;
    fmt::print(out, "{:<26} {:<4}  residual {:<24} tolerance {:g}{}\n", c.name, c.status, format_number(c.residual),
               c.tolerance, c.detail.empty() ? "" : "  (" + c.detail + ")");
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    entry["status"] = c.status;
    entry["residual"] = std::isfinite(c.residual) ? nlohmann::ordered_json(format_number(c.residual))
                                                  : nlohmann::ordered_json("inf");
    entry["tolerance"] = c.tolerance;
    entry["detail"] = c.detail;
    list.push_back(entry);
  }
  report["checks"] = list;
  report["all_pass"] = all;
  write_file_atomic(config.out / "report.json", report.dump(2) + "\n");
  fmt::print(out, "{}\n", all ? "all checks passed" : "some checks failed");
  return all ? kExitOk : kExitVerify;
}

int cmd_geodesic(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ZollProfile profile = ZollProfile::parse(config.h);
  const int per_period = samples_or(config, 512);
  if (config.side == "zoll") {
    const std::vector<double> cs = config.c.empty() ? std::vector<double>{0.5} : config.c;
    for (double c : cs) {
      GeodesicState s{turning_latitude(c), 0.0, c, 1};
      if (config.start) {
        s.r = (*config.start)[0];
        s.theta = (*config.start)[1];
      }
      const GeodesicTrace tr = integrate_geodesic(profile, s, config.t_end, std::clamp(config.tol, 1e-12, 1e-4),
                                                  per_period);
      const std::string name = fmt::format("zoll_geodesic_c{}.csv", c == 0.0 ? 0.0 : c);
      write_file_atomic(config.out / name, zoll_trace_csv(tr));
      const GeodesicSample& e = tr.samples.back();
      fmt::print(out, "c = {}: {} samples, end (r, theta) = ({}, {})\n", c, tr.samples.size(), format_number(e.r),
                 format_number(e.theta));
    }
    return kExitOk;
  }
  const CurvatureWitness w = check_positive_curvature(profile);
  if (!w.positive) {
    print_witness(err, w);
    return kExitGeometry;
  }
  const FinslerMetric metric(profile);
  const ModuliPoint start = config.start ? ModuliPoint{(*config.start)[0], (*config.start)[1]} : ModuliPoint{0.2, 0.0};
  const Vec2 v0 = unit_direction(metric, start.R, config.dir);
  const std::filesystem::path path = config.out / "finsler_geodesic.csv";
  try {
    const FinslerTrace tr = finsler_geodesic(metric, start, v0, config.t_end, config.tol, per_period);
    write_file_atomic(path, finsler_trace_csv(tr));
    const FinslerSample& e = tr.samples.back();
    fmt::print(out, "{} samples, end (R, Theta) = ({}, {}), F drift {:.3g}\n", tr.samples.size(),
               format_number(e.R), format_number(e.Theta), tr.max_f_drift);
  } catch (const FinslerChartExit& e) {
    write_file_atomic(path, finsler_trace_csv(e.trace));
    fmt::print(err, "{} (partial trace with {} samples written)\n", e.what(), e.trace.samples.size());
    return kExitGeometry;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zoll surfaces of revolution and their K = 1 Finsler metrics", "zollfins"};
  app.set_help_flag("--help", "print help");  // -h would clash with --h
  app.set_config("--config", "", "key=value file; flags given on the command line win");
  app.require_subcommand(1);

  RunConfig config;
  std::string r_text;
  std::string c_text;
  std::string start_text;
  std::string out_dir = ".";
  app.add_option("--h", config.h, "profile coefficients a1,a3,... (empty or 0 for the round sphere)");
  app.add_option("--R", r_text, "chart latitudes R, comma separated");
  app.add_option("--c", c_text, "Clairaut constants, comma separated");
  app.add_option("--tol", config.tol, "integration tolerance");
  app.add_option("--samples", config.samples, "samples (grid points, per branch, or per period)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--side", config.side, "geodesic side: zoll or finsler");
  app.add_option("--t-end", config.t_end, "geodesic parameter length");
  app.add_option("--start", start_text, "start point: r,theta (zoll) or R,Theta (finsler)");
  app.add_option("--dir", config.dir, "initial direction angle in the (v1, v2) plane (finsler)");
  app.add_option("--width", config.width, "SVG width");
  app.add_option("--height", config.height, "SVG height");

  for (const char* name : {"curvature", "indicatrix", "verify", "geodesic"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("curvature")->description("scan G over [-1, 1] and write curvature.csv");
  app.get_subcommand("indicatrix")->description("write indicatrix CSVs and indicatrices.svg");
  app.get_subcommand("verify")->description("run the invariant checks and write report.json");
  app.get_subcommand("geodesic")->description("trace a geodesic of the surface or of the Finsler metric");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitIo;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    config.R = parse_real_list(r_text);
    config.c = parse_real_list(c_text);
    config.out = out_dir;
    if (!start_text.empty()) {
      const std::vector<double> s = parse_real_list(start_text);
      if (s.size() != 2) throw DomainError("--start needs two numbers");
      config.start = std::array<double, 2>{s[0], s[1]};
    }
    config.validate();
    if (config.command == "curvature") return cmd_curvature(config, out, err);
    if (config.command == "indicatrix") return cmd_indicatrix(config, out, err);
    if (config.command == "verify") return cmd_verify(config, out, err);
    return cmd_geodesic(config, out, err);
  } catch (const IoError& e) {
    fmt::print(err, "I/O error: {}\n", e.what());
    return kExitIo;
  } catch (const ConvexityError& e) {
    fmt::print(err, "convexity violation: {}\n", e.what());
    return kExitGeometry;
  } catch (const ChartExitError& e) {
    fmt::print(err, "{}\n", e.what());
    return kExitGeometry;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitIo;
  }
}

}  // namespace zollfins
