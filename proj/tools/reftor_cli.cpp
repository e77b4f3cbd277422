#include <cstdint>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "reftor/checks.hpp"
#include "reftor/circle.hpp"
#include "reftor/signature.hpp"
#include "reftor/workbench.hpp"

using nlohmann::json;
using namespace reftor;

namespace {

json pair_of(Scalar z) { return json::array({z.real(), z.imag()}); }

Instance instance_from(const std::string& path) {
  ComplexDocument doc = read_document(path);
  if (!doc.chirality) throw ValidationError(path + ": document has no chirality");
  return {doc.complex, *doc.chirality};
}

Scalar parse_scalar(const std::string& text) {
  std::stringstream ss(text);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  if (!(ss >> re)) throw ValidationError("cannot parse number '" + text + "'");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) throw ValidationError("cannot parse number '" + text + "'");
  }
  std::string rest;
  if (ss >> rest) throw ValidationError("trailing characters in '" + text + "'");
  return {re, im};
}

int run_torsion(const std::string& path) {
  const Instance in = instance_from(path);
  const CochainComplex& c = in.complex;
  const CohomologyElement rho = refined_torsion(c, in.chirality);
  json out;
  out["torsion"] = pair_of(rho.coeff);
  out["betti"] = rho.frame->betti;
  out["sign_N"] = sign_N(c, *rho.frame);
  out["sign_R"] = sign_R(c);
  out["sign_M"] = sign_M(c.dims);
  out["torsion_norm"] = torsion_norm(c, in.chirality);
  if (is_acyclic(c)) {
    out["graded_det"] = pair_of(graded_det_finite(build_signature(c, in.chirality)));
  } else {
    out["graded_det"] = nullptr;
  }
  std::cout << out.dump() << '\n';
  std::cerr << "refined torsion " << rho.coeff << " (betti " << json(rho.frame->betti).dump()
            << ")\n";
  return 0;
}

int run_split(const std::string& path, double lambda, double theta) {
  const Instance in = instance_from(path);
  const SignatureOp s = build_signature(in.complex, in.chirality);
  const SpectralSplit sp = spectral_split(s, lambda);
  const Scalar det_large = graded_det_finite(build_signature(sp.large, sp.large_gamma));
  const Scalar via = torsion_via_split(in.complex, in.chirality, lambda).coeff;
  const Scalar rho = refined_torsion(in.complex, in.chirality).coeff;
  json out;
  out["lambda"] = lambda;
  out["d_small"] = sp.d_small;
  out["d_large"] = sp.large.dims.dims;
  out["large_betti"] = betti_numbers(sp.large);
  out["invariance_residual"] = sp.invariance_residual;
  out["graded_det_large"] = pair_of(det_large);
  out["torsion_via_split"] = pair_of(via);
  out["refined_torsion"] = pair_of(rho);
  const double residual = std::abs(via - rho) / std::abs(rho);
  out["split_residual"] = residual;
  out["consistent"] = residual <= 1e-8;
  const Scalar xe = graded_det_via_xi_eta(s, lambda, theta);
  out["graded_det_large_xi_eta"] = pair_of(xe);
  std::cout << out.dump() << '\n';
  std::cerr << "split at " << lambda << ": residual " << residual << "\n";
  return 0;
}

int run_circle(const std::string& a_text, double scale, int trunc) {
  const CircleModel m{parse_scalar(a_text), scale, trunc};
  validate(m);
  const NormCheck n = rs_norm_check(m);
  json out;
  out["a"] = pair_of(m.a);
  out["scale"] = m.scale;
  out["eta"] = pair_of(eta_circle(m));
  out["xi"] = pair_of(xi_circle(m));
  out["rho_an"] = pair_of(rho_an_circle(m));
  out["rho_an_closed_form"] = pair_of(rho_an_closed_form(m));
  out["rs_torsion"] = rs_torsion_circle(m);
  out["rs_log_det_truncated"] = rs_log_det_truncated(m);
  out["rs_norm_value"] = n.value;
  out["rs_norm_target"] = n.target;
  out["duality_residual"] = duality_check(m);
  std::cout << out.dump() << '\n';
  std::cerr << "rho_an " << rho_an_circle(m) << ", rs norm " << n.value << " (target " << n.target
            << ")\n";
  return 0;
}

int run_selftest(int cases, std::uint64_t seed) {
  const auto results = checks::run_selftest(cases, seed, true);
  json out;
  bool all = true;
  for (const auto& r : results) {
    json e;
    e["pass"] = r.pass;
    e["cases"] = r.cases;
    e["min"] = r.min;
    e["max"] = r.max;
    e["bound"] = r.bound;
    if (!r.error.empty()) e["error"] = r.error;
    out["checks"][r.key] = e;
    all = all && r.pass;
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.key << "  max " << r.max << " (" << r.bound
              << ")\n";
  }
  out["all_pass"] = all;
  std::cout << out.dump() << '\n';
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Refined torsion toolkit"};
  app.require_subcommand(1);

  std::string torsion_file;
  auto* torsion = app.add_subcommand("torsion", "refined torsion of a complex file");
  torsion->add_option("file", torsion_file, "complex JSON document")->required();

  std::string split_file;
  double lambda = 0.0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  auto* split = app.add_subcommand("split", "spectral split report");
  split->add_option("file", split_file, "complex JSON document")->required();
  split->add_option("--lambda", lambda, "threshold on |eigenvalue of B^2|")->required();
  split->add_option("--theta", theta, "Agmon angle in (-pi/2, 0)");

  std::string a_text;
  double scale = 1.0;
  int trunc = 100;
  auto* circle = app.add_subcommand("circle", "circle model invariants");
  circle->add_option("--a", a_text, "holonomy exponent re[,im]")->required();
  circle->add_option("--scale", scale, "metric scale");
  circle->add_option("--trunc", trunc, "truncation depth");

  int cases = 50;
  std::uint64_t seed = 1;
  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  selftest->add_option("--cases", cases, "random cases per check");
  selftest->add_option("--seed", seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*torsion) return run_torsion(torsion_file);
    if (*split) return run_split(split_file, lambda, theta);
    if (*circle) return run_circle(a_text, scale, trunc);
    if (*selftest) return run_selftest(cases, seed);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalBoundaryError& e) {
    std::cerr << "numerical boundary: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
