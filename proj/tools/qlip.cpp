// qlip: Lipschitz-modulus analysis of the argmin mapping of a convex QP
// under canonical (c, b) perturbations.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlip/error.hpp"
#include "qlip/families.hpp"
#include "qlip/io.hpp"
#include "qlip/model.hpp"
#include "qlip/modulus.hpp"
#include "qlip/qp.hpp"
#include "qlip/verify.hpp"

namespace {

using namespace qlip;

std::vector<int> one_based(const IndexSet& D) {
  std::vector<int> out;
  out.reserve(D.size());
  for (int i : D) out.push_back(i + 1);
  return out;
}

Json family_json(const std::vector<IndexSet>& fam) {
  Json arr = Json::array();
  for (const IndexSet& D : fam) arr.push(Json::int_vector(one_based(D)));
  return arr;
}

std::string fmt6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt6(const Vector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? ", " : "") + fmt6(v[i]);
  return out + "]";
}

std::string fmt_set(const IndexSet& D) {
  std::string out = "{";
  for (std::size_t i = 0; i < D.size(); ++i)
    out += (i ? ", " : "") + std::to_string(D[i] + 1);
  return out + "}";
}

Json families_block(const IndexFamilies& fam, std::size_t n) {
  Json f = Json::object();
  f.add("active", Json::int_vector(one_based(fam.active)));
  f.add("minimal", family_json(fam.minimal));
  f.add("extended", family_json(fam.extended));
  f.add("nurnberger", Json::boolean(fam.nurnberger(n)));
  return f;
}

Json warnings_json(const std::vector<std::string>& warnings) {
  Json arr = Json::array();
  for (const std::string& w : warnings) arr.push(Json::string(w));
  return arr;
}

Json modulus_report_json(const ModulusReport& rep, std::size_t n) {
  Json j = Json::object();
  j.add("status", Json::string("ok"));
  j.add("aubin", Json::boolean(rep.aubin));
  j.add("modulus", Json::real(rep.modulus));
  j.add("x_star", Json::real_vector(rep.x_star));
  j.add("families", families_block(rep.families, n));
  Json per = Json::array();
  for (const PerDEntry& e : rep.per_D) {
    Json entry = Json::object();
    entry.add("D", Json::int_vector(one_based(e.D)));
    entry.add("nonsingular", Json::boolean(e.nonsingular));
    entry.add("lip", Json::real(e.lip));
    if (e.attaining_direction) {
      entry.add("alpha_star", Json::real_vector(e.attaining_direction->alpha_star));
      entry.add("beta_star", Json::real_vector(e.attaining_direction->beta_star));
    } else {
      entry.add("alpha_star", Json::null());
      entry.add("beta_star", Json::null());
    }
    per.push(std::move(entry));
  }
  j.add("per_D", std::move(per));
  j.add("attaining_D",
        rep.attaining_D ? Json::int_vector(one_based(*rep.attaining_D)) : Json::null());
  j.add("warnings", warnings_json(rep.warnings));
  return j;
}

void print_modulus_text(const ModulusReport& rep, std::size_t n) {
  std::cout << "aubin: " << (rep.aubin ? "true" : "false") << "\n";
  std::cout << "modulus: " << fmt6(rep.modulus) << "\n";
  std::cout << "x_star: " << fmt6(rep.x_star) << "\n";
  std::cout << "active: " << fmt_set(rep.families.active) << "\n";
  std::cout << "minimal family:";
  for (const IndexSet& D : rep.families.minimal) std::cout << " " << fmt_set(D);
  std::cout << "\nextended family:";
  for (const IndexSet& D : rep.families.extended) std::cout << " " << fmt_set(D);
  std::cout << "\nnurnberger: " << (rep.families.nurnberger(n) ? "true" : "false")
            << "\n";
  for (const PerDEntry& e : rep.per_D)
    std::cout << "lip S_" << fmt_set(e.D) << " = " << fmt6(e.lip)
              << (e.nonsingular ? "" : " (singular M_D)") << "\n";
  if (rep.attaining_D)
    std::cout << "attained at " << fmt_set(*rep.attaining_D) << "\n";
  for (const std::string& w : rep.warnings)
    std::cout << "warning: " << w << "\n";
}

int run_analyze(const std::string& path, const std::string& output) {
  QpInstance inst = load_instance(path);
  ModulusReport rep = lip_modulus(inst);
  if (output == "json")
    std::cout << modulus_report_json(rep, inst.n).dump() << "\n";
  else
    print_modulus_text(rep, inst.n);
  return 0;
}

int run_solve(const std::string& path, const std::string& output) {
  QpInstance inst = load_instance(path);
  QpSolution sol = solve(inst, nominal_point(inst));
  const char* status = sol.status == QpStatus::Optimal      ? "optimal"
                       : sol.status == QpStatus::Infeasible ? "infeasible"
                                                            : "unbounded_below";
  if (output == "json") {
    Json j = Json::object();
    j.add("status", Json::string(status));
    j.add("x", sol.x ? Json::real_vector(*sol.x) : Json::null());
    j.add("value", sol.value ? Json::real(*sol.value) : Json::null());
    j.add("unique", sol.unique ? Json::boolean(*sol.unique) : Json::null());
    if (sol.certificate) {
      Json cert = Json::object();
      cert.add("D", Json::int_vector(one_based(sol.certificate->D)));
      cert.add("lambda", Json::real_vector(sol.certificate->lambda));
      j.add("certificate", std::move(cert));
    } else {
      j.add("certificate", Json::null());
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "status: " << status << "\n";
    if (sol.x) std::cout << "x: " << fmt6(*sol.x) << "\n";
    if (sol.value) std::cout << "value: " << fmt6(*sol.value) << "\n";
    if (sol.unique)
      std::cout << "unique: " << (*sol.unique ? "true" : "false") << "\n";
  }
  return 0;
}

int run_families(const std::string& path, const std::string& output) {
  QpInstance inst = load_instance(path);
  ParamPoint p = nominal_point(inst);
  QpSolution sol = solve(inst, p, /*compute_unique=*/false);
  if (sol.status == QpStatus::Infeasible)
    throw Error(ErrorCode::NominalInfeasible, "nominal problem is infeasible");
  if (sol.status == QpStatus::UnboundedBelow)
    throw Error(ErrorCode::NominalUnbounded, "nominal problem is unbounded below");
  IndexFamilies fam = compute_families(inst, p, *sol.x);
  if (output == "json") {
    Json j = Json::object();
    j.add("status", Json::string("ok"));
    j.add("x_star", Json::real_vector(*sol.x));
    j.add("families", families_block(fam, inst.n));
    j.add("warnings", warnings_json(fam.warnings));
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "x_star: " << fmt6(*sol.x) << "\n";
    std::cout << "active: " << fmt_set(fam.active) << "\n";
    std::cout << "minimal family:";
    for (const IndexSet& D : fam.minimal) std::cout << " " << fmt_set(D);
    std::cout << "\nextended family:";
    for (const IndexSet& D : fam.extended) std::cout << " " << fmt_set(D);
    std::cout << "\n";
  }
  return 0;
}

Vector parse_point(const std::string& text, std::size_t n) {
  Vector z;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      z.push_back(std::stod(tok, &pos));
      while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos])))
        ++pos;
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "--point entries must be numbers");
    }
  }
  if (z.size() != n)
    throw Error(ErrorCode::ParseError,
                "--point must have " + std::to_string(n) + " coordinates");
  return z;
}

int run_project(const std::string& path, const std::string& point,
                const std::string& output) {
  Polyhedron poly = load_polyhedron(path);
  Vector z = parse_point(point, poly.n);
  ProjectionReport rep = lip_projection(poly.A, poly.b, z);
  if (output == "json") {
    Json j = Json::object();
    j.add("status", Json::string("ok"));
    j.add("projection", Json::real_vector(rep.projection));
    j.add("active", Json::int_vector(one_based(rep.generic.families.active)));
    j.add("extended", family_json(rep.generic.families.extended));
    j.add("lip", Json::real(rep.closed_form));
    j.add("generic_cross_check", Json::real(rep.generic.modulus));
    j.add("attaining_D", rep.generic.attaining_D
                             ? Json::int_vector(one_based(*rep.generic.attaining_D))
                             : Json::null());
    j.add("warnings", warnings_json(rep.generic.warnings));
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "projection: " << fmt6(rep.projection) << "\n";
    std::cout << "active: " << fmt_set(rep.generic.families.active) << "\n";
    std::cout << "lip: " << fmt6(rep.closed_form)
              << " (generic cross-check " << fmt6(rep.generic.modulus) << ")\n";
  }
  return 0;
}

int run_verify(const std::string& path, std::uint64_t seed,
               std::vector<double> radii, std::size_t samples,
               const std::string& output) {
  QpInstance inst = load_instance(path);
  ModulusReport rep = lip_modulus(inst);
  if (radii.empty()) radii = {1e-2, 1e-3, 1e-4};

  if (!rep.aubin) {
    if (output == "json") {
      Json j = Json::object();
      j.add("status", Json::string("skipped"));
      j.add("aubin", Json::boolean(false));
      j.add("note", Json::string("the oracle certifies finite moduli only"));
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "aubin: false -- oracle skipped (modulus is inf)\n";
    }
    return 0;
  }

  PerturbationTrace mc = estimate_modulus(inst, radii, samples, seed);

  const PerDEntry* attaining = nullptr;
  for (const PerDEntry& e : rep.per_D)
    if (rep.attaining_D && e.D == *rep.attaining_D) attaining = &e;
  PerturbationTrace probe;
  if (attaining && attaining->attaining_direction)
    probe = directional_probe(inst, attaining->D,
                              *attaining->attaining_direction, radii);

  bool sound = true;
  for (const PerturbationSample& s : mc.samples)
    sound = sound && s.ratio <= rep.modulus + 1e-6;
  for (const PerturbationSample& s : probe.samples)
    sound = sound && s.ratio <= rep.modulus + 1e-6;
  double sharp_ratio =
      probe.samples.empty() ? 0.0 : probe.samples.back().ratio;
  bool sharp = rep.modulus == 0.0 || sharp_ratio >= 0.99 * rep.modulus;
  bool pass = sound && sharp;

  // per-radius maxima of the Monte-Carlo trace (samples are grouped by radius)
  std::vector<double> per_radius(mc.radii.size(), 0.0);
  for (std::size_t r = 0; r < mc.radii.size(); ++r)
    for (std::size_t s = 0; s < samples; ++s) {
      std::size_t idx = r * samples + s;
      if (idx < mc.samples.size())
        per_radius[r] = std::max(per_radius[r], mc.samples[idx].ratio);
    }

  if (output == "json") {
    Json j = Json::object();
    j.add("status", Json::string("ok"));
    j.add("formula", Json::real(rep.modulus));
    j.add("seed", Json::integer(static_cast<long long>(seed)));
    j.add("samples_per_radius", Json::integer(static_cast<long long>(samples)));
    j.add("radii", Json::real_vector(mc.radii));
    j.add("best_ratio", Json::real(mc.best_ratio));
    j.add("mc_per_radius_max", Json::real_vector(per_radius));
    Json pr = Json::array();
    for (const PerturbationSample& s : probe.samples) pr.push(Json::real(s.ratio));
    j.add("probe_ratios", std::move(pr));
    j.add("soundness", Json::boolean(sound));
    j.add("sharpness", Json::boolean(sharp));
    j.add("pass", Json::boolean(pass));
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "formula: " << fmt6(rep.modulus) << "\n";
    std::cout << "best sampled ratio: " << fmt6(mc.best_ratio) << "\n";
    for (std::size_t r = 0; r < mc.radii.size(); ++r)
      std::cout << "  radius " << fmt6(mc.radii[r]) << ": max ratio "
                << fmt6(per_radius[r]) << "\n";
    for (std::size_t r = 0; r < probe.samples.size(); ++r)
      std::cout << "  probe at radius " << fmt6(probe.radii[r]) << ": ratio "
                << fmt6(probe.samples[r].ratio) << "\n";
  }
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ScqFails:
    case ErrorCode::NominalInfeasible:
    case ErrorCode::NominalUnbounded:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz modulus of the argmin mapping of a convex QP under "
               "canonical (c, b) perturbations"};
  app.require_subcommand(1);

  std::string path, output = "json", point;
  std::uint64_t seed = 0;
  std::vector<double> radii;
  std::size_t samples = 2000;

  auto* analyze = app.add_subcommand("analyze", "Aubin verdict and exact modulus");
  analyze->add_option("file", path, "instance file")->required();
  analyze->add_option("--output", output, "json|text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* project = app.add_subcommand("project", "modulus of the metric projection");
  project->add_option("file", path, "polyhedron file")->required();
  project->add_option("--point", point, "z as \"x1,x2,...\"")->required();
  project->add_option("--output", output, "json|text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* solve_cmd = app.add_subcommand("solve", "solve the nominal program");
  solve_cmd->add_option("file", path, "instance file")->required();
  solve_cmd->add_option("--output", output, "json|text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* families = app.add_subcommand("families", "KKT index families at the nominal");
  families->add_option("file", path, "instance file")->required();
  families->add_option("--output", output, "json|text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* verify = app.add_subcommand("verify", "perturbation oracle cross-check");
  verify->add_option("file", path, "instance file")->required();
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--radii", radii, "sampling radii")->delimiter(',');
  verify->add_option("--samples", samples, "samples per radius");
  verify->add_option("--output", output, "json|text")
      ->check(CLI::IsMember({"json", "text"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return run_analyze(path, output);
    if (project->parsed()) return run_project(path, point, output);
    if (solve_cmd->parsed()) return run_solve(path, output);
    if (families->parsed()) return run_families(path, output);
    if (verify->parsed()) return run_verify(path, seed, radii, samples, output);
  } catch (const Error& e) {
    std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what()
              << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
