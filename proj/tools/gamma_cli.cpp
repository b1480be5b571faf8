// Command-line front end: parse JSON inputs, dispatch the check batteries,
// emit deterministic certificate reports (canonical JSON plus a '#'-prefixed
// summary footer). Exit codes: 0 pass, 1 check failure, 2 usage or IO error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spd/combinatorics.hpp"
#include "spd/corpus.hpp"
#include "spd/dilation.hpp"
#include "spd/fundamental_ops.hpp"
#include "spd/linalg_core.hpp"
#include "spd/operator_pencils.hpp"
#include "spd/operator_tuple.hpp"
#include "spd/sym_geometry.hpp"
#include "spd/verify.hpp"

namespace {

using spd::CheckItem;
using spd::CMat;
using spd::Complex;
using spd::CVec;
using spd::FundamentalOperators;
using spd::OJson;
using spd::OperatorTuple;
using spd::Side;

struct Job {
  std::string command;
  std::string input;
  double tol = 1e-9;
  int alpha_grid = 64;
  int beta_grid = 128;
  std::uint64_t seed = 1729;
  bool seed_given = false;
  long long samples = 100000;
  int trunc_past = 6;
  int trunc_future = 6;
  std::string out;
};

void add_common_flags(CLI::App* cmd, Job* job) {
  cmd->add_option("--tol", job->tol, "Residual tolerance for the checks");
  cmd->add_option("--alpha-grid", job->alpha_grid,
                  "Points per circle of the interior alpha grid");
  cmd->add_option("--beta-grid", job->beta_grid,
                  "Points on the unit-circle beta grid");
  cmd->add_option("--seed", job->seed, "Base seed for every sampled check")
      ->each([job](const std::string&) { job->seed_given = true; });
  cmd->add_option("--samples", job->samples,
                  "Sample count for the estimate sweeps");
  cmd->add_option("--trunc-past", job->trunc_past,
                  "Past truncation depth of the dilation window");
  cmd->add_option("--trunc-future", job->trunc_future,
                  "Future truncation depth of the dilation window");
  cmd->add_option("--out", job->out, "Also write the report to this file");
}

void apply_env_seed(Job& job) {
  if (job.seed_given) return;
  const char* env = std::getenv("GAMMA_SEED");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0')
    throw std::runtime_error("input: GAMMA_SEED is not an unsigned integer");
  job.seed = static_cast<std::uint64_t>(v);
}

OJson job_json(const Job& job) {
  OJson j;
  j["command"] = job.command;
  j["input"] = job.input;
  j["tol"] = job.tol;
  j["alpha_grid"] = job.alpha_grid;
  j["beta_grid"] = job.beta_grid;
  j["seed"] = job.seed;
  j["samples"] = job.samples;
  j["trunc"] = OJson::array({job.trunc_past, job.trunc_future});
  return j;
}

nlohmann::json read_input(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("input: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("input: invalid JSON: ") + e.what());
  }
}

// Prints the canonical document followed by the footer lines; mirrors the
// exact same bytes into --out when given.
int emit(const OJson& doc, const std::vector<std::string>& footer,
         const Job& job, bool pass) {
  std::string text = spd::canonical_dump(doc);
  for (const std::string& line : footer) text += "# " + line + "\n";
  std::fputs(text.c_str(), stdout);
  if (!job.out.empty()) {
    std::ofstream out(job.out, std::ios::binary);
    if (!out) throw std::runtime_error("input: cannot write " + job.out);
    out << text;
  }
  return pass ? 0 : 1;
}

std::string pass_word(bool b) { return b ? "PASS" : "FAIL"; }

int run_check_point(const Job& job) {
  const CVec s = spd::point_from_json(read_input(job.input));
  const int n = static_cast<int>(s.size());

  const spd::MembershipVerdict roots = spd::roots_membership(s, job.tol);
  const spd::SchurReport schur = spd::schur_membership(s, Complex(1.0, 0.0), job.tol);
  const spd::BoundaryReport boundary = spd::bboundary_check(s, job.tol);

  double pencil_min = 0.0;
  for (const Complex& a : spd::alpha_grid(job.alpha_grid))
    for (int i = 1; i <= n - 1; ++i) {
      const spd::PencilValues pv = spd::scalar_pencils(i, a, s);
      pencil_min = std::min({pencil_min, pv.phi1, pv.phi2});
    }

  OJson doc;
  doc["report"] = "check-point";
  doc["job"] = job_json(job);
  doc["point"] = spd::point_json(s);

  OJson rj;
  rj["region"] = spd::region_name(roots.region);
  rj["max_root_mod"] = roots.max_root_mod;
  rj["in_closed"] = roots.in_closed();
  rj["in_open"] = roots.in_open();
  doc["roots"] = std::move(rj);

  OJson sj;
  sj["min_eig"] = schur.min_eig;
  sj["positive"] = schur.positive;
  doc["schur"] = std::move(sj);

  const bool costara_applicable = std::abs(spd::sym_coord(s, n)) < 1.0;
  OJson cj;
  cj["applicable"] = costara_applicable;
  bool costara_consistent = true;
  if (costara_applicable) {
    const spd::CostaraDecomposition cd = spd::costara_decompose(s, job.tol);
    cj["residual"] = cd.residual;
    cj["s_in_gamma"] = cd.s_in_gamma;
    cj["c_in_gamma"] = cd.c_in_gamma;
    costara_consistent = cd.s_in_gamma == roots.in_closed();
  }
  doc["costara"] = std::move(cj);

  OJson bj;
  bj["is_boundary"] = boundary.is_boundary;
  bj["modulus_one"] = boundary.modulus_one;
  bj["conjugate_pairing"] = boundary.conjugate_pairing;
  bj["pairing_residual"] = boundary.pairing_residual;
  doc["distinguished_boundary"] = std::move(bj);

  doc["scalar_pencils"] = OJson{{"grid", job.alpha_grid},
                                {"min_value", pencil_min}};

  const bool strict_agree = roots.in_open() == schur.positive;
  const bool pencil_ok = !roots.in_closed() || pencil_min >= -1e-10;
  const bool boundary_ok = !boundary.is_boundary || roots.in_closed();
  const bool agree =
      strict_agree && pencil_ok && boundary_ok && costara_consistent;
  OJson aj;
  aj["strict_open_agreement"] = strict_agree;
  aj["pencil_necessity"] = pencil_ok;
  aj["boundary_consistency"] = boundary_ok;
  aj["costara_consistency"] = costara_consistent;
  aj["agree"] = agree;
  doc["agreement"] = std::move(aj);

  std::vector<std::string> footer;
  footer.push_back("check-point: " + pass_word(agree) + " (region " +
                   spd::region_name(roots.region) + ")");
  return emit(doc, footer, job, agree);
}

int run_check_tuple(const Job& job, bool fundamental_only) {
  const OperatorTuple t = spd::tuple_from_json(read_input(job.input));
  if (t.n() < 2)
    throw std::runtime_error("input: a tuple needs at least two ops");
  const int n = t.n();

  OJson doc;
  doc["report"] = fundamental_only ? "fundamental" : "check-tuple";
  doc["job"] = job_json(job);
  doc["n"] = n;
  doc["dim"] = static_cast<long long>(t.dim());

  const spd::CommuteReport comm = spd::commute_check(t);
  doc["commute"] = OJson{{"max_commutator", comm.max_commutator},
                         {"ok", comm.ok}};

  bool pass = comm.ok;
  std::vector<std::string> footer;

  if (!fundamental_only) {
    const spd::SuiteReport suite = spd::necessary_contraction_suite(
        t, spd::alpha_grid(job.alpha_grid));
    doc["necessary_suite"] = spd::suite_json(suite);
    const spd::ClassifierVerdict cls = spd::classify_tuple(t);
    OJson cj;
    cj["class"] = spd::tuple_class_name(cls.cls);
    cj["note"] = cls.note;
    cj["evidence"] = spd::check_items_json(cls.evidence);
    doc["classifier"] = std::move(cj);

    double circle_max = 0.0;
    for (const Complex& beta : spd::beta_grid(job.beta_grid))
      for (int i = 1; i <= n - 1; ++i) {
        const spd::PencilEvaluation pe = spd::op_pencil(i, beta, t);
        circle_max = std::max({circle_max, -pe.min_eig1, -pe.min_eig2});
      }
    doc["circle_pencil_deficit"] = circle_max;

    pass = pass && suite.pass;
    footer.push_back("necessary suite: " + pass_word(suite.pass));
    footer.push_back(std::string("class: ") + spd::tuple_class_name(cls.cls));
  }

  OJson fj;
  try {
    const FundamentalOperators e = spd::solve_fundamental(t, Side::Direct);
    const FundamentalOperators f = spd::solve_fundamental(t, Side::Adjoint);
    const spd::UniquenessReport uq = spd::uniqueness_check(t);
    const spd::RadiusReport rb = spd::radius_bound_check(e, n);
    std::vector<CMat> family;
    for (int i = 1; i <= n - 1; ++i) family.push_back(e.compressed(i));
    const spd::Lemma43Report l43 = spd::lemma43_check(family);
    const spd::Lemma72Report l72 = spd::lemma72_suite(t, e, f, job.tol);
    const spd::CommutationGates gates = spd::prop66_conditions(e, job.tol);

    double res = 0.0, off = 0.0;
    for (double r : e.residuals) res = std::max(res, r);
    for (double r : f.residuals) res = std::max(res, r);
    for (double r : e.off_defect) off = std::max(off, r);
    for (double r : f.off_defect) off = std::max(off, r);

    fj["solved"] = true;
    fj["defect_rank_direct"] = e.rank;
    fj["defect_rank_adjoint"] = f.rank;
    fj["solve_residual"] = res;
    fj["off_defect"] = off;
    fj["uniqueness_deviation"] = uq.max_deviation;
    fj["radius"] = OJson{{"max_excess", rb.max_excess}, {"pass", rb.pass}};
    fj["equivalence"] = OJson{{"items", spd::check_items_json(l43.items)},
                              {"agree", l43.agree}};
    fj["identity_suite"] = OJson{{"items", spd::check_items_json(l72.items)},
                                 {"pass", l72.pass}};
    fj["commutation_gates"] =
        OJson{{"commutator_family", gates.commutator_family},
              {"mixed_family", gates.mixed_family},
              {"pass", gates.pass}};
    if (fundamental_only) {
      OJson basis_e, basis_f;
      OJson ee = OJson::array(), ff = OJson::array();
      for (int i = 1; i <= n - 1; ++i) {
        ee.push_back(spd::matrix_json(e.compressed(i)));
        ff.push_back(spd::matrix_json(f.compressed(i)));
      }
      fj["direct"] = OJson{{"basis", spd::matrix_json(e.basis)},
                           {"ops", std::move(ee)}};
      fj["adjoint"] = OJson{{"basis", spd::matrix_json(f.basis)},
                            {"ops", std::move(ff)}};
    }

    const bool fo_pass = e.within_tol && f.within_tol && uq.pass && rb.pass &&
                         l43.agree && l72.pass;
    fj["pass"] = fo_pass;
    pass = pass && fo_pass;
    footer.push_back("fundamental operators: " + pass_word(fo_pass) +
                     " (gates " + pass_word(gates.pass) + ")");
  } catch (const std::domain_error& e) {
    fj["solved"] = false;
    fj["error"] = e.what();
    fj["pass"] = false;
    pass = false;
    footer.push_back(std::string("fundamental operators: FAIL (") + e.what() +
                     ")");
  }
  doc["fundamental"] = std::move(fj);

  footer.insert(footer.begin(),
                doc["report"].get<std::string>() + ": " + pass_word(pass));
  return emit(doc, footer, job, pass);
}

int run_dilate(const Job& job) {
  const OperatorTuple t = spd::tuple_from_json(read_input(job.input));
  if (t.n() < 2)
    throw std::runtime_error("input: a tuple needs at least two ops");

  OJson doc;
  doc["report"] = "dilate";
  doc["job"] = job_json(job);
  doc["n"] = t.n();
  doc["dim"] = static_cast<long long>(t.dim());

  const FundamentalOperators e = spd::solve_fundamental(t, Side::Direct);
  const FundamentalOperators f = spd::solve_fundamental(t, Side::Adjoint);

  const spd::StepIdentityReport steps =
      spd::verify_step_identities(t, e, f, job.tol);
  OJson sj;
  sj["gates"] = spd::check_items_json(steps.gates);
  sj["steps"] = spd::check_items_json(steps.steps);
  sj["gates_pass"] = steps.gates_pass;
  sj["first_failure"] = steps.first_failure;
  sj["pass"] = steps.pass;
  doc["step_identities"] = std::move(sj);

  const spd::TruncatedDilation dil = spd::build_unitary_dilation(
      t, e, f, job.trunc_past, job.trunc_future);
  const int degree = std::min(4, dil.safe_degree);
  const spd::MomentReport mom = spd::verify_dilation_moments(t, dil, degree);
  OJson mj;
  mj["degree"] = degree;
  mj["moments_checked"] = mom.moments_checked;
  mj["items"] = spd::check_items_json(mom.items);
  mj["pass"] = mom.pass;
  doc["moments"] = std::move(mj);

  const spd::SuiteReport standing = spd::standing_assumption_gate(dil);
  doc["standing_assumption"] = spd::suite_json(standing);

  const int blocks = std::max({3, job.trunc_past, job.trunc_future});
  const spd::IsometricDilation iso = spd::build_isometric_dilation(t, blocks, job.tol);
  OJson ij;
  ij["blocks"] = blocks;
  ij["adjudication"] = iso.adjudication;
  ij["displayed"] = OJson{{"items", spd::check_items_json(iso.displayed.checks)},
                          {"pass", iso.displayed.pass}};
  ij["substituted"] =
      OJson{{"items", spd::check_items_json(iso.substituted.checks)},
            {"pass", iso.substituted.pass}};
  doc["isometric"] = std::move(ij);
  const bool iso_any = iso.displayed.pass || iso.substituted.pass;

  const spd::CoisometryModel cm = spd::build_coisometry_model(t, f, blocks);
  OJson cj;
  cj["items"] = spd::check_items_json(cm.checks);
  cj["defect_dim_truncated"] = cm.defect_dim_v;
  cj["defect_dim_expected"] = cm.defect_dim_final;
  cj["pass"] = cm.pass;
  doc["coisometry"] = std::move(cj);

  OJson dj;
  dj["n_minus"] = dil.n_minus;
  dj["n_plus"] = dil.n_plus;
  dj["safe_degree"] = dil.safe_degree;
  dj["rank"] = dil.rank_minus;
  OJson layout = OJson::array();
  for (const spd::BlockSpan& bs : dil.layout) {
    const char* kind = bs.kind == spd::BlockKind::Past     ? "past"
                       : bs.kind == spd::BlockKind::Space ? "space"
                                                          : "future";
    layout.push_back(OJson{{"kind", kind},
                           {"depth", bs.depth},
                           {"offset", static_cast<long long>(bs.offset)},
                           {"dim", static_cast<long long>(bs.dim)}});
  }
  dj["layout"] = std::move(layout);
  OJson rops = OJson::array();
  for (const CMat& r : dil.r) rops.push_back(spd::matrix_json(r));
  dj["r"] = std::move(rops);
  dj["u"] = spd::matrix_json(dil.u);
  doc["dilation"] = std::move(dj);

  const bool pass = steps.pass && mom.pass && iso_any && cm.pass;
  doc["pass"] = pass;

  std::vector<std::string> footer;
  footer.push_back("dilate: " + pass_word(pass));
  footer.push_back("step identities: " + pass_word(steps.pass) +
                   (steps.first_failure.empty()
                        ? std::string()
                        : " (first failure: " + steps.first_failure + ")"));
  footer.push_back("moments (degree " + std::to_string(degree) +
                   "): " + pass_word(mom.pass));
  footer.push_back("isometric: " + iso.adjudication);
  footer.push_back("coisometry: " + pass_word(cm.pass));
  return emit(doc, footer, job, pass);
}

int run_verify_paper(const Job& job) {
  spd::VerifyOptions o;
  o.seed = job.seed;
  o.estimate_samples = job.samples;
  o.trunc_past = job.trunc_past;
  o.trunc_future = job.trunc_future;
  const spd::VerifyPaperReport rep = spd::verify_paper_report(o);

  std::string text = rep.text;
  // Footer derived from the parsed summary so the two never drift.
  const nlohmann::json doc = nlohmann::json::parse(rep.text);
  text += "# verify-paper seed=" + std::to_string(job.seed) + "\n";
  for (const nlohmann::json& row : doc["summary"]["table"])
    text += "# " + row["section"].get<std::string>() + ": " +
            pass_word(row["pass"].get<bool>()) + "\n";
  text += "# overall: " + pass_word(rep.pass) + " (" +
          std::to_string(doc["summary"]["sections_passed"].get<int>()) + "/" +
          std::to_string(doc["summary"]["sections_total"].get<int>()) +
          " sections)\n";

  std::fputs(text.c_str(), stdout);
  if (!job.out.empty()) {
    std::ofstream out(job.out, std::ios::binary);
    if (!out) throw std::runtime_error("input: cannot write " + job.out);
    out << text;
  }
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Job job;
  CLI::App app{
      "Certificate toolkit for symmetrized-polydisc contractions: membership "
      "oracles, fundamental operators, truncated dilations, model checks."};
  app.require_subcommand(1);

  CLI::App* point = app.add_subcommand(
      "check-point", "Cross-check scalar membership oracles on one point");
  point->add_option("input", job.input, "Point JSON file, or - for stdin")
      ->required();
  add_common_flags(point, &job);

  CLI::App* tuple = app.add_subcommand(
      "check-tuple", "Run the contraction battery on one operator tuple");
  tuple->add_option("input", job.input, "Tuple JSON file, or - for stdin")
      ->required();
  add_common_flags(tuple, &job);

  CLI::App* fund = app.add_subcommand(
      "fundamental", "Solve the fundamental equations and emit the operators");
  fund->add_option("input", job.input, "Tuple JSON file, or - for stdin")
      ->required();
  add_common_flags(fund, &job);

  CLI::App* dilate = app.add_subcommand(
      "dilate", "Build and verify the truncated dilations of one tuple");
  dilate->add_option("input", job.input, "Tuple JSON file, or - for stdin")
      ->required();
  add_common_flags(dilate, &job);

  CLI::App* paper = app.add_subcommand(
      "verify-paper", "One-shot verification battery over every module");
  add_common_flags(paper, &job);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    apply_env_seed(job);
    if (app.got_subcommand(point)) {
      job.command = "check-point";
      return run_check_point(job);
    }
    if (app.got_subcommand(tuple)) {
      job.command = "check-tuple";
      return run_check_tuple(job, false);
    }
    if (app.got_subcommand(fund)) {
      job.command = "fundamental";
      return run_check_tuple(job, true);
    }
    if (app.got_subcommand(dilate)) {
      job.command = "dilate";
      return run_dilate(job);
    }
    job.command = "verify-paper";
    return run_verify_paper(job);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
