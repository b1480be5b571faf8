#include "spd/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spd/combinatorics.hpp"
#include "spd/corpus.hpp"
#include "spd/dilation.hpp"
#include "spd/fundamental_ops.hpp"
#include "spd/linalg_core.hpp"
#include "spd/rng.hpp"
#include "spd/sym_geometry.hpp"

namespace spd {

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // collapse the sign of -0
  char buf[40];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void dump_rec(const OJson& j, std::string& out, int depth) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(d) * 2, ' '); };
  switch (j.type()) {
    case nlohmann::detail::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        dump_rec(it.value(), out, depth + 1);
      }
      out += "\n";
      pad(depth);
      out += "}";
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const OJson& v : j) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        dump_rec(v, out, depth + 1);
      }
      out += "\n";
      pad(depth);
      out += "]";
      return;
    }
    case nlohmann::detail::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        out += fmt_double(v);
      else
        out += nlohmann::json(fmt_double(v)).dump();
      return;
    }
    default:
      out += j.dump();  // string (escaped), integer, boolean, null
      return;
  }
}

double item_residual(const std::vector<CheckItem>& items,
                     const std::string& name) {
  for (const CheckItem& c : items)
    if (c.name == name) return c.residual;
  throw std::logic_error("report item missing: " + name);
}

double require_number(const nlohmann::json& j, const char* where) {
  if (!j.is_number())
    throw std::runtime_error(std::string("input: expected a number in ") +
                             where);
  return j.get<double>();
}

Complex complex_from_json(const nlohmann::json& j, const char* where) {
  if (!j.is_array() || j.size() != 2)
    throw std::runtime_error(std::string("input: expected a [re, im] pair in ") +
                             where);
  return Complex(require_number(j[0], where), require_number(j[1], where));
}

struct Section {
  OJson body;
  bool pass = false;
};

Section section_sign_tables(const VerifyOptions& o) {
  const SignTableReport r = verify_sign_tables(o.sign_table_m);
  OJson b;
  b["m_max"] = o.sign_table_m;
  b["cases_checked"] = r.cases_checked;
  b["checks"] = r.checks;
  b["violation_count"] = static_cast<long long>(r.violations.size());
  OJson v = OJson::array();
  for (std::size_t k = 0; k < r.violations.size() && k < 20; ++k)
    v.push_back(r.violations[k]);
  b["violations"] = std::move(v);
  b["pass"] = r.ok();
  return {std::move(b), r.ok()};
}

Section section_estimates(const VerifyOptions& o) {
  OJson rows = OJson::array();
  bool all = true;
  for (int mp = 3; mp <= 6; ++mp) {
    const EstimateReport er = verify_estimates(
        mp, o.estimate_samples, derive_seed(o.seed, 100 + static_cast<std::uint64_t>(mp)));
    const bool sharp = er.h_sharp_min[3] >= 0.99 && er.g_sharp_min[3] >= 0.99;
    const bool zero = er.zero_row_max <= 1e-12;
    const bool p = er.ok() && sharp && zero;
    all = all && p;
    OJson row;
    row["dimension"] = mp;
    row["samples"] = er.samples;
    row["h_checks"] = er.h_checks;
    row["g_checks"] = er.g_checks;
    row["max_h_ratio"] = er.max_h_ratio;
    row["max_g_ratio"] = er.max_g_ratio;
    row["zero_row_max"] = er.zero_row_max;
    OJson hs = OJson::array(), gs = OJson::array();
    for (int k = 0; k < 4; ++k) {
      hs.push_back(er.h_sharp_min[k]);
      gs.push_back(er.g_sharp_min[k]);
    }
    row["h_sharp_min"] = std::move(hs);
    row["g_sharp_min"] = std::move(gs);
    row["violation_count"] = static_cast<long long>(er.violations.size());
    row["pass"] = p;
    rows.push_back(std::move(row));
  }
  OJson b;
  b["dimensions"] = std::move(rows);
  b["pass"] = all;
  return {std::move(b), all};
}

Section section_membership(const VerifyOptions& o) {
  OJson b;
  bool pass = true;

  OJson agree_rows = OJson::array();
  for (int n = 2; n <= 6; ++n) {
    Rng rng(derive_seed(o.seed, 200 + static_cast<std::uint64_t>(n)));
    int mismatches = 0;
    for (int k = 0; k < o.oracle_points; ++k) {
      const double radius = (k % 2 == 0) ? 0.97 : 1.25;
      CVec z(n);
      for (int p = 0; p < n; ++p) z(p) = random_disc(rng, radius);
      const CVec s = symmetrize(z);
      const bool via_roots = roots_membership(s, 1e-9).in_open();
      const bool via_schur = schur_membership(s, Complex(1.0, 0.0), 1e-9).positive;
      if (via_roots != via_schur) ++mismatches;
    }
    pass = pass && mismatches == 0;
    OJson row;
    row["n"] = n;
    row["points"] = o.oracle_points;
    row["mismatches"] = mismatches;
    agree_rows.push_back(std::move(row));
  }
  b["schur_vs_roots"] = std::move(agree_rows);

  const CounterexamplePoint cp = counterexample_point(4, 2, 1e-3);
  const bool cp_ok = cp.exceeds_n && cp.verdict.in_closed();
  pass = pass && cp_ok;
  OJson cej;
  cej["n"] = 4;
  cej["i"] = 2;
  cej["eps"] = 1e-3;
  cej["coordinate_abs"] = cp.s_i_abs;
  cej["exceeds_n"] = cp.exceeds_n;
  cej["region"] = region_name(cp.verdict.region);
  cej["pass"] = cp_ok;
  b["coordinate_counterexample"] = std::move(cej);

  const std::vector<Complex> alphas = alpha_grid(16);
  OJson pencil_rows = OJson::array();
  for (int n = 2; n <= 5; ++n) {
    Rng rng(derive_seed(o.seed, 300 + static_cast<std::uint64_t>(n)));
    double min_val = 0.0;
    for (int k = 0; k < o.pencil_points; ++k) {
      CVec z(n);
      for (int p = 0; p < n; ++p) z(p) = random_disc(rng);
      const CVec s = symmetrize(z);
      for (int i = 1; i <= n - 1; ++i)
        for (const Complex& a : alphas) {
          const PencilValues pv = scalar_pencils(i, a, s);
          min_val = std::min({min_val, pv.phi1, pv.phi2});
        }
    }
    const bool p = min_val >= -1e-10;
    pass = pass && p;
    OJson row;
    row["n"] = n;
    row["points"] = o.pencil_points;
    row["min_pencil_value"] = min_val;
    row["pass"] = p;
    pencil_rows.push_back(std::move(row));
  }
  b["scalar_pencils"] = std::move(pencil_rows);

  b["pass"] = pass;
  return {std::move(b), pass};
}

Section section_fundamental(const VerifyOptions& o) {
  OJson rows = OJson::array();
  bool all = true;
  double worst_residual = 0.0;
  for (int idx = 0; idx < o.fundamental_instances; ++idx) {
    const int n = 2 + idx % 4;
    const int dim = 4 + idx % 3;
    const OperatorTuple t = normal_symmetrization_instance(
        n, dim, derive_seed(o.seed, 500 + static_cast<std::uint64_t>(idx)));
    const FundamentalOperators e = solve_fundamental(t, Side::Direct);
    const FundamentalOperators f = solve_fundamental(t, Side::Adjoint);
    const UniquenessReport uq = uniqueness_check(t);
    const RadiusReport rb = radius_bound_check(e, n);
    std::vector<CMat> family;
    for (int i = 1; i <= n - 1; ++i) family.push_back(e.compressed(i));
    const Lemma43Report l43 = lemma43_check(family);
    const Lemma72Report l72 = lemma72_suite(t, e, f);
    const CommutationGates gates = prop66_conditions(e);

    double res = 0.0;
    for (double r : e.residuals) res = std::max(res, r);
    for (double r : f.residuals) res = std::max(res, r);
    double off = 0.0;
    for (double r : e.off_defect) off = std::max(off, r);
    for (double r : f.off_defect) off = std::max(off, r);
    worst_residual = std::max(worst_residual, res);

    bool l43_items = true;
    for (const CheckItem& c : l43.items) l43_items = l43_items && c.pass;
    const bool p = e.within_tol && f.within_tol && uq.pass && rb.pass &&
                   l43.agree && l43_items && l72.pass && gates.pass;
    all = all && p;

    OJson row;
    row["n"] = n;
    row["dim"] = dim;
    row["defect_rank"] = e.rank;
    row["solve_residual"] = res;
    row["off_defect"] = off;
    row["uniqueness_deviation"] = uq.max_deviation;
    row["radius_excess"] = rb.max_excess;
    row["equivalence_agree"] = l43.agree;
    row["identity_suite_pass"] = l72.pass;
    row["commutation_gates_pass"] = gates.pass;
    row["pass"] = p;
    rows.push_back(std::move(row));
  }
  OJson b;
  b["instances"] = std::move(rows);
  b["worst_solve_residual"] = worst_residual;
  b["pass"] = all;
  return {std::move(b), all};
}

Section section_unitary(const VerifyOptions& o) {
  const std::vector<Complex> betas = beta_grid(16);
  OJson rows = OJson::array();
  bool all = true;
  for (int idx = 0; idx < o.unitary_instances; ++idx) {
    const int n = 2 + idx % 4;
    const int dim = 3 + idx % 3;
    const OperatorTuple t = gamma_unitary_from_unitaries(commuting_unitary_family(
        n, dim, derive_seed(o.seed, 600 + static_cast<std::uint64_t>(idx))));
    const ClassifierVerdict v = classify_unitary(t);

    double alg = 0.0;
    for (int i = 1; i <= n - 1; ++i) {
      alg = std::max(alg, op_norm(t.op(i) - t.op(n - i).adjoint() * t.op(n)));
      alg = std::max(alg, op_norm(t.op(i).adjoint() * t.op(i) -
                                  t.op(n - i).adjoint() * t.op(n - i)));
    }
    double pencil_max = 0.0;
    for (int i = 1; i <= n - 1; ++i)
      for (const Complex& beta : betas) {
        const PencilEvaluation pe = op_pencil(i, beta, t);
        pencil_max = std::max({pencil_max, op_norm(pe.phi1), op_norm(pe.phi2)});
      }

    const bool p = v.cls == TupleClass::GammaUnitary && alg <= 1e-10 &&
                   pencil_max <= 1e-10;
    all = all && p;
    OJson row;
    row["n"] = n;
    row["dim"] = dim;
    row["class"] = tuple_class_name(v.cls);
    row["pairing_identity"] = alg;
    row["circle_pencil_max"] = pencil_max;
    row["pass"] = p;
    rows.push_back(std::move(row));
  }
  OJson b;
  b["instances"] = std::move(rows);
  b["pass"] = all;
  return {std::move(b), all};
}

Section section_dilation(const VerifyOptions& o) {
  OJson rows = OJson::array();
  bool all = true;
  for (int idx = 0; idx < o.dilation_instances; ++idx) {
    const bool poly = idx == o.dilation_instances - 1;
    const OperatorTuple t =
        poly ? polynomial_pair_instance(5, derive_seed(o.seed, 750))
             : normal_symmetrization_instance(
                   2, 4 + idx % 2,
                   derive_seed(o.seed, 700 + static_cast<std::uint64_t>(idx)));
    const FundamentalOperators e = solve_fundamental(t, Side::Direct);
    const FundamentalOperators f = solve_fundamental(t, Side::Adjoint);
    const StepIdentityReport steps = verify_step_identities(t, e, f);
    const TruncatedDilation dil =
        build_unitary_dilation(t, e, f, o.trunc_past, o.trunc_future);
    const int degree = std::min(4, dil.safe_degree);
    const MomentReport mom = verify_dilation_moments(t, dil, degree);
    const IsometricDilation iso = build_isometric_dilation(t, 6);
    const bool iso_pass = iso.substituted.pass || iso.displayed.pass;

    const bool p = steps.pass && mom.pass && iso_pass;
    all = all && p;
    OJson row;
    row["kind"] = poly ? "pair-polynomial" : "pair-normal";
    row["dim"] = static_cast<long long>(t.dim());
    row["steps_pass"] = steps.pass;
    row["moment_degree"] = degree;
    row["moment_residual"] = item_residual(mom.items, "moment_compression");
    row["u_unitary"] = item_residual(mom.items, "u_unitary");
    row["isometric_adjudication"] = iso.adjudication;
    row["pass"] = p;
    rows.push_back(std::move(row));
  }

  const OperatorTuple gp = gate_pass_instance(5, derive_seed(o.seed, 760));
  const FundamentalOperators gpe = solve_fundamental(gp, Side::Direct);
  const FundamentalOperators gpf = solve_fundamental(gp, Side::Adjoint);
  const StepIdentityReport gp_steps = verify_step_identities(gp, gpe, gpf);
  const TruncatedDilation gp_dil = build_unitary_dilation(gp, gpe, gpf, 5, 5);
  const MomentReport gp_mom = verify_dilation_moments(gp, gp_dil, 3);
  const bool gp_ok = gp_steps.pass && gp_steps.gates_pass && gp_mom.pass;

  const OperatorTuple gf = gate_fail_instance(4, derive_seed(o.seed, 761));
  const FundamentalOperators gfe = solve_fundamental(gf, Side::Direct);
  const FundamentalOperators gff = solve_fundamental(gf, Side::Adjoint);
  const StepIdentityReport gf_steps = verify_step_identities(gf, gfe, gff);
  const bool gf_ok = !gf_steps.gates_pass && !gf_steps.first_failure.empty();

  all = all && gp_ok && gf_ok;
  OJson gates;
  gates["gate_pass_instance"] = OJson{{"n", 3},
                                      {"steps_pass", gp_steps.pass},
                                      {"moments_pass", gp_mom.pass},
                                      {"pass", gp_ok}};
  gates["gate_fail_instance"] =
      OJson{{"n", 3},
            {"gates_pass", gf_steps.gates_pass},
            {"first_failure", gf_steps.first_failure},
            {"pass", gf_ok}};

  OJson b;
  b["instances"] = std::move(rows);
  b["trunc"] = OJson::array({o.trunc_past, o.trunc_future});
  b["gate_demonstrations"] = std::move(gates);
  b["pass"] = all;
  return {std::move(b), all};
}

Section section_models(const VerifyOptions& o) {
  bool all = true;

  int good_ok = 0, bad_ok = 0;
  for (int k = 0; k < o.model_fibres; ++k) {
    const ModelOperators mg = pure_isometry_model(
        commuting_fibre_pair(derive_seed(o.seed, 800 + static_cast<std::uint64_t>(k))),
        2, 4);
    if (mg.conditions_hold && mg.multipliers_commute && mg.agree) ++good_ok;
    const ModelOperators mb = pure_isometry_model(
        clashing_fibre_pair(derive_seed(o.seed, 900 + static_cast<std::uint64_t>(k))),
        2, 4);
    if (!mb.conditions_hold && mb.agree) ++bad_ok;
  }
  const bool fibres_ok = good_ok == o.model_fibres && bad_ok == o.model_fibres;
  all = all && fibres_ok;

  OJson co_rows = OJson::array();
  for (int idx = 0; idx < 4; ++idx) {
    const OperatorTuple t = normal_symmetrization_instance(
        2, 4 + idx % 2, derive_seed(o.seed, 700 + static_cast<std::uint64_t>(idx)));
    const FundamentalOperators f = solve_fundamental(t, Side::Adjoint);
    const CoisometryModel cm = build_coisometry_model(t, f, 6);
    const bool p = cm.pass && cm.defect_dim_v == cm.defect_dim_final;
    all = all && p;
    OJson row;
    row["dim"] = static_cast<long long>(t.dim());
    row["defect_dim_truncated"] = cm.defect_dim_v;
    row["defect_dim_expected"] = cm.defect_dim_final;
    row["pass"] = p;
    co_rows.push_back(std::move(row));
  }

  const OperatorTuple u = gamma_unitary_from_unitaries(
      commuting_unitary_family(2, 3, derive_seed(o.seed, 950)));
  CMat e1(1, 1);
  e1(0, 0) = Complex(0.4, 0.3);
  const ModelOperators pure = pure_isometry_model({e1}, 1, 5);
  const WoldReport wr = wold_split_check(u, pure);
  const bool wold_ok = wr.pass && wr.unitary_verdict == "gamma-unitary";
  all = all && wold_ok;

  OJson b;
  b["fibre_pairs"] = OJson{{"count", o.model_fibres},
                           {"commuting_verified", good_ok},
                           {"clashing_verified", bad_ok},
                           {"pass", fibres_ok}};
  b["coisometry"] = std::move(co_rows);
  b["wold_split"] = OJson{{"unitary_verdict", wr.unitary_verdict},
                          {"pass", wold_ok}};
  b["pass"] = all;
  return {std::move(b), all};
}

}  // namespace

std::string canonical_dump(const OJson& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += "\n";
  return out;
}

OJson check_item_json(const CheckItem& c) {
  OJson j;
  j["name"] = c.name;
  j["residual"] = c.residual;
  j["tol"] = c.tol;
  j["pass"] = c.pass;
  return j;
}

OJson check_items_json(const std::vector<CheckItem>& cs) {
  OJson a = OJson::array();
  for (const CheckItem& c : cs) a.push_back(check_item_json(c));
  return a;
}

OJson suite_json(const SuiteReport& r) {
  OJson j;
  j["checks"] = check_items_json(r.checks);
  j["min_pencil_eig"] = r.min_pencil_eig;
  j["max_commutator"] = r.max_commutator;
  j["note"] = r.note;
  j["pass"] = r.pass;
  return j;
}

OJson matrix_json(const CMat& m) {
  OJson rows = OJson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    OJson row = OJson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(OJson::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw std::runtime_error("input: a matrix must be a nonempty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const nlohmann::json& first = j[0];
  if (!first.is_array() || first.empty())
    throw std::runtime_error(
        "input: a matrix row must be a nonempty array of [re, im] pairs");
  const Eigen::Index cols = static_cast<Eigen::Index>(first.size());
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const nlohmann::json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::runtime_error("input: ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], "matrix");
  }
  return m;
}

OJson tuple_json(const OperatorTuple& t) {
  OJson j;
  j["n"] = t.n();
  j["dim"] = static_cast<long long>(t.dim());
  OJson ops = OJson::array();
  for (int i = 1; i <= t.n(); ++i) ops.push_back(matrix_json(t.op(i)));
  j["ops"] = std::move(ops);
  return j;
}

OperatorTuple tuple_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ops") || !j["ops"].is_array() ||
      j["ops"].empty())
    throw std::runtime_error(
        "input: a tuple document needs a nonempty \"ops\" array");
  std::vector<CMat> ops;
  for (const nlohmann::json& m : j["ops"]) ops.push_back(matrix_from_json(m));
  const Eigen::Index dim = ops.front().rows();
  for (const CMat& m : ops)
    if (m.rows() != dim || m.cols() != dim)
      throw std::runtime_error(
          "input: every op must be square on one common dimension");
  if (j.contains("n") &&
      (!j["n"].is_number_integer() ||
       j["n"].get<long long>() != static_cast<long long>(ops.size())))
    throw std::runtime_error("input: \"n\" disagrees with the ops count");
  if (j.contains("dim") &&
      (!j["dim"].is_number_integer() ||
       j["dim"].get<long long>() != static_cast<long long>(dim)))
    throw std::runtime_error("input: \"dim\" disagrees with the ops shape");
  return make_tuple(std::move(ops));
}

OJson point_json(const CVec& s) {
  OJson arr = OJson::array();
  for (Eigen::Index k = 0; k < s.size(); ++k)
    arr.push_back(OJson::array({s(k).real(), s(k).imag()}));
  OJson j;
  j["s"] = std::move(arr);
  return j;
}

CVec point_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("s") || !j["s"].is_array() ||
      j["s"].empty())
    throw std::runtime_error(
        "input: a point document needs a nonempty \"s\" array");
  const nlohmann::json& arr = j["s"];
  CVec s(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k)
    s(static_cast<Eigen::Index>(k)) = complex_from_json(arr[k], "point");
  return s;
}

VerifyPaperReport verify_paper_report(const VerifyOptions& opt) {
  OJson doc;
  doc["report"] = "verify-paper";
  doc["seed"] = opt.seed;
  OJson oj;
  oj["sign_table_m"] = opt.sign_table_m;
  oj["estimate_samples"] = opt.estimate_samples;
  oj["oracle_points"] = opt.oracle_points;
  oj["pencil_points"] = opt.pencil_points;
  oj["fundamental_instances"] = opt.fundamental_instances;
  oj["unitary_instances"] = opt.unitary_instances;
  oj["dilation_instances"] = opt.dilation_instances;
  oj["model_fibres"] = opt.model_fibres;
  oj["trunc"] = OJson::array({opt.trunc_past, opt.trunc_future});
  doc["options"] = std::move(oj);

  struct Named {
    const char* name;
    Section sec;
  };
  std::vector<Named> sections;
  sections.push_back({"sign_tables", section_sign_tables(opt)});
  sections.push_back({"sharp_estimates", section_estimates(opt)});
  sections.push_back({"membership_oracles", section_membership(opt)});
  sections.push_back({"fundamental_corpus", section_fundamental(opt)});
  sections.push_back({"unitary_classifiers", section_unitary(opt)});
  sections.push_back({"dilation_corpus", section_dilation(opt)});
  sections.push_back({"models", section_models(opt)});

  OJson secj;
  OJson table = OJson::array();
  bool all = true;
  int passed = 0;
  for (Named& s : sections) {
    all = all && s.sec.pass;
    passed += s.sec.pass ? 1 : 0;
    secj[s.name] = std::move(s.sec.body);
    table.push_back(OJson{{"section", s.name}, {"pass", s.sec.pass}});
  }
  doc["sections"] = std::move(secj);
  doc["summary"] = OJson{{"table", std::move(table)},
                         {"sections_passed", passed},
                         {"sections_total", static_cast<int>(sections.size())},
                         {"pass", all}};

  VerifyPaperReport rep;
  rep.text = canonical_dump(doc);
  rep.pass = all;
  return rep;
}

}  // namespace spd
