#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "spd/operator_pencils.hpp"
#include "spd/operator_tuple.hpp"
#include "spd/types.hpp"

namespace spd {

using OJson = nlohmann::ordered_json;

// Every floating-point number a report emits goes through this: shortest
// text that parses back to the same double, negative zero normalized. Equal
// values always render identically and a serialize-parse round trip is exact,
// so re-reading a report never perturbs defect ranks or residuals.
std::string fmt_double(double x);

// Deterministic pretty-printer: objects keep insertion order, doubles render
// through fmt_double, two-space indent. Structurally equal documents produce
// byte-identical text.
std::string canonical_dump(const OJson& j);

OJson check_item_json(const CheckItem& c);
OJson check_items_json(const std::vector<CheckItem>& cs);
OJson suite_json(const SuiteReport& r);

// Matrices travel as row-major nested arrays of [re, im] pairs.
OJson matrix_json(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j);

// {"n": int, "dim": int, "ops": [matrix, ...]} with ops listed S_1..S_n.
// Parsing throws std::runtime_error with a usage-grade message on any shape
// or type defect.
OJson tuple_json(const OperatorTuple& t);
OperatorTuple tuple_from_json(const nlohmann::json& j);

// {"s": [[re, im], ...]}
OJson point_json(const CVec& s);
CVec point_from_json(const nlohmann::json& j);

struct VerifyOptions {
  std::uint64_t seed = 1729;
  int sign_table_m = 12;
  long long estimate_samples = 100000;
  int oracle_points = 200;  // membership cross-check sample size per n
  int pencil_points = 200;  // scalar-pencil sample size per n
  int fundamental_instances = 10;
  int unitary_instances = 10;
  int dilation_instances = 6;
  int model_fibres = 50;
  int trunc_past = 6;
  int trunc_future = 6;
};

struct VerifyPaperReport {
  std::string text;  // canonical JSON document, newline-terminated
  bool pass = false;
};

// One-shot verification battery behind the `verify-paper` subcommand: the
// exhaustive sign tables, the sampled sharp estimates, the membership-oracle
// cross-checks, and the operator corpora (fundamental solver, unitary
// classifier, truncated dilations, multiplier and coisometry models). The
// output depends only on the options; nothing is read from the clock or the
// environment, so identical options give byte-identical text.
VerifyPaperReport verify_paper_report(const VerifyOptions& opt = {});

}  // namespace spd
