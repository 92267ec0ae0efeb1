#include "quasibasis/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "quasibasis/analysis.hpp"
#include "quasibasis/born_rep.hpp"
#include "quasibasis/constructions.hpp"
#include "quasibasis/io.hpp"
#include "quasibasis/wigner_transform.hpp"

namespace qb::cli {
namespace {

using io::json;

struct Options {
  double tol = -1.0;  // negative: module defaults

  std::string kind;
  int d = 0;
  std::vector<int> primes;
  int n = 0;
  std::string fiducial;
  std::string in;
  std::string out;
  std::string wigner;
  std::string state;
  std::string basis;
  std::string povm;
  std::string csv;
  std::string mode = "probs";
  std::string format = "json";
  std::string variant = "mic";
  std::vector<double> ts;
  bool shifted = false;
  bool area = false;
  int samples = 0;
  std::uint64_t seed = 0;
};

double tol_or(const Options& o, double fallback) { return o.tol >= 0.0 ? o.tol : fallback; }

// Verification failures are collected, not thrown.
struct Report {
  json payload = json::object();
  json diagnostics = json::array();
  bool failed = false;

  void residual(const std::string& name, double value) { diagnostics.push_back({{"name", name}, {"value", value}}); }

  bool clause(const std::string& name, double value, double tol) {
    const bool pass = std::isfinite(value) && value <= tol;
    diagnostics.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", pass}});
    failed = failed || !pass;
    return pass;
  }
};

json class_to_json(const BasisClass& c) {
  json failures = json::array();
  for (const auto& f : c.failures) failures.push_back({{"name", f.name}, {"value", f.value}});
  return {{"summary", c.summary()},
          {"measure_basis", c.is_measure_basis},
          {"mic", c.is_mic},
          {"wigner", c.is_wigner},
          {"unbiased", c.is_unbiased},
          {"rank1", c.is_rank1},
          {"min_eigenvalue", c.min_eigenvalue},
          {"sum_residual", c.sum_residual},
          {"gram_condition", c.gram_condition},
          {"max_offdiag_gram", c.max_offdiag_gram},
          {"max_bias_deviation", c.max_bias_deviation},
          {"failures", std::move(failures)}};
}

MeasureBasis load_basis(const std::string& path, const Options& o) {
  return io::basis_from_json(io::read_json_file(path), tol_or(o, kDefaultTol));
}

// Writes the basis to --out when given, otherwise embeds it in the payload.
void emit_basis(const MeasureBasis& basis, const Options& o, Report& r) {
  const BasisClass cls = classify(basis, tol_or(o, kDefaultTol));
  r.payload["label"] = basis.label();
  r.payload["dimension"] = basis.dim();
  r.payload["size"] = basis.size();
  r.payload["summary"] = cls.summary();
  r.payload["classification"] = class_to_json(cls);
  if (!o.out.empty()) {
    io::write_json_file(o.out, io::basis_to_json(basis));
    r.payload["out"] = o.out;
  } else {
    r.payload["basis"] = io::basis_to_json(basis);
  }
}

[[noreturn]] void usage(const std::string& what) { throw qb::Error(ErrorKind::InvalidArgument, what); }

void require(bool cond, const std::string& what) {
  if (!cond) usage(what);
}

MeasureBasis construct_basis(const Options& o) {
  if (o.kind == "sic") {
    if (!o.fiducial.empty()) return sic_from_fiducial(io::fiducial_from_json(io::read_json_file(o.fiducial)),
                                                      tol_or(o, kDefaultTol));
    require(o.d == 2 || o.d == 3, "construct sic: --d must be 2 or 3 (or pass --fiducial)");
    return builtin_sic(o.d);
  }
  if (o.kind == "wootters") {
    if (!o.primes.empty()) return composite_wootters(o.primes);
    require(o.d >= 2, "construct wootters: --d or --primes is required");
    if (is_prime(o.d)) return wootters_wigner(o.d);
    const auto factors = prime_factors(o.d);
    return composite_wootters(factors);
  }
  if (o.kind == "tensorhedron") {
    require(o.n >= 1, "construct tensorhedron: --n must be at least 1");
    return tensorhedron(o.n);
  }
  if (o.kind == "collinear") {
    require(!o.in.empty(), "construct collinear: --in is required");
    require(o.ts.size() == 1, "construct collinear: exactly one --t is required");
    return collinear(load_basis(o.in, o), o.ts.front());
  }
  // random
  require(o.d >= 2 && o.d <= 8, "construct random: --d must be in [2, 8]");
  if (o.variant == "mic") return random_mic(o.d, o.seed);
  if (o.variant == "unbiased-mic") return random_unbiased_mic(o.d, o.seed);
  if (o.variant == "unbiased-wigner") return random_unbiased_wigner(o.d, o.seed);
  usage("construct random: unknown --variant " + o.variant);
}

void cmd_construct(const Options& o, Report& r) {
  const MeasureBasis basis = construct_basis(o);
  r.payload["kind"] = o.kind;
  if (o.kind == "collinear") {
    const auto range = mic_t_range(load_basis(o.in, o));
    r.payload["t"] = o.ts.front();
    r.payload["mic_t_range"] = {range.t_min, range.t_max};
  }
  emit_basis(basis, o, r);
}

void cmd_pw(const Options& o, Report& r) {
  require(!o.in.empty(), "pw: --in is required");
  const MeasureBasis input = load_basis(o.in, o);
  const PWResult pw = principal_wigner(input);
  r.residual("cross_error", pw.cross_error);
  r.residual("bias_drift", (bias(pw.basis) - bias(input)).cwiseAbs().maxCoeff());
  emit_basis(o.shifted ? shifted(pw.basis, tol_or(o, kDefaultTol)) : pw.basis, o, r);
}

double max_elementwise(const MeasureBasis& a, const MeasureBasis& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, max_abs_diff(a[i], b[i]));
  return out;
}

void verify_theorem1(const Options& o, Report& r) {
  const double tol = tol_or(o, 1e-9);
  const MeasureBasis mic = load_basis(o.in, o);
  const MeasureBasis pw = principal_wigner(mic).basis;
  const MeasureBasis spw = shifted(pw);
  const auto to_pw = distance_report(mic, pw, tol);
  const auto to_spw = distance_report(mic, spw, tol);
  r.payload["lower_bound"] = to_pw.lower_bound;
  r.payload["upper_bound"] = to_pw.upper_bound;
  r.payload["distance_pw"] = to_pw.distance;
  r.payload["distance_spw"] = to_spw.distance;
  r.payload["frame_spectrum"] = io::vector_to_json(to_pw.spectrum);
  r.clause("pw_attains_lower", std::abs(to_pw.distance - to_pw.lower_bound), tol);
  r.clause("spw_attains_upper", std::abs(to_spw.distance - to_spw.upper_bound), tol);
  if (!o.wigner.empty()) {
    const MeasureBasis w = load_basis(o.wigner, o);
    const auto rep = distance_report(mic, w, tol);
    r.payload["distance_wigner"] = rep.distance;
    r.clause("wigner_above_lower", std::max(0.0, rep.lower_bound - rep.distance), tol);
    r.clause("wigner_below_upper", std::max(0.0, rep.distance - rep.upper_bound), tol);
  }
}

void verify_theorem2(const Options& o, Report& r) {
  const double tol = tol_or(o, 1e-9);
  const MeasureBasis mic = load_basis(o.in, o);
  const auto rep = distance_bounds(mic);
  const auto sic = sic_bounds(mic.dim());
  r.payload["lower_bound"] = rep.lower_bound;
  r.payload["upper_bound"] = rep.upper_bound;
  r.payload["sic_lower"] = sic.lower;
  r.payload["sic_upper"] = sic.upper;
  r.payload["saturated_lower"] = std::abs(rep.lower_bound - sic.lower) <= tol;
  r.payload["saturated_upper"] = std::abs(rep.upper_bound - sic.upper) <= tol;
  r.clause("lower_not_below_sic", std::max(0.0, sic.lower - rep.lower_bound), tol);
  r.clause("upper_not_above_sic", std::max(0.0, rep.upper_bound - sic.upper), tol);
}

std::string t_name(double t) {
  std::ostringstream os;
  os << "t=" << t;
  return os.str();
}

void verify_collinear(const Options& o, Report& r) {
  const double tol = tol_or(o, kEquivalenceTol);
  require(!o.ts.empty(), "verify collinear: --t is required");
  const MeasureBasis base = load_basis(o.in, o);
  const MeasureBasis pw = principal_wigner(base).basis;
  const MeasureBasis spw = shifted(pw);
  const auto range = mic_t_range(base);
  r.payload["mic_t_range"] = {range.t_min, range.t_max};

  const int d = base.dim();
  const RMatrix phi = born_matrix(base).phi();
  const RMatrix root = sqrt_born(base);
  const RMatrix aj = bias_matrix(base) * RMatrix::Ones(phi.rows(), phi.cols()) / d;

  json cases = json::array();
  for (double t : o.ts) {
    require(t != 0.0, "verify collinear: t = 0 is not allowed");
    const MeasureBasis lt = collinear(base, t);
    const MeasureBasis pw_t = principal_wigner(lt).basis;
    const std::string name = t_name(t);
    const double dev = max_elementwise(pw_t, t > 0 ? pw : spw);
    r.clause(name + (t > 0 ? " pw_equal" : " shifted_equal"), dev, tol);

    const RMatrix phi_expected = phi / (t * t) + (1.0 - 1.0 / (t * t)) * aj;
    const RMatrix root_expected = root / std::abs(t) + (1.0 - 1.0 / std::abs(t)) * aj;
    r.clause(name + " born_matrix", (born_matrix(lt).phi() - phi_expected).cwiseAbs().maxCoeff(), tol);
    r.clause(name + " sqrt_born", (sqrt_born(lt) - root_expected).cwiseAbs().maxCoeff(), tol);
    cases.push_back({{"t", t}, {"summary", classify(lt).summary()}, {"deviation", dev}});
  }
  r.payload["cases"] = std::move(cases);
}

void write_triple_csv(const TripleProducts& gamma, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw qb::Error(ErrorKind::Io, "cannot open " + path + " for writing");
  file << std::setprecision(17) << "j,k,l,re,im\n";
  const std::size_t n = gamma.size();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        const Complex g = gamma(j, k, l);
        file << j << ',' << k << ',' << l << ',' << g.real() << ',' << g.imag() << '\n';
      }
}

void verify_triple(const Options& o, Report& r) {
  const double tol = tol_or(o, 1e-9);
  const MeasureBasis basis = load_basis(o.in, o);
  const BasisClass cls = classify(basis);
  r.payload["summary"] = cls.summary();

  bool is_sic = true;
  try {
    require_sic(basis);
  } catch (const qb::Error&) {
    is_sic = false;
  }
  r.payload["sic"] = is_sic;
  if (is_sic) {
    r.clause("sic_relation_pw", sic_triple_relation_check(basis, 1), tol);
    r.clause("sic_relation_shifted", sic_triple_relation_check(basis, -1), tol);
    return;
  }
  if (!cls.is_wigner) {
    throw qb::Error(ErrorKind::NotWignerBasis, "verify triple: input must be a SIC or a Wigner basis",
                    cls.max_offdiag_gram);
  }
  const auto gamma = triple_products(basis);
  if (!o.csv.empty()) write_triple_csv(gamma, o.csv);
  RVector traces = bias(basis);
  r.clause("cyclic", gamma.cyclic_residual(), tol);
  r.clause("conjugation", gamma.conjugation_residual(), tol);
  r.clause("sum", gamma.sum_residual(traces), tol);
  if (o.area) {
    const auto check = area_check(basis, tol);
    r.payload["area_mismatches"] = check.mismatches.size();
    r.clause("area_phase", check.max_residual, tol);
  }
}

void verify_negativity(const Options& o, Report& r) {
  const double tol = tol_or(o, 1e-9);
  const MeasureBasis basis = load_basis(o.in, o);
  const double ceiling = ceiling_negativity(basis);
  r.payload["ceiling_negativity"] = ceiling;
  if (o.samples > 0) {
    const double sampled = sampled_ceiling_negativity(basis, o.samples, o.seed);
    r.payload["sampled"] = sampled;
    r.payload["samples"] = o.samples;
    r.clause("sampled_not_above_ceiling", std::max(0.0, sampled - ceiling), tol);
  }
}

void cmd_verify(const Options& o, Report& r) {
  require(!o.in.empty(), "verify: --in is required");
  r.payload["suite"] = o.kind;
  if (o.kind == "theorem1") return verify_theorem1(o, r);
  if (o.kind == "theorem2") return verify_theorem2(o, r);
  if (o.kind == "collinear") return verify_collinear(o, r);
  if (o.kind == "triple") return verify_triple(o, r);
  return verify_negativity(o, r);
}

std::vector<HermitianOperator> load_povm(const std::string& path, int d) {
  if (path.empty()) return computational_povm(d);
  auto list = io::operator_list_from_json(io::read_json_file(path));
  if (list.dim != d) throw qb::Error(ErrorKind::DimensionMismatch, "represent: POVM and basis dimensions differ");
  return std::move(list.elements);
}

struct Csv {
  std::ostringstream text;
  Csv() { text << std::setprecision(17); }
};

void cmd_represent(const Options& o, Report& r, Csv& csv) {
  require(!o.state.empty() && !o.basis.empty(), "represent: --state and --basis are required");
  const MeasureBasis basis = load_basis(o.basis, o);
  const HermitianOperator rho = io::state_from_json(io::read_json_file(o.state));
  if (rho.dim() != basis.dim()) {
    throw qb::Error(ErrorKind::DimensionMismatch, "represent: state and basis dimensions differ");
  }
  r.payload["mode"] = o.mode;
  r.payload["basis_summary"] = classify(basis).summary();

  if (o.mode == "split") {
    const auto povm = load_povm(o.povm, basis.dim());
    const GaugeSplit split = gauge_split(povm, basis, rho);
    r.payload["left"] = io::real_matrix_to_json(split.left);
    r.payload["right"] = io::vector_to_json(split.right.values());
    r.payload["negativity"] = split.right.negativity();
    r.residual("reconstruction_error", split.reconstruction_error);
    r.residual("row_sum_residual", split.row_sum_residual);
    r.residual("column_sum_residual", split.column_sum_residual);
    csv.text << "factor,row,col,value\n";
    for (Eigen::Index i = 0; i < split.left.rows(); ++i)
      for (Eigen::Index j = 0; j < split.left.cols(); ++j)
        csv.text << "left," << i << ',' << j << ',' << split.left(i, j) << '\n';
    for (Eigen::Index i = 0; i < split.right.values().size(); ++i)
      csv.text << "right," << i << ",0," << split.right.values()[i] << '\n';
    return;
  }

  RVector values = state_to_probs(rho, basis);
  double magnitude = values.lpNorm<1>();
  if (o.mode == "quasi") {
    const RMatrix root = sqrt_born(basis);
    magnitude = (root.cwiseAbs() * values.cwiseAbs()).sum();
    values = root * values;
  }
  const auto dist = QuasiDistribution::create(values, magnitude);
  r.payload["values"] = io::vector_to_json(dist.values());
  r.payload["sum"] = dist.sum();
  r.payload["negativity"] = dist.negativity();
  csv.text << "index,value\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) csv.text << i << ',' << values[i] << '\n';
}

json result_json(const std::string& command, const std::string& status, Report& r) {
  return {{"command", command}, {"status", status}, {"payload", std::move(r.payload)},
          {"diagnostics", std::move(r.diagnostics)}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Measure bases, Wigner bases and principal-Wigner orthogonalization", "quasibasis"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", o.tol, "Tolerance override for validation and verification clauses")
      ->check(CLI::NonNegativeNumber);

  auto* construct = app.add_subcommand("construct", "Build a basis and write it as JSON");
  construct->add_option("kind", o.kind, "sic|wootters|tensorhedron|collinear|random")
      ->required()
      ->check(CLI::IsMember({"sic", "wootters", "tensorhedron", "collinear", "random"}));
  construct->add_option("--d", o.d, "Hilbert-space dimension");
  construct->add_option("--primes", o.primes, "Prime factors for a composite Wootters basis")->delimiter(',');
  construct->add_option("--n", o.n, "Number of qubit factors (tensorhedron)");
  construct->add_option("--fiducial", o.fiducial, "Fiducial JSON for a SIC orbit")->check(CLI::ExistingFile);
  construct->add_option("--in", o.in, "Input basis JSON (collinear)")->check(CLI::ExistingFile);
  construct->add_option("--t", o.ts, "Collinear parameter")->expected(1);
  construct->add_option("--seed", o.seed, "Seed (random)");
  construct->add_option("--variant", o.variant, "mic|unbiased-mic|unbiased-wigner (random)")
      ->check(CLI::IsMember({"mic", "unbiased-mic", "unbiased-wigner"}));
  construct->add_option("--out", o.out, "Output path; omitted embeds the basis in the result");

  auto* pw = app.add_subcommand("pw", "Principal Wigner basis of a measure basis");
  pw->add_option("--in", o.in, "Input basis JSON")->required()->check(CLI::ExistingFile);
  pw->add_flag("--shifted", o.shifted, "Emit the shifted principal Wigner basis");
  pw->add_option("--out", o.out, "Output path; omitted embeds the basis in the result");

  auto* verify = app.add_subcommand("verify", "Check theorem clauses numerically");
  verify->add_option("suite", o.kind, "theorem1|theorem2|collinear|triple|negativity")
      ->required()
      ->check(CLI::IsMember({"theorem1", "theorem2", "collinear", "triple", "negativity"}));
  verify->add_option("--in", o.in, "Input basis JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--wigner", o.wigner, "Wigner basis to place between the bounds (theorem1)")
      ->check(CLI::ExistingFile);
  verify->add_option("--t", o.ts, "Comma-separated collinear parameters")->delimiter(',');
  verify->add_option("--samples", o.samples, "Random pure states for the sampling estimate (negativity)")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", o.seed, "Sampling seed");
  verify->add_option("--csv", o.csv, "Write the triple-product tensor as j,k,l,re,im (triple)");
  verify->add_flag("--area", o.area, "Compare triple-product phases with affine areas (triple)");

  auto* represent = app.add_subcommand("represent", "Probabilities and quasiprobabilities of a state");
  represent->add_option("--state", o.state, "State JSON")->required()->check(CLI::ExistingFile);
  represent->add_option("--basis", o.basis, "Basis JSON")->required()->check(CLI::ExistingFile);
  represent->add_option("--mode", o.mode, "probs|quasi|split")->check(CLI::IsMember({"probs", "quasi", "split"}));
  represent->add_option("--povm", o.povm, "POVM JSON for split mode (default: computational basis)")
      ->check(CLI::ExistingFile);
  represent->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Report report;
  Csv csv;
  try {
    if (command == "construct") cmd_construct(o, report);
    else if (command == "pw") cmd_pw(o, report);
    else if (command == "verify") cmd_verify(o, report);
    else cmd_represent(o, report, csv);
  } catch (const qb::Error& e) {
    Report failed;
    failed.payload = {{"error", to_string(e.kind())}, {"message", e.what()}, {"residual", e.residual()}};
    out << result_json(command, "error", failed).dump(2) << '\n';
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    Report failed;
    failed.payload = {{"error", "internal"}, {"message", e.what()}};
    out << result_json(command, "error", failed).dump(2) << '\n';
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (command == "represent" && o.format == "csv") {
    out << csv.text.str();
    return kExitOk;
  }
  const bool failed = report.failed;
  if (failed) {
    for (const auto& d : report.diagnostics) {
      if (d.contains("pass") && !d["pass"].get<bool>()) {
        err << "failed: " << d["name"].get<std::string>() << " = " << d["value"].dump() << " (tolerance "
            << d["tolerance"].dump() << ")\n";
      }
    }
  }
  out << result_json(command, failed ? "error" : "ok", report).dump(2) << '\n';
  return failed ? kExitVerificationFailed : kExitOk;
}

}  // namespace qb::cli
