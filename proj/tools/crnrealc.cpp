// crnrealc: compile real numbers to integral CRNs, simulate, verify, analyze.
//
// Exit codes: 0 ok, 1 I/O, 2 bad spec or input, 3 integration failure,
// 4 failed verification condition, 5 inconclusive or unstable analysis.

#include "crnreal/crnreal.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace crnreal;

namespace {

enum Exit { ok = 0, io_error = 1, spec_error = 2, integration_error = 3, verify_failed = 4, not_stable = 5 };

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw Failure{code, message}; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(io_error, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Temp file in the target directory, then rename over the destination.
void write_atomic(const fs::path& p, const std::string& contents) {
  const fs::path tmp = p.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(io_error, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) fail(io_error, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(io_error, "cannot move output into place at " + p.string());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// "n/d" exactly, otherwise a decimal literal.
double parse_number(const std::string& text, const char* what) {
  try {
    return to_double(parse_rational(text));
  } catch (const std::invalid_argument&) {
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  fail(spec_error, std::string("malformed ") + what + " '" + text + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ParsedCrn load_crn(const fs::path& p) {
  const std::string text = read_file(p);
  try {
    return parse_crn(text);
  } catch (const ParseError& e) {
    fail(spec_error, p.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    fail(spec_error, p.string() + ": " + e.what());
  }
}

struct IntegrationFlags {
  std::string t_end;
  std::string rel_tol = "1e-10";
  std::string abs_tol = "1e-12";

  IntegratorOptions options() const {
    IntegratorOptions o;
    o.rel_tol = parse_number(rel_tol, "--rel-tol");
    o.abs_tol = parse_number(abs_tol, "--abs-tol");
    if (!(o.rel_tol > 0) || !(o.abs_tol > 0)) fail(spec_error, "tolerances must be positive");
    return o;
  }

  double end() const {
    const double t = parse_number(t_end, "--t-end");
    if (!(t > 0)) fail(spec_error, "--t-end must be positive");
    return t;
  }

  void record(RunManifest& m) const {
    m.parameters["t_end"] = t_end;
    m.parameters["rel_tol"] = rel_tol;
    m.parameters["abs_tol"] = abs_tol;
  }
};

void record_seed(RunManifest& m) {
  if (const char* seed = std::getenv("CRNREALC_SEED")) m.parameters["seed"] = seed;
}

// ---- compile ---------------------------------------------------------------

struct CompileFlags {
  std::optional<std::string> rational, poly, interval, expr;
  bool transcendental = false;
  std::string speedup = "1";
  std::string out;
};

SignedProgram build_program(const CompileFlags& f, RunManifest& m) {
  const int given = f.rational.has_value() + f.poly.has_value() + f.expr.has_value() + f.transcendental;
  if (given != 1) fail(spec_error, "give exactly one of --rational, --poly, --expr, --transcendental");
  if (f.interval && !f.poly) fail(spec_error, "--interval only applies to --poly");
  try {
    if (f.rational) {
      m.inputs["rational"] = *f.rational;
      const Rational r = parse_rational(*f.rational);
      const BigInt n = numerator_of(r);
      SignedProgram p = compile_rational(n < 0 ? BigInt(-n) : n, denominator_of(r));
      if (n < 0) p.sign = -1;
      return p;
    }
    if (f.poly) {
      // Either the polynomial itself or a file holding it.
      std::string text = *f.poly;
      std::error_code ec;
      if (fs::is_regular_file(text, ec)) {
        text = read_file(text);
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
        m.inputs["poly_file"] = fs::path(*f.poly).filename().string();
      }
      m.inputs["poly"] = text;
      const IntPolynomial p = parse_polynomial(text);
      if (!f.interval) {
        m.inputs["interval"] = "smallest positive root";
        return compile_poly_root(p);
      }
      m.inputs["interval"] = *f.interval;
      const auto comma = f.interval->find(',');
      if (comma == std::string::npos) fail(spec_error, "--interval expects lo,hi");
      const Rational lo = parse_rational(f.interval->substr(0, comma));
      const Rational hi = parse_rational(f.interval->substr(comma + 1));
      if (!(lo < hi)) fail(spec_error, "--interval requires lo < hi");
      return compile_algebraic(p, Interval(lo, hi));
    }
    if (f.expr) {
      m.inputs["expr"] = *f.expr;
      return compile_expression(parse_expression(*f.expr));
    }
    m.inputs["transcendental"] = "(e-1+sqrt((e-1)^2+4))/2";
    return transcendental_construction();
  } catch (const std::invalid_argument& e) {
    fail(spec_error, e.what());
  } catch (const std::domain_error& e) {
    fail(spec_error, e.what());
  }
}

int cmd_compile(const CompileFlags& f) {
  RunManifest m;
  m.command = "compile";
  SignedProgram program = build_program(f, m);
  m.parameters["speedup"] = f.speedup;
  record_seed(m);
  if (f.speedup == "auto") {
    try {
      const auto r = auto_speedup(program);
      program = speed_up(program, r.factor);
      std::cout << "speed-up: auto chose " << r.factor << " (fitted gamma " << format_double(r.decay.fitted_gamma)
                << ", tau " << format_double(r.decay.tau) << ")\n";
    } catch (const std::exception& e) {
      fail(spec_error, std::string("automatic speed-up failed: ") + e.what());
    }
  } else {
    unsigned long factor = 0;
    try {
      std::size_t used = 0;
      factor = std::stoul(f.speedup, &used);
      if (used != f.speedup.size()) factor = 0;
    } catch (const std::exception&) {
    }
    if (factor < 1) fail(spec_error, "--speedup expects 'auto' or a positive integer");
    program = speed_up(program, factor);
  }

  const fs::path crn_path = f.out;
  fs::path json_path = crn_path;
  json_path.replace_extension(".json");
  if (json_path == crn_path) json_path += ".json";
  m.outputs["crn"] = crn_path.filename().string();
  m.outputs["manifest"] = json_path.filename().string();

  std::vector<std::string> header = manifest_comment_lines(m);
  header.push_back("sign: " + std::to_string(program.sign));
  header.push_back("limit: " + program.limit.describe());
  header.push_back("speedup factor: " + std::to_string(program.speedup));
  write_atomic(crn_path, format_crn(program.crn, program.designated_name(), header));

  m.timestamp = utc_timestamp();
  Json doc;
  doc["manifest"] = to_json(m);
  doc["program"] = to_json(program);
  write_atomic(json_path, doc.dump(2) + "\n");

  std::cout << "species: " << program.crn.size() << "\nreactions: " << program.crn.reactions().size()
            << "\ndesignated: " << program.designated_name() << "\nsign: " << program.sign
            << "\nlimit: " << program.limit.describe() << " ~ " << format_double(program.value())
            << "\nwrote " << crn_path.string() << " and " << json_path.string() << "\n";
  return ok;
}

// ---- simulate --------------------------------------------------------------

struct SimulateFlags {
  std::string file;
  IntegrationFlags integ{"50"};
  std::string format = "csv";
  std::optional<std::string> out;
};

int cmd_simulate(const SimulateFlags& f) {
  const ParsedCrn parsed = load_crn(f.file);
  RunManifest m;
  m.command = "simulate";
  m.inputs["crn"] = fs::path(f.file).filename().string();
  f.integ.record(m);
  m.parameters["format"] = f.format;
  record_seed(m);
  const Trajectory traj = integrate_from_zero(parsed.crn, f.integ.end(), f.integ.options());

  if (f.out) {
    m.outputs["trajectory"] = fs::path(*f.out).filename().string();
    m.timestamp = utc_timestamp();
  }
  std::string body;
  if (f.format == "json") {
    Json doc;
    doc["manifest"] = to_json(m);
    if (parsed.designated) doc["designated"] = *parsed.designated;
    doc["trajectory"] = to_json(traj);
    body = doc.dump() + "\n";
  } else {
    std::ostringstream csv;
    write_csv(csv, traj);
    body = csv.str();
  }
  if (f.out) {
    write_atomic(*f.out, body);
    if (f.format == "csv") write_atomic(*f.out + ".manifest.json", to_json(m).dump(2) + "\n");
  } else {
    std::cout << body;
  }

  if (!traj.completed())
    fail(integration_error, std::string("integration failed: ") + to_string(traj.status) + " at t=" +
                                format_double(traj.failure_time));
  if (f.out)
    std::cerr << "simulated " << traj.size() << " samples to t=" << format_double(traj.times.back()) << "\n";
  return ok;
}

// ---- verify ----------------------------------------------------------------

struct VerifyFlags {
  std::string file;
  std::string target;
  IntegrationFlags integ{"20"};
  std::string beta_cap = "100";
  std::optional<std::string> report;
};

double manifest_target(const fs::path& crn_path) {
  fs::path json_path = crn_path;
  json_path.replace_extension(".json");
  const std::string text = read_file(json_path);
  try {
    const Json doc = Json::parse(text);
    return doc.at("program").at("magnitude").get<double>();
  } catch (const std::exception& e) {
    fail(spec_error, json_path.string() + ": no program magnitude in manifest (" + e.what() + ")");
  }
}

int cmd_verify(const VerifyFlags& f) {
  const ParsedCrn parsed = load_crn(f.file);
  if (!parsed.designated) fail(spec_error, f.file + ": no designated species");
  const std::size_t designated = *parsed.crn.index_of(*parsed.designated);
  const double target = f.target == "manifest" ? manifest_target(f.file) : std::abs(parse_number(f.target, "--target"));
  const double cap = parse_number(f.beta_cap, "--beta-cap");
  const double t_end = f.integ.end();
  if (t_end < 1) fail(spec_error, "--t-end must be at least 1 for the 2^-t check");

  std::cout << "target |alpha| = " << format_double(target) << "\n";
  const auto integral = validate_integral(parsed.crn);
  const Trajectory traj = integrate_from_zero(parsed.crn, t_end, f.integ.options());
  std::optional<ConvergenceReport> conv;
  if (traj.times.back() >= 1.0 || traj.completed()) conv = check_convergence(traj, designated, target);
  const double beta = check_boundedness(traj);

  std::vector<std::string> failed;
  if (integral.integral()) {
    std::cout << "integrality: ok\n";
  } else {
    std::cout << "integrality: FAILED, non-integer rate constants in reactions";
    for (auto i : integral.offending) std::cout << ' ' << (i + 1);
    std::cout << "\n";
    failed.push_back("integrality");
  }
  if (traj.completed() && beta <= cap) {
    std::cout << "boundedness: ok, beta_observed = " << format_double(beta) << " <= " << f.beta_cap << "\n";
  } else {
    std::cout << "boundedness: FAILED, ";
    if (!traj.completed())
      std::cout << to_string(traj.status) << " at t=" << format_double(traj.failure_time) << "\n";
    else
      std::cout << "beta_observed = " << format_double(beta) << " > " << f.beta_cap << "\n";
    failed.push_back("boundedness");
  }
  if (conv && conv->pass) {
    std::cout << "convergence: ok, |x(t) - |alpha|| <= 2^-t at all " << conv->samples.size()
              << " samples in [1, " << format_double(t_end) << "]\n";
  } else {
    std::cout << "convergence: FAILED";
    if (conv && conv->first_failure) {
      const auto it = std::find_if(conv->samples.begin(), conv->samples.end(),
                                   [&](const ConvergenceSample& s) { return s.t == *conv->first_failure; });
      std::cout << ", first failing t = " << format_double(*conv->first_failure);
      if (it != conv->samples.end())
        std::cout << " (error " << format_double(it->error) << " > bound " << format_double(it->bound) << ")";
    } else {
      std::cout << ", trajectory incomplete";
    }
    std::cout << "\n";
    failed.push_back("convergence");
  }
  if (conv) std::cout << "empirical gamma: " << format_double(conv->empirical_gamma) << "\n";

  if (f.report) {
    RunManifest m;
    m.command = "verify";
    m.inputs["crn"] = fs::path(f.file).filename().string();
    m.parameters["target"] = f.target;
    m.parameters["beta_cap"] = f.beta_cap;
    f.integ.record(m);
    record_seed(m);
    m.outputs["report"] = fs::path(*f.report).filename().string();
    m.timestamp = utc_timestamp();
    Json doc;
    doc["manifest"] = to_json(m);
    doc["integral"] = integral.integral();
    doc["boundedness"] = {{"beta_observed", beta}, {"cap", cap}, {"status", to_string(traj.status)}};
    doc["convergence"] = conv ? to_json(*conv) : Json(nullptr);
    doc["failed"] = failed;
    write_atomic(*f.report, doc.dump(2) + "\n");
  }

  if (!failed.empty()) {
    std::string names;
    for (const auto& n : failed) names += (names.empty() ? "" : ", ") + n;
    fail(verify_failed, "verification failed: " + names);
  }
  std::cout << "all conditions hold\n";
  return ok;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeFlags {
  std::string file;
  IntegrationFlags integ{"50"};
  std::string margin = "1e-9";
};

int cmd_analyze(const AnalyzeFlags& f) {
  const ParsedCrn parsed = load_crn(f.file);
  ReachableFixedPointOptions opt;
  opt.t_end = f.integ.end();
  opt.integrator = f.integ.options();
  const double margin = parse_number(f.margin, "--margin");
  if (!(margin > 0)) fail(spec_error, "--margin must be positive");
  State z;
  try {
    z = reachable_fixed_point(parsed.crn, opt);
  } catch (const FixedPointError& e) {
    fail(not_stable, std::string("verdict: inconclusive (") + e.what() + ")");
  }
  const StabilityReport rep = check_exponential_stability(parsed.crn, z, margin);
  Json doc = to_json(rep);
  doc["species"] = parsed.crn.species();
  if (parsed.designated) doc["designated"] = *parsed.designated;
  std::cout << doc.dump(2) << "\n";
  if (rep.verdict != Verdict::exponentially_stable) fail(not_stable, std::string("verdict: ") + to_string(rep.verdict));
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile real numbers to integral chemical reaction networks and check them"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version);

  CompileFlags cf;
  auto* compile = app.add_subcommand("compile", "Compile a real number to a .crn file plus JSON manifest");
  compile->add_option("--rational", cf.rational, "Rational n/d");
  compile->add_option("--poly", cf.poly, "Integer polynomial, e.g. \"x^2-2\", or a file containing one");
  compile->add_option("--interval", cf.interval, "Isolating interval lo,hi for --poly");
  compile->add_option("--expr", cf.expr, "Expression over rationals, sqrt(r) and root(p, lo, hi)");
  compile->add_flag("--transcendental", cf.transcendental, "The three-species transcendental construction");
  compile->add_option("--speedup", cf.speedup, "auto or a positive integer")->capture_default_str();
  compile->add_option("--out", cf.out, "Output .crn path")->required();

  SimulateFlags sf;
  auto* simulate = app.add_subcommand("simulate", "Integrate from the all-zero state");
  simulate->add_option("crn", sf.file, "Input .crn")->required();
  simulate->add_option("--t-end", sf.integ.t_end)->capture_default_str();
  simulate->add_option("--rel-tol", sf.integ.rel_tol)->capture_default_str();
  simulate->add_option("--abs-tol", sf.integ.abs_tol)->capture_default_str();
  simulate->add_option("--format", sf.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  simulate->add_option("--out", sf.out, "Output path (stdout if omitted)");

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "Check integrality, boundedness and 2^-t convergence");
  verify->add_option("crn", vf.file, "Input .crn")->required();
  verify->add_option("--target", vf.target, "|alpha| as n/d or decimal, or 'manifest'")->required();
  verify->add_option("--t-end", vf.integ.t_end)->capture_default_str();
  verify->add_option("--rel-tol", vf.integ.rel_tol)->capture_default_str();
  verify->add_option("--abs-tol", vf.integ.abs_tol)->capture_default_str();
  verify->add_option("--beta-cap", vf.beta_cap, "Declared concentration bound")->capture_default_str();
  verify->add_option("--report", vf.report, "Write a JSON report here");

  AnalyzeFlags af;
  auto* analyze = app.add_subcommand("analyze", "Fixed point, Jacobian spectrum and stability verdict");
  analyze->add_option("crn", af.file, "Input .crn")->required();
  analyze->add_option("--t-end", af.integ.t_end, "Simulation time before Newton polishing")->capture_default_str();
  analyze->add_option("--rel-tol", af.integ.rel_tol)->capture_default_str();
  analyze->add_option("--abs-tol", af.integ.abs_tol)->capture_default_str();
  analyze->add_option("--margin", af.margin)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : spec_error;
  }

  try {
    if (*compile) return cmd_compile(cf);
    if (*simulate) return cmd_simulate(sf);
    if (*verify) return cmd_verify(vf);
    if (*analyze) return cmd_analyze(af);
  } catch (const Failure& f) {
    std::cerr << "crnrealc: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "crnrealc: " << e.what() << "\n";
    return spec_error;
  }
  return ok;
}
