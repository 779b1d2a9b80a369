#pragma once

#include "crnreal/compiler.hpp"
#include "crnreal/parser.hpp"
#include "crnreal/simulator.hpp"
#include "crnreal/stability.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace crnreal {

using Json = nlohmann::ordered_json;

inline constexpr const char* tool_version = "crnrealc 0.1.0";

// What produced an output file. The timestamp is the only field allowed to
// differ between identical runs.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> outputs;
  std::string version = tool_version;
  std::string timestamp;
};

namespace detail {
inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
}  // namespace detail

inline Json to_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["inputs"] = m.inputs;
  j["parameters"] = m.parameters;
  j["outputs"] = m.outputs;
  j["tool_version"] = m.version;
  if (!m.timestamp.empty()) j["timestamp"] = m.timestamp;
  return j;
}

inline RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.inputs = j.value("inputs", std::map<std::string, std::string>{});
  m.parameters = j.value("parameters", std::map<std::string, std::string>{});
  m.outputs = j.value("outputs", std::map<std::string, std::string>{});
  m.version = j.value("tool_version", std::string(tool_version));
  m.timestamp = j.value("timestamp", std::string());
  return m;
}

// Lines for the "# " header of a written .crn file.
inline std::vector<std::string> manifest_comment_lines(const RunManifest& m) {
  std::vector<std::string> lines{"generated by " + m.version, "command: " + m.command};
  for (const auto& [k, v] : m.inputs) lines.push_back("input " + k + ": " + v);
  for (const auto& [k, v] : m.parameters) lines.push_back("parameter " + k + ": " + v);
  return lines;
}

inline Json to_json(const SignedProgram& p) {
  Json j;
  j["species"] = p.crn.species();
  j["reaction_count"] = p.crn.reactions().size();
  j["designated"] = p.designated_name();
  j["sign"] = p.sign;
  j["speedup"] = p.speedup;
  j["limit"] = p.limit.describe();
  j["magnitude"] = p.magnitude();
  j["value"] = p.value();
  if (p.composition) j["combinator"] = to_string(p.composition->kind);
  return j;
}

inline Json to_json(const Trajectory& t) {
  Json j;
  j["species"] = t.species;
  j["times"] = t.times;
  j["states"] = t.states;
  Json meta;
  meta["status"] = to_string(t.status);
  meta["failure_time"] = detail::finite_or_null(t.failure_time);
  meta["t_end"] = t.t_end;
  meta["rel_tol"] = t.rel_tol;
  meta["abs_tol"] = t.abs_tol;
  meta["accepted_steps"] = t.accepted_steps;
  meta["rejected_steps"] = t.rejected_steps;
  meta["clamped_values"] = t.clamped_values;
  meta["most_negative"] = t.most_negative;
  j["integrator"] = meta;
  return j;
}

inline Json to_json(const ConvergenceReport& r) {
  Json j;
  j["target"] = r.target;
  j["species"] = r.species;
  j["pass"] = r.pass;
  j["first_failure"] = r.first_failure ? Json(*r.first_failure) : Json(nullptr);
  j["trajectory_complete"] = r.trajectory_complete;
  j["beta_observed"] = r.beta_observed;
  j["empirical_gamma"] = detail::finite_or_null(r.empirical_gamma);
  Json samples = Json::array();
  for (const auto& s : r.samples) samples.push_back({s.t, s.x, s.error, s.bound});
  j["samples_columns"] = {"t", "x", "error", "bound"};
  j["samples"] = std::move(samples);
  return j;
}

inline Json to_json(const StabilityReport& r) {
  Json j;
  j["fixed_point"] = r.fixed_point;
  j["residual"] = r.residual;
  Json eig = Json::array();
  for (const auto& l : r.eigenvalues) eig.push_back({l.real(), l.imag()});
  j["eigenvalues"] = std::move(eig);
  j["max_real_part"] = detail::finite_or_null(r.max_real_part);
  j["verdict"] = to_string(r.verdict);
  j["is_fixed_point"] = r.is_fixed_point;
  return j;
}

}  // namespace crnreal
