#pragma once

// Snapshots, trajectory files (JSON lines), diagnostics and plot CSVs, and report
// serialization. Every file carries the artifact version and the config hash.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hyperflow/curve.hpp"
#include "hyperflow/error.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/horograph.hpp"
#include "hyperflow/reflection.hpp"
#include "hyperflow/verify.hpp"
#include "json.hpp"

namespace hyperflow::io {

using json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "hyperflow/1";

/// 64-bit FNV-1a as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// ---------------------------------------------------------------------------
// Snapshots

inline json snapshot_json(const DiscreteCurve& c, double t) {
  json v = json::array();
  for (Complex z : c.vertices()) v.push_back({z.real(), z.imag()});
  return {{"model", "disk"}, {"n", 1}, {"kind", "curve"}, {"vertices", std::move(v)}, {"time", t}};
}

inline json snapshot_json(const HoroGraph& g, double t) {
  return {{"model", "upper"}, {"n", 1}, {"kind", "horograph"}, {"samples", g.samples()}, {"period", g.period()}, {"time", t}};
}

inline bool is_curve_snapshot(const json& s) { return s.value("kind", "") == "curve"; }

inline DiscreteCurve curve_from_snapshot(const json& s) {
  if (!is_curve_snapshot(s)) throw ConfigurationError("snapshot: not a curve");
  std::vector<Complex> v;
  for (const auto& p : s.at("vertices")) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return DiscreteCurve::make(std::move(v));
}

inline HoroGraph graph_from_snapshot(const json& s) {
  if (s.value("kind", "") != "horograph") throw ConfigurationError("snapshot: not a horograph");
  return HoroGraph::make(s.at("period").get<double>(), s.at("samples").get<std::vector<double>>());
}

// ---------------------------------------------------------------------------
// Trajectories

inline json options_json(const RunOptions& o) {
  return {{"c_cfl", o.c_cfl},
          {"stepper", o.stepper == Stepper::Euler ? "euler" : "midpoint"},
          {"record_count", o.record_count},
          {"record_times", o.record_times},
          {"h_max", number_or_null(o.h_max)},
          {"admissibility_directions", o.admissibility_directions}};
}

template <class State, class Diagnostics>
json trajectory_header(const Trajectory<State, Diagnostics>& tr, const RunOptions& opts, const std::string& config_hash) {
  json h = {{"record", "header"},
            {"speed", tr.speed.name()},
            {"n", tr.speed.dimension()},
            {"opts", options_json(opts)},
            {"version", kArtifactVersion},
            {"config_hash", config_hash},
            {"steps", tr.steps}};
  if (tr.halt) h["halt"] = {{"kind", tr.halt->kind}, {"message", tr.halt->message}, {"t", tr.halt->t}};
  return h;
}

template <class State, class Diagnostics>
void write_trajectory(std::ostream& os, const Trajectory<State, Diagnostics>& tr, const RunOptions& opts,
                      const std::string& config_hash) {
  os << trajectory_header(tr, opts, config_hash).dump() << '\n';
  for (std::size_t i = 0; i < tr.size(); ++i) os << snapshot_json(tr.states[i], tr.time(i)).dump() << '\n';
}

struct LoadedTrajectory {
  json header;
  std::vector<json> snapshots;
};

inline LoadedTrajectory read_trajectory(std::istream& is) {
  LoadedTrajectory out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ConfigurationError("trajectory line " + std::to_string(lineno) + ": " + e.what());
    }
    if (j.value("record", "") == "header") {
      out.header = std::move(j);
    } else {
      out.snapshots.push_back(std::move(j));
    }
  }
  if (out.header.is_null()) throw ConfigurationError("trajectory: missing header record");
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_num(double x) {
  if (std::isnan(x)) return "";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline void write_diagnostics_csv(std::ostream& os, const CurveTrajectory& tr, const std::string& config_hash) {
  os << "# " << kArtifactVersion << " config " << config_hash << '\n';
  os << "t,kappa_min,kappa_max,area,starshaped,s_bar,r_minus,r_plus\n";
  for (const auto& d : tr.diagnostics)
    os << csv_num(d.t) << ',' << csv_num(d.kappa_min) << ',' << csv_num(d.kappa_max) << ',' << csv_num(d.area) << ','
       << (d.starshaped ? 1 : 0) << ',' << csv_num(d.s_bar) << ',' << csv_num(d.r_minus) << ',' << csv_num(d.r_plus) << '\n';
}

inline void write_diagnostics_csv(std::ostream& os, const GraphTrajectory& tr, const std::string& config_hash) {
  os << "# " << kArtifactVersion << " config " << config_hash << '\n';
  os << "t,kappa_min,kappa_max,f_min,f_max,umbilic_deviation\n";
  for (const auto& d : tr.diagnostics)
    os << csv_num(d.t) << ',' << csv_num(d.kappa_min) << ',' << csv_num(d.kappa_max) << ',' << csv_num(d.f_min) << ','
       << csv_num(d.f_max) << ',' << csv_num(d.umbilic_deviation) << '\n';
}

/// Long-format plot data: "t,theta,r" for curves (polar about the origin), "t,x,f" for graphs.
inline void write_plot_csv(std::ostream& os, const LoadedTrajectory& tr) {
  os << "# " << kArtifactVersion << " config " << tr.header.value("config_hash", "") << '\n';
  if (tr.snapshots.empty()) return;
  const bool curve = is_curve_snapshot(tr.snapshots.front());
  os << (curve ? "t,theta,r\n" : "t,x,f\n");
  for (const json& s : tr.snapshots) {
    const double t = s.at("time").get<double>();
    if (curve) {
      for (const auto& p : s.at("vertices")) {
        const Complex z(p.at(0).get<double>(), p.at(1).get<double>());
        os << csv_num(t) << ',' << csv_num(std::arg(z)) << ',' << csv_num(disk::radius_of(z)) << '\n';
      }
    } else {
      const auto f = s.at("samples").get<std::vector<double>>();
      const double h = s.at("period").get<double>() / static_cast<double>(f.size());
      for (std::size_t j = 0; j < f.size(); ++j) os << csv_num(t) << ',' << csv_num(h * static_cast<double>(j)) << ',' << csv_num(f[j]) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Admissibility reports

inline json admissibility_json(const OverallOptimal& o, AdmissibilityMethod method, const std::string& config_hash) {
  json report = json::array();
  for (const auto& d : o.per_direction)
    report.push_back({{"direction", {d.direction.real(), d.direction.imag()}},
                      {"s0", number_or_null(d.value.s0)},
                      {"margin", number_or_null(d.value.margin)},
                      {"method", to_string(method)}});
  return {{"version", kArtifactVersion},
          {"config_hash", config_hash},
          {"s_bar", o.s_bar},
          {"argmax", {o.argmax.real(), o.argmax.imag()}},
          {"report", std::move(report)}};
}

inline json admissibility_json(const OverallOptimalNc& o, const std::string& config_hash) {
  json report = json::array();
  for (const auto& [x, v] : o.per_point) {
    json e = {{"x", x}, {"s0", number_or_null(v.s0)}, {"margin", nullptr}, {"method", "hemisphere_sweep"}};
    if (v.unbounded) e["unbounded"] = true;
    report.push_back(std::move(e));
  }
  json out = {{"version", kArtifactVersion}, {"config_hash", config_hash}, {"s_bar", number_or_null(o.s_bar)}, {"report", std::move(report)}};
  if (std::isfinite(o.s_bar)) out["argmin"] = o.argmin;
  if (std::isinf(o.s_bar)) out["unbounded"] = true;
  return out;
}

// ---------------------------------------------------------------------------
// Verification reports

inline json named_values_json(const NamedValues& v) {
  json o = json::object();
  for (const auto& [k, x] : v) o[k] = number_or_null(x);
  return o;
}

inline json report_json(const VerificationReport& r, const std::string& config_hash) {
  json j = {{"version", kArtifactVersion},
            {"config_hash", config_hash},
            {"suite", r.suite},
            {"scenario", r.scenario},
            {"status", to_string(r.status)},
            {"margin", number_or_null(r.margin)},
            {"tolerances", named_values_json(r.tolerances)},
            {"metrics", named_values_json(r.metrics)},
            {"artifacts", r.artifacts},
            {"note", r.note}};
  if (r.witness)
    j["witness"] = {{"t", r.witness->t},
                    {"location", r.witness->location},
                    {"inequality", r.witness->inequality},
                    {"lhs", number_or_null(r.witness->lhs)},
                    {"rhs", number_or_null(r.witness->rhs)}};
  return j;
}

/// Aligned text table, one row per report.
inline std::string report_table(const std::vector<VerificationReport>& reports) {
  std::size_t w_suite = 5, w_scn = 8;
  for (const auto& r : reports) {
    w_suite = std::max(w_suite, r.suite.size());
    w_scn = std::max(w_scn, r.scenario.size());
  }
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  std::ostringstream os;
  os << pad("suite", w_suite) << "  " << pad("scenario", w_scn) << "  " << pad("status", 12) << "  margin\n";
  for (const auto& r : reports) {
    os << pad(r.suite, w_suite) << "  " << pad(r.scenario, w_scn) << "  " << pad(to_string(r.status), 12) << "  "
       << csv_num(r.margin) << '\n';
    if (r.witness && r.status == Status::Fail)
      os << "    witness t=" << r.witness->t << " " << r.witness->location << ": " << r.witness->inequality << " ("
         << r.witness->lhs << " vs " << r.witness->rhs << ")\n";
    if (!r.note.empty()) os << "    note: " << r.note << '\n';
  }
  return os.str();
}

}  // namespace hyperflow::io
