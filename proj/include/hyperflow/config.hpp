#pragma once

// Run configuration: strict JSON (unknown keys rejected), validation, canonical
// hashing, and construction of the shipped scenarios.

#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "hyperflow/curve.hpp"
#include "hyperflow/error.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/horograph.hpp"
#include "hyperflow/io.hpp"
#include "hyperflow/shapes.hpp"
#include "hyperflow/verify.hpp"

namespace hyperflow {

inline constexpr int kConfigVersion = 1;

struct ScenarioSpec {
  /// circle, flower, peanut, random_curve, flat_horograph, sine_horograph
  std::string kind = "circle";
  double radius = 1.0;
  double offset = 0.0;
  double amplitude = 0.25;
  int lobes = 3;
  /// Flower: amplitude is reduced until the curvature stays above this (0 disables clipping).
  double min_kappa = 0.25;
  double height = 1.0;
  double period = 2.0 * std::numbers::pi;
  /// Vertices (curves) or samples per period (graphs).
  std::size_t resolution = 512;
};

struct Config {
  int version = kConfigVersion;
  ScenarioSpec scenario;
  std::string speed = "inverse_mean";
  double power = 1.0;
  int n = 1;
  double t_end = 3.0;
  double c_cfl = 0.2;
  std::string stepper = "midpoint";
  std::size_t records = 12;
  std::size_t directions = 64;
  std::size_t points = 128;
  std::size_t raster = 512;
  double tol_scale = 5.0;
  double exclusion = 1e-2;
  std::size_t lemma_curves = 20;
  std::size_t lemma_trials = 10;
  std::string lemma_corpus = "random";
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  bool allow_inconclusive = true;
  std::size_t threads = 1;
  /// Replaces the computed optimal admissible value in the suites that use it
  /// (counterexample fixtures for checker validation).
  std::optional<double> s_bar;

  bool compact() const { return scenario.kind != "flat_horograph" && scenario.kind != "sine_horograph"; }
};

namespace detail {

inline void reject_unknown(const io::json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigurationError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigurationError(where + ": unknown key '" + k + "'");
}

template <class T>
void read(const io::json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigurationError(where + "." + key + ": expected a boolean");
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) throw ConfigurationError(where + "." + key + ": expected a non-negative integer");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigurationError(where + "." + key + ": expected an integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigurationError(where + "." + key + ": expected a number");
  } else {
    if (!v.is_string()) throw ConfigurationError(where + "." + key + ": expected a string");
  }
  try {
    out = j.at(key).get<T>();
  } catch (const io::json::exception& e) {
    throw ConfigurationError(where + "." + key + ": " + e.what());
  }
}

inline void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigurationError(message);
}

}  // namespace detail

inline void validate(const Config& c) {
  using detail::require;
  require(c.version == kConfigVersion, "version: expected " + std::to_string(kConfigVersion));
  const std::set<std::string> kinds{"circle", "flower", "peanut", "random_curve", "flat_horograph", "sine_horograph"};
  require(kinds.count(c.scenario.kind) > 0, "scenario.kind: unknown kind '" + c.scenario.kind + "'");
  require(c.scenario.radius > 0.0, "scenario.radius must be > 0");
  require(c.scenario.offset >= 0.0, "scenario.offset must be >= 0");
  require(c.scenario.amplitude >= 0.0, "scenario.amplitude must be >= 0");
  require(c.scenario.lobes >= 1, "scenario.lobes must be >= 1");
  require(c.scenario.min_kappa >= 0.0, "scenario.min_kappa must be >= 0");
  require(c.scenario.height > 0.0, "scenario.height must be > 0");
  require(c.scenario.period > 0.0, "scenario.period must be > 0");
  require(c.scenario.resolution >= 16, "scenario.resolution must be >= 16");
  require(c.speed == "inverse_mean" || c.speed == "inverse_power_mean", "speed.kind: unknown speed '" + c.speed + "'");
  require(c.power <= 1.0, "speed.power must be <= 1");
  require(c.n >= 1 && c.n <= 7, "n must be in [1, 7]");
  require(c.t_end >= 0.0, "t_end must be >= 0");
  require(c.c_cfl > 0.0, "c_cfl must be > 0");
  require(c.stepper == "midpoint" || c.stepper == "euler", "stepper must be 'midpoint' or 'euler'");
  require(c.records >= 1, "records must be >= 1");
  require(c.directions >= 64, "directions must be >= 64");
  require(c.points >= 1, "points must be >= 1");
  require(c.raster >= 32, "raster must be >= 32");
  require(c.tol_scale > 0.0, "tolerances.tol_scale must be > 0");
  require(c.exclusion >= 0.0, "tolerances.exclusion must be >= 0");
  require(c.lemma_curves >= 1 && c.lemma_trials >= 1, "lemma.curves and lemma.trials must be >= 1");
  require(c.lemma_corpus == "random" || c.lemma_corpus == "circles", "lemma.corpus must be 'random' or 'circles'");
  require(c.threads >= 1, "threads must be >= 1");
}

inline Config parse_config(const io::json& j) {
  using detail::read;
  detail::reject_unknown(j,
                         {"version", "scenario", "speed", "n", "t_end", "c_cfl", "stepper", "records", "directions", "points",
                          "raster", "tolerances", "lemma", "seed", "output", "allow_inconclusive", "threads", "s_bar"},
                         "config");
  if (!j.contains("version")) throw ConfigurationError("config: missing 'version'");
  Config c;
  read(j, "version", c.version, "config");
  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    detail::reject_unknown(s, {"kind", "radius", "offset", "amplitude", "lobes", "min_kappa", "height", "period", "resolution"},
                           "scenario");
    read(s, "kind", c.scenario.kind, "scenario");
    read(s, "radius", c.scenario.radius, "scenario");
    read(s, "offset", c.scenario.offset, "scenario");
    read(s, "amplitude", c.scenario.amplitude, "scenario");
    read(s, "lobes", c.scenario.lobes, "scenario");
    read(s, "min_kappa", c.scenario.min_kappa, "scenario");
    read(s, "height", c.scenario.height, "scenario");
    read(s, "period", c.scenario.period, "scenario");
    read(s, "resolution", c.scenario.resolution, "scenario");
  }
  if (j.contains("speed")) {
    const auto& s = j.at("speed");
    detail::reject_unknown(s, {"kind", "power"}, "speed");
    read(s, "kind", c.speed, "speed");
    read(s, "power", c.power, "speed");
  }
  read(j, "n", c.n, "config");
  read(j, "t_end", c.t_end, "config");
  read(j, "c_cfl", c.c_cfl, "config");
  read(j, "stepper", c.stepper, "config");
  read(j, "records", c.records, "config");
  read(j, "directions", c.directions, "config");
  read(j, "points", c.points, "config");
  read(j, "raster", c.raster, "config");
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    detail::reject_unknown(t, {"tol_scale", "exclusion"}, "tolerances");
    read(t, "tol_scale", c.tol_scale, "tolerances");
    read(t, "exclusion", c.exclusion, "tolerances");
  }
  if (j.contains("lemma")) {
    const auto& l = j.at("lemma");
    detail::reject_unknown(l, {"curves", "trials", "corpus"}, "lemma");
    read(l, "curves", c.lemma_curves, "lemma");
    read(l, "trials", c.lemma_trials, "lemma");
    read(l, "corpus", c.lemma_corpus, "lemma");
  }
  read(j, "seed", c.seed, "config");
  if (j.contains("output")) {
    const auto& o = j.at("output");
    detail::reject_unknown(o, {"dir"}, "output");
    read(o, "dir", c.out_dir, "output");
  }
  read(j, "allow_inconclusive", c.allow_inconclusive, "config");
  read(j, "threads", c.threads, "config");
  if (j.contains("s_bar")) {
    double v = 0.0;
    read(j, "s_bar", v, "config");
    c.s_bar = v;
  }
  validate(c);
  return c;
}

inline Config parse_config(const std::string& text) {
  io::json j;
  try {
    j = io::json::parse(text);
  } catch (const io::json::parse_error& e) {
    throw ConfigurationError(std::string("config: ") + e.what());
  }
  return parse_config(j);
}

inline Config parse_config(const char* text) { return parse_config(std::string(text)); }

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline io::json to_json(const Config& c) {
  io::json j = {{"version", c.version},
          {"scenario",
           {{"kind", c.scenario.kind},
            {"radius", c.scenario.radius},
            {"offset", c.scenario.offset},
            {"amplitude", c.scenario.amplitude},
            {"lobes", c.scenario.lobes},
            {"min_kappa", c.scenario.min_kappa},
            {"height", c.scenario.height},
            {"period", c.scenario.period},
            {"resolution", c.scenario.resolution}}},
          {"speed", {{"kind", c.speed}, {"power", c.power}}},
          {"n", c.n},
          {"t_end", c.t_end},
          {"c_cfl", c.c_cfl},
          {"stepper", c.stepper},
          {"records", c.records},
          {"directions", c.directions},
          {"points", c.points},
          {"raster", c.raster},
          {"tolerances", {{"tol_scale", c.tol_scale}, {"exclusion", c.exclusion}}},
          {"lemma", {{"curves", c.lemma_curves}, {"trials", c.lemma_trials}, {"corpus", c.lemma_corpus}}},
          {"seed", c.seed},
          {"output", {{"dir", c.out_dir}}},
          {"allow_inconclusive", c.allow_inconclusive},
          {"threads", c.threads}};
  if (c.s_bar) j["s_bar"] = *c.s_bar;
  return j;
}

/// Hash of the canonical (sorted-key) form; output paths and thread counts are excluded
/// because they do not change results.
inline std::string config_hash(const Config& c) {
  io::json j = to_json(c);
  j.erase("output");
  j.erase("threads");
  return io::fnv1a_hex(j.dump());
}

inline SpeedFunction make_speed(const Config& c) {
  return c.speed == "inverse_mean" ? SpeedFunction::inverse_mean(c.n) : SpeedFunction::inverse_power_mean(c.n, c.power);
}

inline RunOptions run_options(const Config& c) {
  RunOptions o;
  o.c_cfl = c.c_cfl;
  o.stepper = c.stepper == "euler" ? Stepper::Euler : Stepper::Midpoint;
  o.speed = make_speed(c);
  o.record_count = c.records;
  o.threads = c.threads;
  return o;
}

using InitialState = std::variant<DiscreteCurve, HoroGraph>;

inline InitialState build_initial(const Config& c) {
  const ScenarioSpec& s = c.scenario;
  const std::size_t m = s.resolution;
  if (s.kind == "circle") return shapes::circle(s.radius, m, s.offset);
  if (s.kind == "flower") {
    const double a = s.min_kappa > 0.0 ? shapes::clipped_flower_amplitude(s.amplitude, s.min_kappa, s.lobes, s.radius) : s.amplitude;
    return shapes::flower(m, a, s.lobes, s.radius);
  }
  if (s.kind == "peanut") return shapes::peanut(m);
  if (s.kind == "random_curve") {
    std::mt19937_64 rng(c.seed);
    return shapes::random_smooth(rng, m);
  }
  if (s.kind == "flat_horograph") return shapes::flat_horograph(s.height, m, s.period);
  if (s.kind == "sine_horograph") return shapes::sine_horograph(s.amplitude, m, s.period, s.height);
  throw ConfigurationError("scenario.kind: unknown kind '" + s.kind + "'");
}

/// Shipped scenario configs keyed by id.
inline std::vector<std::pair<std::string, Config>> shipped_fixtures() {
  std::vector<std::pair<std::string, Config>> out;
  auto add = [&](std::string id, auto&& edit) {
    Config c;
    edit(c);
    c.out_dir = "out/" + id;
    validate(c);
    out.emplace_back(std::move(id), std::move(c));
  };
  add("origin_circle", [](Config& c) { c.scenario.kind = "circle"; });
  add("offcenter_circle", [](Config& c) {
    c.scenario.kind = "circle";
    c.scenario.offset = 0.5;
  });
  add("flower", [](Config& c) { c.scenario.kind = "flower"; });
  add("peanut", [](Config& c) {
    c.scenario.kind = "peanut";
    c.scenario.resolution = 256;
  });
  add("flat_horosphere", [](Config& c) {
    c.scenario.kind = "flat_horograph";
    c.scenario.resolution = 128;
  });
  add("sine_horograph_01", [](Config& c) {
    c.scenario.kind = "sine_horograph";
    c.scenario.amplitude = 0.1;
  });
  add("sine_horograph_03", [](Config& c) {
    c.scenario.kind = "sine_horograph";
    c.scenario.amplitude = 0.3;
  });
  // Checker validation: the off-center circle with a deliberately small s_bar breaks the gradient bound.
  add("counterexample_gradient", [](Config& c) {
    c.scenario.kind = "circle";
    c.scenario.offset = 0.5;
    c.t_end = 0.0;
    c.records = 1;
    c.s_bar = 0.2;
  });
  return out;
}

}  // namespace hyperflow
