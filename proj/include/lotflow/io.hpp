#pragma once

// File formats: instance JSON in, trajectory CSV plus diagnostics JSON out.

#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lotflow/core_model.hpp"
#include "lotflow/errors.hpp"
#include "lotflow/solution.hpp"

namespace lotflow {

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline nlohmann::ordered_json instance_to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["T"] = inst.T;
  j["d"] = inst.d;
  j["p"] = inst.p;
  j["c"] = inst.c;
  j["h"] = inst.h;
  j["s"] = inst.s;
  j["Bc"] = inst.Bc;
  j["BL"] = inst.BL;
  j["TL"] = inst.TL;
  j["r"] = inst.r;
  j["beta"] = inst.beta;
  return j;
}

inline std::string instance_to_string(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

// The loan and goodwill fields may be omitted and default to zero. Unknown
// keys are rejected so that a misspelt field does not silently vanish.
inline Instance instance_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("instance JSON: top level must be an object");
  static const std::set<std::string> known{"T", "d", "p", "c", "h", "s", "Bc", "BL", "TL", "r", "beta"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw InputError("instance JSON: unknown field '" + key + "'");
  }
  auto integer = [&](const char* key, bool required) -> int {
    if (!j.contains(key)) {
      if (required) throw InputError(std::string("instance JSON: missing field '") + key + "'");
      return 0;
    }
    const auto& v = j[key];
    if (!v.is_number_integer()) throw InputError(std::string("instance JSON: '") + key + "' must be an integer");
    return v.get<int>();
  };
  auto number = [&](const char* key, bool required) -> double {
    if (!j.contains(key)) {
      if (required) throw InputError(std::string("instance JSON: missing field '") + key + "'");
      return 0.0;
    }
    const auto& v = j[key];
    if (!v.is_number()) throw InputError(std::string("instance JSON: '") + key + "' must be a number");
    return v.get<double>();
  };
  auto array = [&](const char* key) {
    if (!j.contains(key)) throw InputError(std::string("instance JSON: missing field '") + key + "'");
    const auto& v = j[key];
    if (!v.is_array()) throw InputError(std::string("instance JSON: '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw InputError(std::string("instance JSON: '") + key + "' must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  };
  Instance inst;
  inst.T = integer("T", true);
  inst.d = array("d");
  inst.p = array("p");
  inst.c = array("c");
  inst.h = array("h");
  inst.s = array("s");
  inst.Bc = number("Bc", true);
  inst.BL = number("BL", false);
  inst.TL = integer("TL", false);
  inst.r = number("r", false);
  inst.beta = number("beta", false);
  validate(inst);
  return inst;
}

inline Instance read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open instance file '" + path + "'");
  return instance_from_string(std::string(std::istreambuf_iterator<char>(in), {}));
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

inline std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "t,x,y,v,Ed,w,I,B\r\n";
  for (std::size_t u = 0; u < tr.x.size(); ++u) {
    os << u + 1 << ',' << tr.x[u] << ',' << format_number(tr.plan.y[u]) << ',' << format_number(tr.plan.v[u]) << ','
       << format_number(tr.Ed[u]) << ',' << format_number(tr.w[u]) << ',' << format_number(tr.I[u + 1]) << ','
       << format_number(tr.B[u + 1]) << "\r\n";
  }
  os << "objective," << format_number(tr.objective) << "\r\n";
  return os.str();
}

inline nlohmann::ordered_json diagnostics_json(const Solution& sol) {
  nlohmann::ordered_json j;
  j["objective"] = sol.objective;
  j["lp_count"] = sol.lp_count;
  auto adj = nlohmann::ordered_json::array();
  for (const auto& a : sol.adjustments) adj.push_back({{"kind", a.kind}, {"periods", a.periods}});
  j["adjustments"] = adj;
  j["degenerate"] = sol.degenerate;
  return j;
}

}  // namespace lotflow
