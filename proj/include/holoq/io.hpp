#ifndef HOLOQ_IO_HPP
#define HOLOQ_IO_HPP

// JSON plan/report schemas and CSV trajectory export.  Reports are dumped
// with a fixed 17-significant-digit float format so identical inputs give
// byte-identical output.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "holoq/holonomy.hpp"
#include "holoq/noise.hpp"
#include "holoq/two_qubit.hpp"

namespace holoq {

using json = nlohmann::ordered_json;

struct IoError : Error { using Error::Error; };

// --- deterministic dump ----------------------------------------------------

namespace detail {

inline void dump_value(const json& v, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string pad_close(static_cast<std::size_t>(indent) * depth, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) { out += "{}"; break; }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump_value(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad_close + "}";
      break;
    }
    case json::value_t::array: {
      if (v.empty()) { out += "[]"; break; }
      out += "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_value(item, out, indent, depth + 1);
      }
      out += "\n" + pad_close + "]";
      break;
    }
    case json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
      out += buf;
      break;
    }
    default:
      out += v.dump();
      break;
  }
}

}  // namespace detail

inline std::string dump_report(const json& j) {
  std::string out;
  detail::dump_value(j, out, 2, 0);
  out += "\n";
  return out;
}

// --- schemas ---------------------------------------------------------------

inline json to_json(const SegmentSpec& seg) {
  return json{{"theta", seg.frame.theta},
              {"phi", seg.frame.phi},
              {"omega", seg.omega},
              {"delta", seg.delta},
              {"laser_phase", seg.laser_phase},
              {"tau", seg.tau}};
}

inline SegmentSpec segment_from_json(const json& j) {
  SegmentSpec seg;
  seg.frame.theta = j.at("theta").get<double>();
  seg.frame.phi = j.at("phi").get<double>();
  seg.omega = j.at("omega").get<double>();
  seg.delta = j.at("delta").get<double>();
  seg.laser_phase = j.at("laser_phase").get<double>();
  seg.tau = j.at("tau").get<double>();
  if (seg.omega < 0.0 || seg.tau <= 0.0) {
    throw InvalidPlan("segment: omega must be >= 0 and tau > 0");
  }
  return seg;
}

inline json to_json(const PathPlan& plan) {
  json segs = json::array();
  for (const auto& s : plan.segments) segs.push_back(to_json(s));
  return json{{"initial_frame",
               {{"theta", plan.initial_frame.theta},
                {"phi", plan.initial_frame.phi}}},
              {"segments", segs}};
}

inline PathPlan plan_from_json(const json& j) {
  PathPlan plan;
  if (!j.contains("segments") || !j.at("segments").is_array() ||
      j.at("segments").empty()) {
    throw InvalidPlan("plan: needs a nonempty segments array");
  }
  for (const auto& js : j.at("segments")) {
    plan.segments.push_back(segment_from_json(js));
  }
  if (j.contains("initial_frame")) {
    plan.initial_frame.theta = j.at("initial_frame").at("theta").get<double>();
    plan.initial_frame.phi = j.at("initial_frame").at("phi").get<double>();
  } else {
    plan.initial_frame = plan.segments.front().frame;
  }
  return plan;
}

inline json to_json(const HolonomyReport& rep) {
  json gate = json::array();
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      gate.push_back(json::array({rep.gate(i, k).real(), rep.gate(i, k).imag()}));
    }
  }
  return json{{"beta", rep.beta},
              {"total_angle", rep.total_angle},
              {"cyclic_residual", rep.cyclic_residual},
              {"geometric_residual", rep.geometric_residual},
              {"cyclic", rep.cyclic},
              {"gate", gate}};
}

inline json to_json(const ProtectedSchedule& sched) {
  json steps = json::array();
  for (const auto& step : sched.steps) {
    json js;
    js["pulse"] = step.pulse ? json(*step.pulse) : json(nullptr);
    js["segment"] = step.segment ? to_json(*step.segment) : json(nullptr);
    steps.push_back(js);
  }
  return steps;
}

inline json to_json(const NoiseModel& n) {
  return json{{"gamma_e0", n.gamma_e0},
              {"gamma_e1", n.gamma_e1},
              {"kappa_0", n.kappa_0},
              {"kappa_1", n.kappa_1},
              {"kappa_e", n.kappa_e}};
}

inline NoiseModel noise_from_json(const json& j) {
  NoiseModel n;
  n.gamma_e0 = j.value("gamma_e0", 0.0);
  n.gamma_e1 = j.value("gamma_e1", 0.0);
  n.kappa_0 = j.value("kappa_0", 0.0);
  n.kappa_1 = j.value("kappa_1", 0.0);
  n.kappa_e = j.value("kappa_e", 0.0);
  if (n.gamma_e0 < 0 || n.gamma_e1 < 0 || n.kappa_0 < 0 || n.kappa_1 < 0 ||
      n.kappa_e < 0) {
    throw InvalidArgument("noise: rates must be nonnegative");
  }
  return n;
}

inline ConditionalPlan conditional_plan_from_json(const json& j) {
  ConditionalPlan cp;
  cp.plan_up = plan_from_json(j.at("plan_up"));
  cp.plan_down = plan_from_json(j.at("plan_down"));
  return cp;
}

inline json to_json(const Eigen::Matrix4cd& gate) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int k = 0; k < 4; ++k) {
      row.push_back(json::array({gate(i, k).real(), gate(i, k).imag()}));
    }
    rows.push_back(row);
  }
  return rows;
}

// --- files -----------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse " + path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

// Columns: time, Re/Im amplitudes of both basis states, cumulative
// compensation phase (14 numeric columns at dim 3).
inline std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,b0_re,b0_im,b1_re,b1_im,be_re,be_im,"
         "d0_re,d0_im,d1_re,d1_im,de_re,de_im,comp_phase\n";
  char buf[40];
  auto emit = [&](double x, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g%c", x, sep);
    out << buf;
  };
  for (const auto& s : traj.samples) {
    double comp = 0.0;
    for (int b = 0; b < s.segment && b < static_cast<int>(traj.boundary_phases.size()); ++b) {
      comp += traj.boundary_phases[b];
    }
    emit(s.t, ',');
    for (int k = 0; k < 3; ++k) {
      emit(s.basis_b(k).real(), ',');
      emit(s.basis_b(k).imag(), ',');
    }
    for (int k = 0; k < 3; ++k) {
      emit(s.basis_d(k).real(), ',');
      emit(s.basis_d(k).imag(), ',');
    }
    emit(comp, '\n');
  }
  return out.str();
}

}  // namespace holoq

#endif
