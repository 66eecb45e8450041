#include "nilflow/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace nilflow {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const std::vector<FlowState>& states) {
  os << kTrajectoryCsvHeader << '\n';
  for (const FlowState& s : states) {
    os << format_double(s.t) << ',' << format_double(s.omega.r2) << ','
       << format_double(s.omega.s2) << ',' << format_double(s.omega.k2) << ','
       << format_double(s.omega.u.real()) << ',' << format_double(s.omega.u.imag());
    if (s.H) {
      os << ',' << format_double(s.H->tr2) << ',' << format_double(s.H->ts2) << ','
         << format_double(s.H->tk2);
    } else {
      os << ",,,";
    }
    os << '\n';
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line_no) {
  if (s.empty()) throw ParseError("empty number on line " + std::to_string(line_no));
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw ParseError("bad number '" + s + "' on line " + std::to_string(line_no));
  return v;
}

}  // namespace

std::vector<FlowState> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTrajectoryCsvHeader)
    throw ParseError("missing trajectory header");
  std::vector<FlowState> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 9)
      throw ParseError("expected 9 fields on line " + std::to_string(line_no));
    FlowState s;
    s.t = parse_double(f[0], line_no);
    s.omega.r2 = parse_double(f[1], line_no);
    s.omega.s2 = parse_double(f[2], line_no);
    s.omega.k2 = parse_double(f[3], line_no);
    s.omega.u = {parse_double(f[4], line_no), parse_double(f[5], line_no)};
    const bool has_h = !f[6].empty() || !f[7].empty() || !f[8].empty();
    if (has_h) {
      s.H = BundleMetricCoeffs{parse_double(f[6], line_no), parse_double(f[7], line_no),
                               parse_double(f[8], line_no)};
    }
    out.push_back(s);
  }
  return out;
}

namespace {

nlohmann::json complex_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

/// [re, im]
nlohmann::json complex_pair(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

Complex complex_from_pair(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("complex value must be [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

void to_json(nlohmann::json& j, const JParams& p) {
  j = {{"rho", p.rho()}, {"lambda", p.lambda()}, {"x", p.x()}, {"y", p.y()}};
}

JParams params_from_json(const nlohmann::json& j) {
  return JParams(j.at("rho").get<int>(), j.value("lambda", 0.0), j.at("x").get<double>(),
                 j.value("y", 0.0));
}

void to_json(nlohmann::json& j, const MetricCoeffs& m) {
  j = {{"r2", m.r2}, {"s2", m.s2}, {"k2", m.k2},
       {"u", complex_pair(m.u)}, {"v", complex_pair(m.v)}, {"z", complex_pair(m.z)}};
}

void from_json(const nlohmann::json& j, MetricCoeffs& m) {
  m.r2 = j.at("r2").get<double>();
  m.s2 = j.at("s2").get<double>();
  m.k2 = j.at("k2").get<double>();
  m.u = j.contains("u") ? complex_from_pair(j.at("u")) : Complex{};
  m.v = j.contains("v") ? complex_from_pair(j.at("v")) : Complex{};
  m.z = j.contains("z") ? complex_from_pair(j.at("z")) : Complex{};
}

void to_json(nlohmann::json& j, const BundleMetricCoeffs& h) {
  j = {{"tr2", h.tr2}, {"ts2", h.ts2}, {"tk2", h.tk2}};
}

void from_json(const nlohmann::json& j, BundleMetricCoeffs& h) {
  h.tr2 = j.at("tr2").get<double>();
  h.ts2 = j.at("ts2").get<double>();
  h.tk2 = j.at("tk2").get<double>();
}

void to_json(nlohmann::json& j, const ConservedConstants& c) {
  j = {{"c1", c.c1}, {"c2", c.c2}, {"c3", complex_json(c.c3)},
       {"c4", complex_json(c.c4)}, {"c5", complex_json(c.c5)}};
}

void to_json(nlohmann::json& j, const ModelConstants& m) {
  j = {{"K1", m.K1}, {"K2", m.K2}, {"B", m.B}, {"C", m.C},
       {"alpha_prime", m.alpha_prime}, {"tau", m.tau}};
}

void to_json(nlohmann::json& j, const QualitativeClass& q) {
  j = {{"kind", to_string(q.kind)}, {"description", q.description()},
       {"converges_forward", q.converges_forward},
       {"converges_backward", q.converges_backward},
       {"from_explicit_solution_only", q.from_explicit_solution_only}};
  const auto opt = [&](const char* key, const std::optional<double>& v) {
    j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  opt("fixed_point", q.fixed_point);
  opt("forward_slope", q.forward_slope);
  opt("backward_slope", q.backward_slope);
  opt("t_minus", q.t_minus);
  opt("t_plus", q.t_plus);
}

void to_json(nlohmann::json& j, const FlowState& s) {
  j = {{"t", s.t}, {"omega", s.omega}};
  j["H"] = s.H ? nlohmann::json(*s.H) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const HsiResiduals& r) {
  j = {{"bundle_hym", r.bundle_hym},
       {"bundle_type", r.bundle_type},
       {"anomaly", r.anomaly},
       {"conformally_balanced", r.conformally_balanced},
       {"tangent_hym", r.tangent_hym},
       {"tangent_type", r.tangent_type},
       {"bundle_trace", r.bundle_trace},
       {"max", r.max()}};
}

void to_json(nlohmann::json& j, const CollapseProfile& p) {
  j = {{"limit", to_string(p.limit_kind)},
       {"scaled_limit", {{"t", p.limit.t}, {"r2", p.limit.r2}, {"s2", p.limit.s2},
                         {"k2", p.limit.k2}}},
       {"exponents", {{"r2", p.r2_exponent}, {"s2", p.s2_exponent}, {"k2", p.k2_exponent}}},
       {"vanishes", {{"r2", p.r2_vanishes}, {"s2", p.s2_vanishes}, {"k2", p.k2_vanishes}}}};
}

void to_json(nlohmann::json& j, const Form& f) {
  j = nlohmann::json::array();
  for (int m = 0; m < kBasisSize; ++m) {
    const Complex c = f[static_cast<Mask>(m)];
    if (c == Complex{}) continue;
    j.push_back({{"mask", m}, {"re", c.real()}, {"im", c.imag()}});
  }
}

void from_json(const nlohmann::json& j, Form& f) {
  f = Form();
  for (const auto& term : j) {
    const int m = term.at("mask").get<int>();
    if (m < 0 || m >= kBasisSize) throw ParseError("form mask out of range");
    f[static_cast<Mask>(m)] += Complex(term.value("re", 0.0), term.value("im", 0.0));
  }
}

nlohmann::json trajectory_json(const std::vector<FlowState>& states,
                               const nlohmann::json& metadata) {
  return {{"metadata", metadata}, {"states", states}};
}

}  // namespace nilflow
