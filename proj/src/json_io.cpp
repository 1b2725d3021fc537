#include "json_io.hpp"

#include <cmath>
#include <limits>

namespace bz {

namespace {

Eigen::VectorXd vec_from(const json& j, int D, const char* name) {
  require(j.is_array() && static_cast<int>(j.size()) == D, ErrorKind::InvalidArgument,
          std::string("maxwellian.") + name + ": expected an array of length D");
  Eigen::VectorXd v(D);
  for (int i = 0; i < D; ++i) v[i] = j[i].get<double>();
  return v;
}

}  // namespace

json params_to_json(const Params& p) {
  json B = json::array();
  for (int i = 0; i < p.D; ++i) {
    json row = json::array();
    for (int k = 0; k < p.D; ++k) row.push_back(p.B(i, k));
    B.push_back(row);
  }
  json x0 = json::array(), v0 = json::array();
  for (int i = 0; i < p.D; ++i) {
    x0.push_back(p.x0[i]);
    v0.push_back(p.v0[i]);
  }
  return json{{"D", p.D}, {"m", p.m}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"B", B}, {"x0", x0}, {"v0", v0}};
}

Params params_from_json(const json& j) {
  require(j.is_object(), ErrorKind::InvalidArgument, "maxwellian: expected an object");
  Params p = Params::unit(j.value("D", 2));
  p.m = j.value("m", p.m);
  p.a = j.value("a", p.a);
  p.b = j.value("b", p.b);
  p.c = j.value("c", p.c);
  if (j.contains("B")) {
    const json& B = j["B"];
    require(B.is_array() && static_cast<int>(B.size()) == p.D, ErrorKind::InvalidArgument,
            "maxwellian.B: expected a D x D array");
    for (int i = 0; i < p.D; ++i) {
      require(B[i].is_array() && static_cast<int>(B[i].size()) == p.D, ErrorKind::InvalidArgument,
              "maxwellian.B: expected a D x D array");
      for (int k = 0; k < p.D; ++k) p.B(i, k) = B[i][k].get<double>();
    }
  }
  if (j.contains("x0")) p.x0 = vec_from(j["x0"], p.D, "x0");
  if (j.contains("v0")) p.v0 = vec_from(j["v0"], p.D, "v0");
  return p;
}

json grid_to_json(const PhaseGrid& g) {
  return json{{"D", g.D}, {"Nv", g.Nv}, {"Vmax", g.Vmax}, {"Nx", g.Nx}, {"Xmax", g.Xmax}};
}

PhaseGrid grid_from_json(const json& j) {
  PhaseGrid g;
  g.D = j.at("D").get<int>();
  g.Nv = j.at("Nv").get<int>();
  g.Vmax = j.at("Vmax").get<double>();
  g.Nx = j.at("Nx").get<int>();
  g.Xmax = j.at("Xmax").get<double>();
  return g;
}

json kernel_to_json(const KernelSpec& k) {
  json j{{"D", k.D}, {"beta", k.beta}, {"bbar", k.bbar}};
  if (k.tabulated)
    j["bhat"] = json{{"cosines", k.cosines}, {"weights", k.values}};
  else
    j["bhat"] = "constant:" + json(k.bhat_const).dump();
  return j;
}

KernelSpec kernel_from_json(const json& j, int D) {
  require(j.is_object(), ErrorKind::InvalidArgument, "kernel: expected an object");
  const int kd = j.value("D", D);
  require(kd == D, ErrorKind::InvalidArgument, "kernel.D: does not match maxwellian.D");
  const double beta = j.value("beta", 0.0);
  KernelSpec k;
  const json bh = j.value("bhat", json("constant:1"));
  if (bh.is_string()) {
    const std::string s = bh.get<std::string>();
    require(s.rfind("constant:", 0) == 0, ErrorKind::InvalidArgument,
            "kernel.bhat: expected \"constant:<value>\" or {cosines, weights}");
    double v = 0.0;
    try {
      v = std::stod(s.substr(9));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "kernel.bhat: cannot parse the constant in \"" + s + "\"");
    }
    k = KernelSpec::constant(D, beta, v);
  } else {
    require(bh.is_object() && bh.contains("cosines") && bh.contains("weights"), ErrorKind::InvalidArgument,
            "kernel.bhat: expected \"constant:<value>\" or {cosines, weights}");
    k = KernelSpec::table(D, beta, bh["cosines"].get<Vec>(), bh["weights"].get<Vec>());
  }
  if (j.contains("bbar")) {
    const double stored = j["bbar"].get<double>();
    require(std::abs(stored - k.bbar) <= 1e-8 * std::abs(k.bbar), ErrorKind::InvalidArgument,
            "kernel.bbar: stored value " + std::to_string(stored) + " differs from recomputed " +
                std::to_string(k.bbar));
  }
  return k;
}

json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_or_inf(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    fail(ErrorKind::InvalidArgument, "expected a number or \"inf\", got \"" + s + "\"");
  }
  return j.get<double>();
}

}  // namespace bz
