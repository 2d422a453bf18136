#include "kgyro/json_io.hpp"

#include <fstream>

#include "kgyro/errors.hpp"

namespace kgyro {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw IOFailure("parse error in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOFailure("cannot open " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IOFailure("write failed on " + path);
}

Params params_from_json(const json& j) {
  if (!j.contains("a") || !j.contains("b") || !j.contains("lambda"))
    throw Error("params record needs fields a, b, lambda");
  return Params(j.at("a").get<double>(), j.at("b").get<double>(),
                j.at("lambda").get<double>());
}

json params_to_json(const Params& p) {
  return json{{"a", p.a()}, {"b", p.b()}, {"lambda", p.lambda()}};
}

namespace {

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error("expected a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json vec3_to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

PhaseState state_from_json(const json& j) {
  PhaseState s;
  s.omega = vec3_from_json(j.at("omega"));
  s.alpha = vec3_from_json(j.at("alpha"));
  s.beta = vec3_from_json(j.at("beta"));
  return s;
}

json state_to_json(const PhaseState& s) {
  return json{{"omega", vec3_to_json(s.omega)},
              {"alpha", vec3_to_json(s.alpha)},
              {"beta", vec3_to_json(s.beta)}};
}

DGParams dgparams_from_json(const json& j) {
  DGParams p;
  const auto& I = j.at("inertia");
  const auto& A = j.at("A");
  const auto& C = j.at("C");
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) p.inertia(r, c) = I.at(r).at(c).get<double>();
  p.gyro = vec3_from_json(j.at("gyro"));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) p.A(r, c) = A.at(r).at(c).get<double>();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) p.C(r, c) = C.at(r).at(c).get<double>();
  return p;
}

json dgparams_to_json(const DGParams& p) {
  json I = json::array(), A = json::array(), C = json::array();
  for (int r = 0; r < 3; ++r)
    I.push_back(json::array({p.inertia(r, 0), p.inertia(r, 1), p.inertia(r, 2)}));
  for (int r = 0; r < 3; ++r)
    A.push_back(json::array({p.A(r, 0), p.A(r, 1)}));
  for (int r = 0; r < 2; ++r)
    C.push_back(json::array({p.C(r, 0), p.C(r, 1)}));
  return json{{"inertia", I}, {"gyro", vec3_to_json(p.gyro)}, {"A", A},
              {"C", C}};
}

}  // namespace kgyro
