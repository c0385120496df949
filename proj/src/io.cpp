#include "sgrasp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "sgrasp/error.hpp"

namespace sgrasp::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw Error(ErrorCode::kParse, (where.empty() ? std::string("/") : where) + ": " + msg);
}

void checkKeys(const Json& j, const std::string& where,
               std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) fail(where + "/" + it.key(), "unknown field");
}

void checkSchema(const Json& j, const char* schema) {
  if (!j.contains("schema")) fail("/schema", std::string("missing, expected ") + schema);
  if (!j["schema"].is_string() || j["schema"].get<std::string>() != schema)
    fail("/schema", std::string("expected ") + schema);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

std::vector<double> numbers(const Json& j, const std::string& where, int size) {
  if (!j.is_array()) fail(where, "expected an array");
  if (size >= 0 && static_cast<int>(j.size()) != size)
    fail(where, "expected " + std::to_string(size) + " numbers");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], where + "/" + std::to_string(i)));
  return out;
}

Eigen::Vector2d vec2(const Json& j, const std::string& where) {
  const auto v = numbers(j, where, 2);
  return {v[0], v[1]};
}

Pose2 pose(const Json& j, const std::string& where) {
  const auto v = numbers(j, where, 3);
  return {v[0], v[1], v[2]};
}

Json vecJson(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json matJson(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vecJson(m.row(r).transpose()));
  return a;
}

}  // namespace

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string contentHash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json parseJson(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, what + ": " + e.what());
  }
}

Scene sceneFromJson(const Json& j) {
  checkKeys(j, "", {"schema", "units", "frame", "object_pose", "hand_pose",
                    "char_length", "nominal_force", "contacts"});
  checkSchema(j, kSceneSchema);
  if (j.contains("units")) {
    checkKeys(j["units"], "/units", {"length", "force", "angle"});
    const std::pair<const char*, const char*> expected[] = {
        {"length", "m"}, {"force", "N"}, {"angle", "rad"}};
    for (const auto& [key, unit] : expected) {
      if (j["units"].contains(key) && j["units"][key] != unit)
        fail(std::string("/units/") + key, std::string("only \"") + unit + "\" is supported");
    }
  }
  Scene s;
  if (j.contains("object_pose")) s.object_pose = pose(j["object_pose"], "/object_pose");
  if (j.contains("hand_pose")) s.hand_pose = pose(j["hand_pose"], "/hand_pose");
  bool world = false;
  if (j.contains("frame")) {
    if (j["frame"] == "world") world = true;
    else if (j["frame"] != "hand") fail("/frame", "expected \"hand\" or \"world\"");
  }
  if (j.contains("nominal_force")) s.nominal_force = number(j["nominal_force"], "/nominal_force");
  if (!j.contains("contacts") || !j["contacts"].is_array())
    fail("/contacts", "expected an array");
  const Pose2 to_hand = s.hand_pose.inverse();
  for (size_t i = 0; i < j["contacts"].size(); ++i) {
    const std::string where = "/contacts/" + std::to_string(i);
    const Json& c = j["contacts"][i];
    checkKeys(c, where, {"name", "owner", "point", "normal", "mu"});
    if (c.contains("name") && !c["name"].is_string()) fail(where + "/name", "expected a string");
    Contact ct;
    if (!c.contains("owner")) fail(where + "/owner", "missing");
    if (c["owner"] == "environment") ct.owner = Owner::kEnvironment;
    else if (c["owner"] == "hand") ct.owner = Owner::kHand;
    else fail(where + "/owner", "expected \"environment\" or \"hand\"");
    if (!c.contains("point")) fail(where + "/point", "missing");
    if (!c.contains("normal")) fail(where + "/normal", "missing");
    if (!c.contains("mu")) fail(where + "/mu", "missing");
    ct.point = vec2(c["point"], where + "/point");
    ct.normal = vec2(c["normal"], where + "/normal");
    ct.mu = number(c["mu"], where + "/mu");
    if (world) {
      ct.point = to_hand.transformPoint(ct.point);
      ct.normal = to_hand.transformVector(ct.normal);
      const double n = ct.normal.norm();
      if (std::abs(n - 1.0) < 1e-9) ct.normal /= n;
    }
    s.contacts.push_back(ct);
  }
  if (j.contains("char_length")) {
    s.char_length = number(j["char_length"], "/char_length");
  } else if (!s.contacts.empty()) {
    // Bounding dimension of the contact points.
    Eigen::Vector2d lo = s.contacts.front().point, hi = lo;
    for (const auto& c : s.contacts) {
      lo = lo.cwiseMin(c.point);
      hi = hi.cwiseMax(c.point);
    }
    s.char_length = (hi - lo).maxCoeff();
  }
  s.validate();
  return s;
}

Json sceneToJson(const Scene& scene) {
  Json j;
  j["schema"] = kSceneSchema;
  j["units"] = {{"length", "m"}, {"force", "N"}, {"angle", "rad"}};
  j["frame"] = "hand";
  j["object_pose"] = {scene.object_pose.x, scene.object_pose.y, scene.object_pose.theta};
  j["hand_pose"] = {scene.hand_pose.x, scene.hand_pose.y, scene.hand_pose.theta};
  j["char_length"] = scene.char_length;
  j["nominal_force"] = scene.nominal_force;
  j["contacts"] = Json::array();
  for (const auto& c : scene.contacts) {
    Json cj;
    cj["owner"] = c.owner == Owner::kHand ? "hand" : "environment";
    cj["point"] = {c.point.x(), c.point.y()};
    cj["normal"] = {c.normal.x(), c.normal.y()};
    cj["mu"] = c.mu;
    j["contacts"].push_back(cj);
  }
  return j;
}

GoalSpec goalFromJson(const Json& j, const Scene& scene) {
  checkKeys(j, "", {"schema", "G", "b", "object_twist", "object_angular_velocity",
                    "hold_object_static", "hand_angular_velocity", "hand_twist"});
  checkSchema(j, kGoalSchema);
  std::vector<Eigen::Matrix<double, 1, 6>> rows;
  std::vector<double> rhs;
  auto addRow = [&](std::initializer_list<std::pair<int, double>> entries, double b) {
    Eigen::Matrix<double, 1, 6> r = Eigen::Matrix<double, 1, 6>::Zero();
    for (const auto& [k, v] : entries) r(k) = v;
    rows.push_back(r);
    rhs.push_back(b);
  };
  if (j.contains("G") != j.contains("b")) fail(j.contains("G") ? "/b" : "/G", "G and b go together");
  if (j.contains("G")) {
    if (!j["G"].is_array()) fail("/G", "expected an array of rows");
    const auto b = numbers(j["b"], "/b", static_cast<int>(j["G"].size()));
    for (size_t r = 0; r < j["G"].size(); ++r) {
      const auto row = numbers(j["G"][r], "/G/" + std::to_string(r), 6);
      Eigen::Matrix<double, 1, 6> m;
      for (int k = 0; k < 6; ++k) m(k) = row[k];
      rows.push_back(m);
      rhs.push_back(b[r]);
    }
  }
  if (j.contains("object_twist")) {
    const auto v = numbers(j["object_twist"], "/object_twist", 3);
    for (int k = 0; k < 3; ++k) addRow({{k, 1.0}}, v[k]);
  }
  if (j.contains("object_angular_velocity"))
    addRow({{2, 1.0}}, number(j["object_angular_velocity"], "/object_angular_velocity"));
  if (j.contains("hold_object_static")) {
    if (!j["hold_object_static"].is_boolean()) fail("/hold_object_static", "expected a boolean");
    if (j["hold_object_static"].get<bool>()) {
      // World-frame object twist is zero: Adj_WH v_O = 0.
      const Eigen::Matrix3d adj = adjoint(scene.hand_pose);
      for (int r = 0; r < 3; ++r)
        addRow({{0, adj(r, 0)}, {1, adj(r, 1)}, {2, adj(r, 2)}}, 0.0);
    }
  }
  if (j.contains("hand_twist")) {
    const auto v = numbers(j["hand_twist"], "/hand_twist", 3);
    for (int k = 0; k < 3; ++k) addRow({{3 + k, 1.0}}, v[k]);
  }
  if (j.contains("hand_angular_velocity"))
    addRow({{5, 1.0}}, number(j["hand_angular_velocity"], "/hand_angular_velocity"));
  if (rows.empty()) fail("", "goal has no constraints");
  GoalSpec g;
  g.G.resize(static_cast<Eigen::Index>(rows.size()), 6);
  g.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    g.G.row(static_cast<Eigen::Index>(r)) = rows[r];
    g.b(static_cast<Eigen::Index>(r)) = rhs[r];
  }
  return g;
}

Json goalToJson(const GoalSpec& goal) {
  Json j;
  j["schema"] = kGoalSchema;
  j["G"] = matJson(goal.G);
  j["b"] = vecJson(goal.b);
  return j;
}

const char* toString(ParamRef::Kind kind) {
  switch (kind) {
    case ParamRef::Kind::kX: return "x";
    case ParamRef::Kind::kY: return "y";
    case ParamRef::Kind::kNormalAngle: return "normal_angle";
    case ParamRef::Kind::kMu: return "mu";
    case ParamRef::Kind::kArcLength: return "arc_length";
  }
  return "x";
}

ParamRef::Kind paramKindFromString(const std::string& s, const std::string& where) {
  for (auto k : {ParamRef::Kind::kX, ParamRef::Kind::kY, ParamRef::Kind::kNormalAngle,
                 ParamRef::Kind::kMu, ParamRef::Kind::kArcLength})
    if (s == toString(k)) return k;
  fail(where, "unknown parameter kind '" + s + "'");
}

ParamSpec paramsFromJson(const Json& j) {
  checkKeys(j, "", {"schema", "step", "iterations", "entries"});
  checkSchema(j, kParamsSchema);
  ParamSpec p;
  if (j.contains("step")) p.step = number(j["step"], "/step");
  if (!(p.step > 0)) fail("/step", "must be positive");
  if (j.contains("iterations")) {
    if (!j["iterations"].is_number_integer() || j["iterations"].get<int>() < 0)
      fail("/iterations", "expected a nonnegative integer");
    p.iterations = j["iterations"].get<int>();
  }
  if (!j.contains("entries") || !j["entries"].is_array()) fail("/entries", "expected an array");
  for (size_t i = 0; i < j["entries"].size(); ++i) {
    const std::string where = "/entries/" + std::to_string(i);
    const Json& e = j["entries"][i];
    checkKeys(e, where, {"kind", "contact", "path", "lo", "hi"});
    ParamEntry pe;
    if (!e.contains("kind") || !e["kind"].is_string()) fail(where + "/kind", "expected a string");
    pe.ref.kind = paramKindFromString(e["kind"].get<std::string>(), where + "/kind");
    if (!e.contains("contact") || !e["contact"].is_number_integer())
      fail(where + "/contact", "expected an integer");
    pe.ref.contact = e["contact"].get<int>();
    if (pe.ref.kind == ParamRef::Kind::kArcLength) {
      if (!e.contains("path") || !e["path"].is_array() || e["path"].size() < 2)
        fail(where + "/path", "arc_length needs a path of at least two points");
      for (size_t k = 0; k < e["path"].size(); ++k)
        pe.ref.path.push_back(vec2(e["path"][k], where + "/path/" + std::to_string(k)));
    } else if (e.contains("path")) {
      fail(where + "/path", "only arc_length entries take a path");
    }
    if (!e.contains("lo") || !e.contains("hi")) fail(where, "lo and hi bounds are required");
    pe.lo = number(e["lo"], where + "/lo");
    pe.hi = number(e["hi"], where + "/hi");
    if (pe.lo > pe.hi) fail(where, "lo exceeds hi");
    p.entries.push_back(pe);
  }
  return p;
}

Json angle(double radians) {
  return {{"rad", radians}, {"deg", radians * 180.0 / std::numbers::pi}};
}

Json coneJson(const Pcc& cone) {
  Json j;
  j["dim"] = cone.dim();
  j["zero"] = cone.isZero();
  j["pointed"] = cone.isPointed();
  j["generators"] = Json::array();
  for (int i = 0; i < cone.numGenerators(); ++i) {
    Json g;
    g["ray"] = vecJson(cone.generator(i));
    if (cone.labels()[i] >= 0) g["edge"] = cone.labels()[i];
    j["generators"].push_back(g);
  }
  if (cone.dim() == 2 && !cone.isZero()) {
    j["arcs"] = Json::array();
    for (const auto& a : coneArcs(cone))
      j["arcs"].push_back({{"start", angle(a.start)}, {"width", angle(a.width)}});
  }
  return j;
}

Json actionJson(const HfvcAction& action, const Scene& scene) {
  Json j;
  j["n_af"] = action.n_af;
  j["n_av"] = action.n_av;
  j["R_a"] = matJson(action.R_a);
  j["omega_av"] = vecJson(action.omega_av);
  j["eta_af"] = vecJson(action.eta_af);
  j["v_star"] = vecJson(action.v_star);
  // Commanded hand wrench from the force-controlled part, f_H = R_af' eta_af.
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  if (action.n_af > 0) w = action.forceRows().transpose() * action.eta_af;
  Eigen::Vector3d raw = w;
  raw(2) *= scene.char_length;
  j["force_command"] = {{"scaled", vecJson(w)}, {"raw", vecJson(raw)}};
  return j;
}

Json stampJson(const StampingResult& r, const Scene& scene) {
  Json j;
  j["mode"] = r.mode;
  j["hfvc"] = actionJson(r.action, scene);
  j["phi_g"] = angle(r.phi_g);
  j["phi_c"] = angle(r.phi_c);
  j["psi"] = angle(r.psi);
  j["k_f"] = r.k_f;
  j["disturbance_bound_N"] = r.disturbance();
  j["force_direction"] = vecJson(r.force_direction);
  Json geo;
  geo["goal_projection"] = coneJson(r.goal_projection);
  geo["competitors"] = Json::array();
  for (size_t k = 0; k < r.competitors.size(); ++k)
    geo["competitors"].push_back(
        {{"mode", r.competitors[k]}, {"projection", coneJson(r.competitor_projections[k])}});
  j["geometry"] = geo;
  j["filter"] = Json::array();
  for (const auto& d : r.ledger) j["filter"].push_back({{"mode", d.mode}, {"tag", d.tag}});
  return j;
}

Json controlJson(const ControlResult& r, const Scene& scene) {
  Json j;
  j["winner"] = stampJson(r.best, scene);
  j["ledger"] = Json::array();
  for (const auto& e : r.ledger) {
    Json le;
    le["mode"] = e.mode;
    le["tag"] = e.tag;
    le["phi_g"] = angle(e.phi_g);
    if (e.psi) le["psi"] = angle(*e.psi);
    if (!e.message.empty()) le["message"] = e.message;
    j["ledger"].push_back(le);
  }
  return j;
}

}  // namespace sgrasp::io
