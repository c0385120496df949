// sgrasp: mode enumeration, wrench stamping, mode selection, geometry
// optimization and parameter sweeps for planar shared grasps.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sgrasp/control.hpp"
#include "sgrasp/error.hpp"
#include "sgrasp/io.hpp"
#include "sgrasp/modes.hpp"
#include "sgrasp/optimize.hpp"
#include "sgrasp/parallel.hpp"
#include "sgrasp/stamping.hpp"
#include "sgrasp/verify.hpp"

namespace {

using sgrasp::Error;
using sgrasp::ErrorCode;
using sgrasp::io::Json;

int exitCode(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return 2;
    case ErrorCode::kInvalidScene:
    case ErrorCode::kTooManyContacts: return 3;
    case ErrorCode::kCrash: return 4;
    case ErrorCode::kIndistinguishable: return 5;
    case ErrorCode::kGoalInfeasible:
    case ErrorCode::kGoalNotVelocityControllable:
    case ErrorCode::kFInfeasibleGoal:
    case ErrorCode::kDegenerateMargin:
    case ErrorCode::kDegenerateStart: return 6;
    case ErrorCode::kNoFeasibleMode: return 7;
    default: return 1;
  }
}

struct Options {
  bool json = false;
  bool timing = false;
  int threads = 0;
  std::string scene;
  std::string goal;
  std::string mode;
  std::optional<double> kf;
  std::string params;
  std::optional<int> iters;
  std::optional<double> step;
  std::string trace;
  std::string out_scene;
  std::vector<std::string> sweep_params;
  std::vector<std::string> ranges;
  int samples = 1000;
  std::uint64_t seed = 1;
};

struct Input {
  std::string path;
  std::string bytes;
  Json json;
};

Input load(const std::string& path, const char* what) {
  Input in;
  in.path = path;
  in.bytes = sgrasp::io::readFile(path);
  in.json = sgrasp::io::parseJson(in.bytes, std::string(what) + " " + path);
  return in;
}

Json echo(const Input& in) { return {{"path", in.path}, {"fnv1a64", sgrasp::io::contentHash(in.bytes)}}; }

// Replace the target in one step so readers never see a partial file.
void writeAtomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kParse, "cannot write " + path);
    out << text;
    if (!out.flush()) throw Error(ErrorCode::kParse, "cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string deg(double rad) { return fmt("%.4f", rad) + " rad (" + fmt("%.2f", rad * 57.29577951308232) + " deg)"; }

std::string csvNumber(double v) { return fmt("%.17g", v); }

struct Output {
  Json report;
  std::string text;
};

Json header(const char* command) {
  Json j;
  j["schema"] = sgrasp::io::kReportSchema;
  j["command"] = command;
  return j;
}

std::string vecText(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt("%.6g", v(i) + 0.0);
  return s + "]";
}

std::string stampText(const sgrasp::StampingResult& r) {
  std::ostringstream o;
  o << "mode " << r.mode << "\n";
  o << "n_af " << r.action.n_af << ", n_av " << r.action.n_av << "\n";
  for (int i = 0; i < 3; ++i) o << "R_a[" << i << "] " << vecText(r.action.R_a.row(i).transpose()) << "\n";
  o << "omega_av " << vecText(r.action.omega_av) << "\n";
  o << "eta_af " << vecText(r.action.eta_af) << "\n";
  o << "phi_g " << deg(r.phi_g) << "\n";
  o << "phi_c " << deg(r.phi_c) << "\n";
  o << "psi " << deg(r.psi) << "\n";
  o << "K_F*psi " << fmt("%.6g", r.disturbance()) << " N\n";
  o << "competitors " << r.competitors.size() << "\n";
  return o.str();
}

// Motion class of one side of the grasp: fixed, sliding, separating or mixed.
std::string motionClass(const sgrasp::Scene& scene, const sgrasp::ContactMode& mode,
                        sgrasp::Owner owner) {
  bool fixed = false, sliding = false, separating = false;
  for (int i = 0; i < scene.numContacts(); ++i) {
    if (scene.contacts[i].owner != owner) continue;
    fixed |= mode[i] == 'f';
    sliding |= mode[i] == 'l' || mode[i] == 'r';
    separating |= mode[i] == 's';
  }
  if (fixed + sliding + separating > 1) return "mixed";
  return fixed ? "fixed" : sliding ? "sliding" : "separating";
}

Output cmdModes(const Options& opt) {
  const Input scene_in = load(opt.scene, "scene");
  const sgrasp::Scene scene = sgrasp::io::sceneFromJson(scene_in.json);
  const sgrasp::ModeTable table = sgrasp::analyzeModes(scene);

  Output out;
  out.report = header("modes");
  out.report["inputs"] = {{"scene", echo(scene_in)}};
  Json list = Json::array();
  int positive = 0, feasible = 0;
  std::ostringstream text;
  for (size_t i = 0; i < table.modes.size(); ++i) {
    const auto& m = table.modes[i];
    Json e;
    e["mode"] = m.mode;
    const std::string env = motionClass(scene, m.mode, sgrasp::Owner::kEnvironment);
    const std::string hand = motionClass(scene, m.mode, sgrasp::Owner::kHand);
    e["kinematic"] = {{"environment", env}, {"hand", hand}};
    e["intersects"] = m.intersects;
    e["f_feasible"] = m.fFeasible();
    e["phi_g"] = sgrasp::io::angle(m.phi_g);
    list.push_back(e);
    positive += m.phi_g > sgrasp::kMarginEps;
    feasible += m.fFeasible();
    char cls[48];
    std::snprintf(cls, sizeof(cls), "env %-10s hand %-10s", env.c_str(), hand.c_str());
    text << m.mode << "  " << cls << (m.fFeasible() ? "F-feasible  " : "            ")
         << deg(m.phi_g) << "\n";
  }
  out.report["results"] = {{"num_modes", table.modes.size()},
                           {"num_positive_margin", positive},
                           {"num_f_feasible", feasible},
                           {"modes", list}};
  text << table.modes.size() << " modes, " << positive << " with positive margin\n";
  out.text = text.str();
  return out;
}

Output cmdStamp(const Options& opt) {
  const Input scene_in = load(opt.scene, "scene");
  const Input goal_in = load(opt.goal, "goal");
  sgrasp::Scene scene = sgrasp::io::sceneFromJson(scene_in.json);
  if (opt.kf) scene.nominal_force = *opt.kf;
  const sgrasp::GoalSpec goal = sgrasp::io::goalFromJson(goal_in.json, scene);
  sgrasp::validateMode(scene, opt.mode);
  const sgrasp::StampingResult r = sgrasp::wrenchStamp(scene, opt.mode, goal);

  Output out;
  out.report = header("stamp");
  out.report["inputs"] = {{"scene", echo(scene_in)}, {"goal", echo(goal_in)}, {"mode", opt.mode}, {"k_f", scene.nominal_force}};
  out.report["results"] = sgrasp::io::stampJson(r, scene);
  out.text = stampText(r);
  return out;
}

Output cmdControl(const Options& opt) {
  const Input scene_in = load(opt.scene, "scene");
  const Input goal_in = load(opt.goal, "goal");
  sgrasp::Scene scene = sgrasp::io::sceneFromJson(scene_in.json);
  if (opt.kf) scene.nominal_force = *opt.kf;
  const sgrasp::GoalSpec goal = sgrasp::io::goalFromJson(goal_in.json, scene);
  const sgrasp::ControlResult r = sgrasp::selectMode(scene, goal);

  Output out;
  out.report = header("control");
  out.report["inputs"] = {{"scene", echo(scene_in)}, {"goal", echo(goal_in)}, {"k_f", scene.nominal_force}};
  out.report["results"] = sgrasp::io::controlJson(r, scene);
  std::ostringstream text;
  for (const auto& e : r.ledger) {
    text << e.mode << "  " << e.tag;
    if (e.psi) text << "  psi " << deg(*e.psi);
    text << "\n";
  }
  text << "winner\n" << stampText(r.best);
  out.text = text.str();
  return out;
}

Output cmdOptimize(const Options& opt) {
  const Input scene_in = load(opt.scene, "scene");
  const Input params_in = load(opt.params, "params");
  const sgrasp::Scene scene = sgrasp::io::sceneFromJson(scene_in.json);
  sgrasp::ParamSpec spec = sgrasp::io::paramsFromJson(params_in.json);
  if (opt.iters) spec.iterations = *opt.iters;
  if (opt.step) spec.step = *opt.step;
  sgrasp::validateMode(scene, opt.mode);
  const sgrasp::OptTrace trace = sgrasp::optimizeGeometry(scene, opt.mode, spec);

  std::string csv = "iteration";
  for (const auto& e : spec.entries) csv += "," + e.ref.name();
  csv += ",phi_g,case,screws,gradient_norm\n";
  for (const auto& s : trace.steps) {
    csv += std::to_string(s.iteration);
    for (double p : s.params) csv += "," + csvNumber(p);
    csv += "," + csvNumber(s.phi_g) + "," + sgrasp::ToString(s.kind) + ",";
    for (size_t k = 0; k < s.screws.size(); ++k) csv += (k ? " " : "") + std::to_string(s.screws[k]);
    csv += "," + csvNumber(s.gradient_norm) + "\n";
  }
  if (!opt.trace.empty()) writeAtomically(opt.trace, csv);
  const Json final_scene = sgrasp::io::sceneToJson(trace.final_scene);
  if (!opt.out_scene.empty()) writeAtomically(opt.out_scene, final_scene.dump(2) + "\n");

  Output out;
  out.report = header("optimize");
  out.report["inputs"] = {{"scene", echo(scene_in)}, {"params", echo(params_in)}, {"mode", opt.mode},
                          {"iterations", spec.iterations}, {"step", spec.step}};
  Json r;
  r["initial_phi_g"] = sgrasp::io::angle(trace.steps.front().phi_g);
  r["final_phi_g"] = sgrasp::io::angle(trace.steps.back().phi_g);
  r["stop_reason"] = trace.stop_reason;
  r["steps"] = trace.steps.size();
  Json params = Json::object();
  for (size_t k = 0; k < spec.entries.size(); ++k)
    params[spec.entries[k].ref.name()] = trace.final_params[k];
  r["final_params"] = params;
  r["final_scene"] = final_scene;
  out.report["results"] = r;
  std::ostringstream text;
  text << "initial phi_g " << deg(trace.steps.front().phi_g) << "\n"
       << "final phi_g   " << deg(trace.steps.back().phi_g) << "\n"
       << "steps " << trace.steps.size() << " (" << trace.stop_reason << ")\n";
  for (const auto& [name, value] : params.items()) text << name << " = " << fmt("%.6g", value.get<double>()) << "\n";
  out.text = text.str();
  return out;
}

std::pair<std::string, std::string> splitPair(const std::string& s, const char* flag) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::kParse, std::string(flag) + " expects a:b, got '" + s + "'");
  return {s.substr(0, colon), s.substr(colon + 1)};
}

double parseNumber(const std::string& s, const char* flag) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParse, std::string(flag) + ": not a number '" + s + "'");
}

Output cmdSweep(const Options& opt) {
  const Input scene_in = load(opt.scene, "scene");
  const Input goal_in = load(opt.goal, "goal");
  sgrasp::Scene scene = sgrasp::io::sceneFromJson(scene_in.json);
  if (opt.kf) scene.nominal_force = *opt.kf;
  const sgrasp::GoalSpec goal = sgrasp::io::goalFromJson(goal_in.json, scene);
  sgrasp::validateMode(scene, opt.mode);
  if (opt.ranges.size() != 1 && opt.ranges.size() != opt.sweep_params.size())
    throw Error(ErrorCode::kParse, "--range must be given once or once per --param");
  if (opt.samples < 1) throw Error(ErrorCode::kParse, "--samples must be positive");

  std::vector<sgrasp::SweepAxis> axes;
  for (size_t k = 0; k < opt.sweep_params.size(); ++k) {
    const auto [kind, contact] = splitPair(opt.sweep_params[k], "--param");
    sgrasp::SweepAxis axis;
    axis.ref.kind = sgrasp::io::paramKindFromString(kind, "--param");
    if (axis.ref.kind == sgrasp::ParamRef::Kind::kArcLength)
      throw Error(ErrorCode::kParse, "--param: arc_length needs a path; sweep x/y/normal_angle/mu");
    axis.ref.contact = static_cast<int>(parseNumber(contact, "--param"));
    if (axis.ref.contact < 0 || axis.ref.contact >= scene.numContacts())
      throw Error(ErrorCode::kParse, "--param: contact index out of range");
    const auto [lo, hi] = splitPair(opt.ranges[opt.ranges.size() == 1 ? 0 : k], "--range");
    axis.lo = parseNumber(lo, "--range");
    axis.hi = parseNumber(hi, "--range");
    if (axis.lo > axis.hi) throw Error(ErrorCode::kParse, "--range: lo exceeds hi");
    axes.push_back(axis);
  }

  const sgrasp::StampingResult stamp = sgrasp::wrenchStamp(scene, opt.mode, goal);
  const auto samples = sgrasp::sweepParameters(scene, opt.mode, stamp.action, axes, opt.samples, opt.seed);

  std::string csv = "sample";
  for (const auto& a : axes) csv += "," + a.ref.name();
  csv += ",phi_g,phi_c,psi,positive\n";
  int positive = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    csv += std::to_string(i);
    for (double v : samples[i].values) csv += "," + csvNumber(v);
    csv += "," + csvNumber(samples[i].phi_g) + "," + csvNumber(samples[i].phi_c) + "," +
           csvNumber(samples[i].psi) + "," + (samples[i].positive() ? "1" : "0") + "\n";
    positive += samples[i].positive();
  }

  Output out;
  out.report = header("sweep");
  Json axes_json = Json::array();
  for (const auto& a : axes) axes_json.push_back({{"param", a.ref.name()}, {"lo", a.lo}, {"hi", a.hi}});
  out.report["inputs"] = {{"scene", echo(scene_in)}, {"goal", echo(goal_in)}, {"mode", opt.mode},
                          {"axes", axes_json}, {"samples", opt.samples}, {"seed", opt.seed}};
  Json rows = Json::array();
  for (const auto& s : samples)
    rows.push_back({{"values", s.values}, {"phi_g", s.phi_g}, {"phi_c", s.phi_c}, {"psi", s.psi}});
  out.report["results"] = {{"nominal_psi", sgrasp::io::angle(stamp.psi)},
                           {"num_positive", positive},
                           {"samples", rows}};
  out.text = csv;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-grasp mode analysis and wrench stamping"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.json, "Emit the JSON report on stdout");
  app.add_flag("--timing", opt.timing, "Include wall-clock timing in the report");
  app.add_option("--threads", opt.threads, "Worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);

  auto* modes = app.add_subcommand("modes", "Enumerate contact modes with their geometric margin");
  modes->add_option("scene", opt.scene, "Scene file")->required();

  auto* stamp = app.add_subcommand("stamp", "Wrench stamping for one mode");
  stamp->add_option("scene", opt.scene, "Scene file")->required();
  stamp->add_option("--mode", opt.mode, "Goal contact mode, one letter of f/l/r/s per contact")->required();
  stamp->add_option("--goal", opt.goal, "Goal file")->required();
  stamp->add_option("--kf", opt.kf, "Force magnitude K_F (N)");

  auto* control = app.add_subcommand("control", "Pick the mode with the largest stability margin");
  control->add_option("scene", opt.scene, "Scene file")->required();
  control->add_option("--goal", opt.goal, "Goal file")->required();
  control->add_option("--kf", opt.kf, "Force magnitude K_F (N)");

  auto* optimize = app.add_subcommand("optimize", "Gradient ascent of the geometric margin");
  optimize->add_option("scene", opt.scene, "Scene file")->required();
  optimize->add_option("--mode", opt.mode, "Contact mode")->required();
  optimize->add_option("--params", opt.params, "Parameter file")->required();
  optimize->add_option("--iters", opt.iters, "Iterations (overrides the parameter file)");
  optimize->add_option("--step", opt.step, "Step size (overrides the parameter file)");
  optimize->add_option("--trace", opt.trace, "Write the per-iteration trace as CSV");
  optimize->add_option("--out-scene", opt.out_scene, "Write the optimized scene");

  auto* sweep = app.add_subcommand("sweep", "Random parameter sweep of a fixed stamped action");
  sweep->add_option("scene", opt.scene, "Scene file")->required();
  sweep->add_option("--mode", opt.mode, "Contact mode")->required();
  sweep->add_option("--goal", opt.goal, "Goal file")->required();
  sweep->add_option("--kf", opt.kf, "Force magnitude K_F (N)");
  sweep->add_option("--param", opt.sweep_params, "kind:contact, kind in x|y|normal_angle|mu")->required();
  sweep->add_option("--range", opt.ranges, "lo:hi, once for all axes or once per --param")->required();
  sweep->add_option("--samples", opt.samples, "Number of samples");
  sweep->add_option("--seed", opt.seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (opt.threads > 0) sgrasp::setDefaultThreads(opt.threads);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Output out;
    if (command == "modes") out = cmdModes(opt);
    else if (command == "stamp") out = cmdStamp(opt);
    else if (command == "control") out = cmdControl(opt);
    else if (command == "optimize") out = cmdOptimize(opt);
    else out = cmdSweep(opt);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string text;
    if (opt.json) {
      if (opt.timing) out.report["timing"] = {{"seconds", seconds}};
      text = out.report.dump(2) + "\n";
    } else {
      text = out.text;
      if (opt.timing) text += "time " + fmt("%.3f", seconds) + " s\n";
    }
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  } catch (const Error& e) {
    std::cerr << "sgrasp " << command << ": " << sgrasp::ToString(e.code()) << ": " << e.what() << "\n";
    if (opt.json) {
      Json report = header(command.c_str());
      report["error"] = {{"code", sgrasp::ToString(e.code())}, {"message", e.what()}};
      std::cout << report.dump(2) << "\n";
    }
    return exitCode(e.code());
  } catch (const std::exception& e) {
    std::cerr << "sgrasp " << command << ": " << e.what() << "\n";
    return 1;
  }
}
