#pragma once

// JSON scene, goal and parameter files, and report emission.
//
// Files carry a schema id ("sgrasp.scene/1", "sgrasp.goal/1",
// "sgrasp.params/1"); unknown keys are rejected with a JSON pointer to the
// offending field. Parse problems raise Error(kParse); a well-formed scene
// that violates a scene invariant raises Error(kInvalidScene).

#include <cstdint>
#include <string>

#include "json.hpp"

#include "sgrasp/control.hpp"
#include "sgrasp/hfvc.hpp"
#include "sgrasp/optimize.hpp"
#include "sgrasp/stamping.hpp"

namespace sgrasp::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSceneSchema = "sgrasp.scene/1";
inline constexpr const char* kGoalSchema = "sgrasp.goal/1";
inline constexpr const char* kParamsSchema = "sgrasp.params/1";
inline constexpr const char* kReportSchema = "sgrasp.report/1";

std::string readFile(const std::string& path);
// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string contentHash(const std::string& bytes);

Json parseJson(const std::string& text, const std::string& what);

Scene sceneFromJson(const Json& j);
Json sceneToJson(const Scene& scene);

GoalSpec goalFromJson(const Json& j, const Scene& scene);
Json goalToJson(const GoalSpec& goal);

ParamSpec paramsFromJson(const Json& j);
ParamRef::Kind paramKindFromString(const std::string& s, const std::string& where);
const char* toString(ParamRef::Kind kind);

// Report fragments.
Json angle(double radians);
Json coneJson(const Pcc& cone);
Json actionJson(const HfvcAction& action, const Scene& scene);
Json stampJson(const StampingResult& r, const Scene& scene);
Json controlJson(const ControlResult& r, const Scene& scene);

}  // namespace sgrasp::io
