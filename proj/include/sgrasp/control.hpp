#pragma once

// Mode selection: stamp every robust candidate mode and keep the one with
// the largest combined margin.

#include <optional>
#include <string>
#include <vector>

#include "sgrasp/stamping.hpp"

namespace sgrasp {

struct LedgerEntry {
  ContactMode mode;
  // winner | lower-psi | f-infeasible | zero-margin | error:<Code>
  std::string tag;
  double phi_g = 0;
  std::optional<double> psi;
  std::string message;
};

struct ControlResult {
  StampingResult best;
  std::vector<LedgerEntry> ledger;  // every enumerated mode, lexicographic
};

// Throws kNoFeasibleMode when no mode can be stamped.
ControlResult selectMode(const Scene& scene, const GoalSpec& goal);

}  // namespace sgrasp
