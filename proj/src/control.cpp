#include "sgrasp/control.hpp"

#include "sgrasp/error.hpp"
#include "sgrasp/parallel.hpp"

namespace sgrasp {

ControlResult selectMode(const Scene& scene, const GoalSpec& goal) {
  const ModeTable table = analyzeModes(scene);
  const int n = static_cast<int>(table.modes.size());
  std::vector<std::optional<StampingResult>> results(static_cast<size_t>(n));
  ControlResult out;
  out.ledger.resize(static_cast<size_t>(n));
  parallelFor(n, [&](int k) {
    const ModeAnalysis& a = table.modes[k];
    LedgerEntry& e = out.ledger[k];
    e.mode = a.mode;
    e.phi_g = a.phi_g;
    if (!a.intersects && a.mode != uniformMode(scene, 's')) {
      e.tag = "f-infeasible";
      return;
    }
    if (!a.fFeasible() && a.mode != uniformMode(scene, 's')) {
      e.tag = "zero-margin";
      return;
    }
    try {
      results[k] = wrenchStamp(scene, table, a.mode, goal);
      e.psi = results[k]->psi;
    } catch (const Error& err) {
      e.tag = std::string("error:") + ToString(err.code());
      e.message = err.what();
    }
  });

  int best = -1;
  for (int k = 0; k < n; ++k) {
    if (!results[k]) continue;
    if (best < 0 || results[k]->psi > results[best]->psi) best = k;
  }
  if (best < 0)
    throw Error(ErrorCode::kNoFeasibleMode, "no contact mode can realize the goal");
  for (int k = 0; k < n; ++k)
    if (results[k]) out.ledger[k].tag = k == best ? "winner" : "lower-psi";
  out.best = *results[best];
  return out;
}

}  // namespace sgrasp
