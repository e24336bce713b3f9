#pragma once

#include <stdexcept>

namespace evigrid {

// Belief mass over the two-hypothesis occupancy frame.  The four focal
// elements are {occupied}, {empty}, the full frame (unknown), and the
// empty set (conflict).  A valid mass assignment is non-negative and
// sums to one.
struct BeliefMass {
  double occupied = 0.0;
  double empty = 0.0;
  double unknown = 1.0;
  double conflict = 0.0;

  static BeliefMass vacuous() { return BeliefMass{0.0, 0.0, 1.0, 0.0}; }

  double sum() const { return occupied + empty + unknown + conflict; }
  bool is_valid(double eps = 1e-9) const;
};

// Outcome bookkeeping for a single combination step: the conflict factor k,
// the weight of conflict Con = ln(1/(1-k)) (capped near k = 1), and the
// change in unnormalized conflict mass produced by the update.
struct ConflictObservation {
  double k = 0.0;
  double con = 0.0;
  double smets_empty_delta = 0.0;
  bool saturated = false;
};

struct CombineResult {
  BeliefMass mass;
  ConflictObservation conflict;
};

// Thrown by the normalized combination rule when the conflict factor
// reaches the saturation cap and renormalization is impossible.  Carries
// the capped observation so callers can still record it.
class SaturationError : public std::runtime_error {
 public:
  explicit SaturationError(const ConflictObservation& obs)
      : std::runtime_error("normalized combination saturated: k ~ 1"),
        observation(obs) {}
  ConflictObservation observation;
};

// k may not exceed this value inside a logarithm or a normalization.
inline constexpr double kConflictSaturationEps = 1e-9;

inline bool conflict_saturates(double k) {
  return k >= 1.0 - kConflictSaturationEps;
}

// Total mass product assigned to contradictory pairs of focal elements.
double conflict_k(const BeliefMass& a, const BeliefMass& b);

// Weight of conflict Con = ln(1/(1-k)), natural log, with k capped at
// 1 - kConflictSaturationEps.  Tolerates rounding slop just above one;
// throws std::domain_error for k genuinely outside [0,1].
double weight_of_conflict(double k);

// Dempster's normalized rule.  Inputs must be valid and carry no conflict
// mass.  Throws SaturationError when k >= 1 - kConflictSaturationEps.
CombineResult combine_dempster(const BeliefMass& a, const BeliefMass& b);

// Smets' unnormalized conjunctive rule.  Conflict mass accumulates in the
// output; the empty set absorbs.  smets_empty_delta in the returned
// observation is m_out(conflict) - a.conflict.
CombineResult combine_smets(const BeliefMass& a, const BeliefMass& b);

}  // namespace evigrid
