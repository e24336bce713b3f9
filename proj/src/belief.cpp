#include "evigrid/belief.hpp"

#include <cmath>

namespace evigrid {

bool BeliefMass::is_valid(double eps) const {
  if (!(occupied >= 0.0) || !(empty >= 0.0) || !(unknown >= 0.0) ||
      !(conflict >= 0.0)) {
    return false;
  }
  return std::abs(sum() - 1.0) <= eps;
}

namespace {

void require_valid(const BeliefMass& a, const BeliefMass& b) {
  if (!a.is_valid() || !b.is_valid()) {
    throw std::invalid_argument("belief mass is not a valid assignment");
  }
}

// All sums below pair terms so that swapping the operands swaps only the
// order of additions of identical products; IEEE addition and
// multiplication commute, so combination is bitwise commutative.
double raw_occupied(const BeliefMass& a, const BeliefMass& b) {
  return a.occupied * b.occupied +
         (a.occupied * b.unknown + a.unknown * b.occupied);
}

double raw_empty(const BeliefMass& a, const BeliefMass& b) {
  return a.empty * b.empty + (a.empty * b.unknown + a.unknown * b.empty);
}

}  // namespace

double conflict_k(const BeliefMass& a, const BeliefMass& b) {
  const double cross = a.occupied * b.empty + a.empty * b.occupied;
  const double absorb =
      a.conflict * (b.occupied + b.empty + b.unknown) +
      b.conflict * (a.occupied + a.empty + a.unknown);
  return cross + absorb + a.conflict * b.conflict;
}

double weight_of_conflict(double k) {
  // Mass products of eps-valid assignments can round to a hair above one.
  if (k > 1.0 && k <= 1.0 + 1e-8) k = 1.0;
  if (!(k >= 0.0 && k <= 1.0)) {
    throw std::domain_error("conflict factor outside [0, 1]");
  }
  const double capped =
      k > 1.0 - kConflictSaturationEps ? 1.0 - kConflictSaturationEps : k;
  return -std::log1p(-capped);
}

CombineResult combine_dempster(const BeliefMass& a, const BeliefMass& b) {
  require_valid(a, b);
  if (a.conflict != 0.0 || b.conflict != 0.0) {
    throw std::invalid_argument(
        "normalized combination requires conflict-free inputs");
  }
  const double k = conflict_k(a, b);
  ConflictObservation obs;
  obs.k = k;
  obs.con = weight_of_conflict(k);
  obs.smets_empty_delta = 0.0;
  obs.saturated = conflict_saturates(k);
  if (obs.saturated) {
    throw SaturationError(obs);
  }
  const double o = raw_occupied(a, b);
  const double e = raw_empty(a, b);
  const double u = a.unknown * b.unknown;
  // Normalize by the computed surviving mass rather than by 1 - k: the two
  // agree to rounding, but dividing by the actual sum keeps the stored
  // state summing to one at machine precision no matter how many updates a
  // cell accumulates.
  const double inv = 1.0 / (o + (e + u));
  BeliefMass out;
  out.occupied = o * inv;
  out.empty = e * inv;
  out.unknown = u * inv;
  out.conflict = 0.0;
  return CombineResult{out, obs};
}

CombineResult combine_smets(const BeliefMass& a, const BeliefMass& b) {
  require_valid(a, b);
  const double k = conflict_k(a, b);
  BeliefMass out;
  out.occupied = raw_occupied(a, b);
  out.empty = raw_empty(a, b);
  out.unknown = a.unknown * b.unknown;
  out.conflict = k;
  ConflictObservation obs;
  obs.k = k;
  obs.con = weight_of_conflict(k);
  obs.smets_empty_delta = out.conflict - a.conflict;
  obs.saturated = conflict_saturates(k);
  return CombineResult{out, obs};
}

}  // namespace evigrid
