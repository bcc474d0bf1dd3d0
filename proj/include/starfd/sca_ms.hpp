#pragma once

#include <string_view>
#include <vector>

#include "starfd/sca_es.hpp"

namespace starfd::sca {

// kDelta penalizes delta - delta^2 on the amplitude bounds. kAmplitude
// penalizes delta - |s|^2, which also charges for |s| < delta and equals
// |s| - |s|^2 once the bounds are tight.
enum class PenaltyForm { kDelta, kAmplitude };

struct PenaltySettings {
  PenaltyForm form = PenaltyForm::kDelta;
  double mu0 = 1.0;
  double omega = 10.0;
  double eps2 = 1e-3;
  int max_outer = 8;

  void validate() const;
};

// delta_r / delta_t upper-bound the amplitudes of s_r / s_t.
struct MsIterate {
  StarProfile profile;
  RVec delta_r;
  RVec delta_t;
  double mu = 1.0;
  PenaltyForm form = PenaltyForm::kDelta;
};

enum class Mode { kReflect, kTransmit };

struct MsRound {
  double mu = 0.0;
  // w'R(s) - mu * penalty after each accepted inner iterate,
  // starting with the round's entry point.
  std::vector<double> penalized_trajectory;
  std::vector<double> wsr_trajectory;
  int inner_iterations = 0;
  double binariness = 0.0;  // max(|s| - |s|^2) at the end of the round
};

struct MsReport {
  StarProfile final_profile;      // binarized unless qos_warning is set
  StarProfile pre_binarize_profile;
  std::vector<Mode> mode_assignment;
  std::vector<MsRound> rounds;
  int outer_rounds = 0;
  int inner_iterations_total = 0;
  ScaStatus status = ScaStatus::kMaxIter;
  // Set when the binarized profile breaks QoS; final_profile is then the
  // pre-binarize profile.
  bool qos_warning = false;
  RatePair rates;
  double weighted_sum_rate = 0.0;
};

// delta_i^2 + (1 - 2 delta_i) delta, the tangent upper bound of delta - delta^2.
double penalty_bound(double delta, double delta_i);

// max over elements and modes of |s| - |s|^2.
double binariness(const StarProfile& p);

// Variables [profile (4M); delta_r (M); delta_t (M); R1~; R2~]. Constraint order:
// two rate caps, two QoS rows, M delta balls; cones |s_r,m| <= delta_r,m then
// |s_t,m| <= delta_t,m.
convex::ConvexProgram assemble_p4(const BoundPoint& pt, const MsIterate& it,
                                  const CompositeChannels& ch, const LinkBudget& b,
                                  const ScaSettings& settings);

// w'R(s) - mu * (penalty sum for it.form)
double penalized_objective(const MsIterate& it, const CompositeChannels& ch, const LinkBudget& b,
                           const Weights& w);

struct InnerResult {
  MsIterate iterate;
  MsRound round;
  bool solver_failed = false;
};

InnerResult run_inner(const MsIterate& start, const CompositeChannels& ch, const LinkBudget& b,
                      const ScaSettings& settings);

MsReport run_algorithm2(const CompositeChannels& ch, const LinkBudget& b,
                        const ScaSettings& settings, const PenaltySettings& penalty,
                        const StarProfile& init);

StarProfile binarize(const MsIterate& it);
std::vector<Mode> mode_assignment(const MsIterate& it);

}  // namespace starfd::sca
