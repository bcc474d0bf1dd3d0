#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "starfd/convex.hpp"
#include "starfd/rate.hpp"
#include "starfd/rng.hpp"

namespace starfd::sca {

using channel::CompositeChannels;
using rate::LinkBudget;
using rate::QosThresholds;
using rate::RatePair;
using rate::StarProfile;
using rate::Weights;

// Expansion data of the rate lower bounds at the current profile.
struct BoundPoint {
  cd psi{0.0, 0.0};   // sqrt(g1) (f + s_r' h)
  double kappa = 1.0; // g2' |s_t' q|^2 + 1
  cd chi{0.0, 0.0};   // sqrt(g2) s_t' z
};

// kTangent is the bound that touches the true rate at the expansion point.
// kAsPrinted keeps an alternative coefficient set (z-term in the downlink bound,
// no unit term, and a sqrt(g2) on the uplink constant); it is not tangent and
// exists for inspection only.
enum class BoundVariant { kTangent, kAsPrinted };

struct ScaSettings {
  double eps1 = 1e-3;
  int i_max = 30;
  Weights weights;
  QosThresholds qos;
  BoundVariant bounds = BoundVariant::kTangent;
  convex::SolverSettings solver;

  void validate() const;
};

enum class ScaStatus { kConverged, kMaxIter, kInfeasible };
std::string_view to_string(ScaStatus s);

struct ScaReport {
  StarProfile final_profile;
  std::vector<double> objective_trajectory;  // true weighted sum rate per accepted iterate
  ScaStatus status = ScaStatus::kMaxIter;
  int iterations = 0;
  RatePair rates;
  double weighted_sum_rate = 0.0;
};

BoundPoint bound_point(const StarProfile& p, const CompositeChannels& ch, const LinkBudget& b);

double lb_rate1(const StarProfile& p, const BoundPoint& pt, const CompositeChannels& ch,
                const LinkBudget& b, BoundVariant variant = BoundVariant::kTangent);
double lb_rate2(const StarProfile& p, const BoundPoint& pt, const CompositeChannels& ch,
                const LinkBudget& b, BoundVariant variant = BoundVariant::kTangent);

// [Re s_r; Im s_r; Re s_t; Im s_t]
RVec embed_profile(const StarProfile& p);
StarProfile extract_profile(const RVec& x, Index m);

// The bounds as real quadratic forms over embed_profile coordinates (dim 4M).
convex::RealQuadForm lb_rate1_form(const BoundPoint& pt, const CompositeChannels& ch,
                                   const LinkBudget& b,
                                   BoundVariant variant = BoundVariant::kTangent);
convex::RealQuadForm lb_rate2_form(const BoundPoint& pt, const CompositeChannels& ch,
                                   const LinkBudget& b,
                                   BoundVariant variant = BoundVariant::kTangent);

// Variables [profile (4M); R1~; R2~]. Constraint order: two rate caps, M
// per-element power balls, two QoS rows.
convex::ConvexProgram assemble_p2(const BoundPoint& pt, const CompositeChannels& ch,
                                  const LinkBudget& b, const ScaSettings& settings);

// Called on every accepted iterate (used by the hard-projection baseline).
using ProfileHook = std::function<void(StarProfile&)>;

ScaReport run_algorithm1(const CompositeChannels& ch, const LinkBudget& b,
                         const ScaSettings& settings, const StarProfile& init,
                         const ProfileHook& hook = {});

enum class InitMode { kRemark1, kRandom };

StarProfile initialize_es(const CompositeChannels& ch, InitMode mode, RngStream& rng);

namespace detail {

// True when no profile can meet QoS even without interference.
bool qos_unreachable(const CompositeChannels& ch, const LinkBudget& b, const QosThresholds& qos);

// Strictly feasible profile for the QoS-plus-ball set of P2 expanded at init,
// or nullopt when phase 1 certifies no such point exists.
std::optional<StarProfile> feasible_start(const StarProfile& init, const CompositeChannels& ch,
                                          const LinkBudget& b, const ScaSettings& settings);

// init with its reflection phases replaced by the co-phasing solution.
StarProfile remark1_reinit(const StarProfile& init, const CompositeChannels& ch);

bool degenerate(const CompositeChannels& ch);

}  // namespace detail

}  // namespace starfd::sca
