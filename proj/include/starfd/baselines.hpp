#pragma once

#include <optional>

#include "starfd/sca_es.hpp"

namespace starfd::baselines {

using channel::ChannelRealization;
using channel::CompositeChannels;
using rate::LinkBudget;
using rate::QosThresholds;
using rate::RatePair;
using rate::StarProfile;
using rate::Weights;

// Elements [0, m_r) reflect only, [m_r, m_r + m_t) transmit only.
struct PartitionSpec {
  Index m_r = 0;
  Index m_t = 0;

  // Even split; an odd element goes to reflection.
  static PartitionSpec even(Index m);
  void validate(Index m) const;
};

struct ConvRisOptions {
  // Force unit amplitudes on every accepted iterate instead of relying on the
  // relaxed magnitudes saturating.
  bool hard_projection = false;
  // Skip SCA and use the co-phased closed form directly.
  bool closed_form = false;
};

// Zeroes h on transmit elements and q, z on reflect elements.
CompositeChannels mask_channels(const CompositeChannels& ch, const PartitionSpec& part);

// Unit amplitudes, reflect phases co-phased with f, transmit phases -Arg(z).
StarProfile conventional_closed_form(const CompositeChannels& ch, const PartitionSpec& part);

// SCA over the partitioned surface. init (if given) contributes its phases;
// amplitudes are reset to the partition. Inactive coefficients are zero in
// the returned profile.
sca::ScaReport conventional_ris(const CompositeChannels& ch, const LinkBudget& b,
                                const sca::ScaSettings& settings, const PartitionSpec& part,
                                const ConvRisOptions& options = {},
                                const std::optional<StarProfile>& init = std::nullopt);

struct HdAllocation {
  double lambda1 = 0.5;
  double lambda2 = 0.5;
  CVec s_r_h;
  CVec s_t_h;
};

struct HdReport {
  HdAllocation alloc;
  RatePair rates;
  double weighted_sum_rate = 0.0;
  sca::ScaStatus status = sca::ScaStatus::kConverged;
};

struct HdCoefficients {
  CVec s_r_h;
  CVec s_t_h;
};

// Arg(s_r) = psi_f - (psi_v + psi_gd), Arg(s_t) = -(psi_u + psi_gu), psi = Arg(.)
HdCoefficients hd_closed_form(const ChannelRealization& real);
// Same phases from the cascaded vectors.
HdCoefficients hd_closed_form(const CompositeChannels& ch);

// lambda * log2(1 + c / lambda), 0 at lambda = 0.
double time_shared_rate(double lambda, double c);

// Half-duplex rates; no self-interference and no inter-user interference.
RatePair hd_rates(const HdAllocation& alloc, const CompositeChannels& ch, const LinkBudget& b);

// Splits lambda1 and 1 - lambda1 so that the pair sums to one exactly.
std::pair<double, double> exact_split(double lambda1);

HdReport solve_p5(const CompositeChannels& ch, const LinkBudget& b, const Weights& w,
                  const QosThresholds& qos);

}  // namespace starfd::baselines
