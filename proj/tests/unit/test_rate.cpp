#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace starfd;
using namespace starfd::rate;
using testing::bilinear;

namespace {

CompositeChannels scalar_channels(cd h, cd q, cd z, cd f) {
  CompositeChannels c;
  c.h = CVec::Constant(1, h);
  c.q = CVec::Constant(1, q);
  c.z = CVec::Constant(1, z);
  c.f = f;
  return c;
}

}  // namespace

TEST_SUITE("rate") {

TEST_CASE("downlink sinr examples") {
  StarProfile p = StarProfile::zeros(1);
  p.s_r[0] = 1.0;
  const auto ch = scalar_channels(1.0, 1.0, 0.0, 1.0);
  CHECK(sinr_downlink(p, ch, {1.0, 1.0, 1.0}) == doctest::Approx(4.0));
  p.s_t[0] = 1.0;  // |s_t' q|^2 = 1
  CHECK(sinr_downlink(p, ch, {1.0, 1.0, 1.0}) == doctest::Approx(2.0));
}

TEST_CASE("uplink sinr examples") {
  StarProfile p = StarProfile::zeros(1);
  const auto ch = scalar_channels(0.0, 0.0, cd(1.0, 1.0), 0.0);
  CHECK(sinr_uplink(p, ch, {1.0, 2.0, 1.0}) == 0.0);
  p.s_t[0] = 1.0;
  CHECK(sinr_uplink(p, ch, {1.0, 2.0, 1.0}) == doctest::Approx(4.0));
}

TEST_CASE("sinr and rates against direct evaluation") {
  RngStream rng(21, {1});
  for (int k = 0; k < 50; ++k) {
    const Index m = 2 + k % 3;
    CompositeChannels ch{testing::random_cvec(m, rng), testing::random_cvec(m, rng),
                         testing::random_cvec(m, rng), testing::random_cd(rng)};
    const StarProfile p = testing::random_profile(m, rng);
    const LinkBudget b{2.0 + rng.uniform01(), 0.5 + rng.uniform01(), 1.5 * rng.uniform01()};
    const double s1 = b.gamma1_bar * std::norm(ch.f + bilinear(p.s_r, ch.h)) /
                      (b.gamma2p_bar * std::norm(bilinear(p.s_t, ch.q)) + 1.0);
    const double s2 = b.gamma2_bar * std::norm(bilinear(p.s_t, ch.z));
    CHECK(std::abs(sinr_downlink(p, ch, b) - s1) <= 1e-12 * std::max(1.0, s1));
    CHECK(std::abs(sinr_uplink(p, ch, b) - s2) <= 1e-12 * std::max(1.0, s2));
    const RatePair r = rate_pair(p, ch, b);
    CHECK(std::abs(r.r1 - std::log2(1.0 + s1)) <= 1e-12);
    CHECK(std::abs(r.r2 - std::log2(1.0 + s2)) <= 1e-12);
  }
}

TEST_CASE("dimension mismatch throws") {
  const auto ch = scalar_channels(1.0, 1.0, 1.0, 1.0);
  CHECK_THROWS_AS(sinr_downlink(StarProfile::zeros(2), ch, {}), std::invalid_argument);
}

TEST_CASE("effective uplink snr") {
  CHECK(effective_uplink_snr(10.0, 5.0, 0.0) == 10.0);
  CHECK(effective_uplink_snr(10.0, 1.0, 1.0) == doctest::Approx(5.0));
  const cd g(0.3, -0.7);
  CHECK(effective_uplink_snr(3.0, 4.0, g) ==
        doctest::Approx(3.0 / (4.0 * (0.09 + 0.49) + 1.0)).epsilon(1e-12));
}

TEST_CASE("rate pair of known sinrs") {
  StarProfile p = StarProfile::zeros(1);
  p.s_t[0] = 1.0;
  // SINR1 = 3 (f = sqrt 3, no interference), SINR2 = 1.
  const auto ch = scalar_channels(0.0, 0.0, 1.0, std::sqrt(3.0));
  const RatePair r = rate_pair(p, ch, {1.0, 1.0, 0.0});
  CHECK(r.r1 == doctest::Approx(2.0));
  CHECK(r.r2 == doctest::Approx(1.0));
  const RatePair z = rate_pair(StarProfile::zeros(1), scalar_channels(0, 0, 0, 0), {1, 1, 1});
  CHECK(z.r1 == 0.0);
  CHECK(z.r2 == 0.0);
}

TEST_CASE("weighted sum") {
  CHECK(weighted_sum({2.0, 1.0}, {0.7, 0.3}) == doctest::Approx(1.7));
  CHECK(weighted_sum({2.0, 1.0}, {1.0, 0.0}) == 2.0);
  CHECK(weighted_sum({3.0, 5.0}, {0.5, 0.5}) == 4.0);
  RngStream rng(21, {2});
  for (int k = 0; k < 100; ++k) {
    const Weights w = Weights::from_w1(rng.uniform01());
    const RatePair r{5.0 * rng.uniform01(), 5.0 * rng.uniform01()};
    const double s = weighted_sum(r, w);
    CHECK(s >= std::min(r.r1, r.r2) - 1e-12);
    CHECK(s <= std::max(r.r1, r.r2) + 1e-12);
  }
}

TEST_CASE("weights validation") {
  const Weights w = Weights::from_w1(0.1);
  CHECK(w.w1 + w.w2 == 1.0);
  CHECK_NOTHROW(w.validate());
  CHECK_THROWS(Weights{0.7, 0.4}.validate());
  CHECK_THROWS(Weights::from_w1(1.5));
}

TEST_CASE("qos check") {
  CHECK(qos_satisfied({2.0, 2.0}, {2.0, 2.0}, 0.0));
  CHECK_FALSE(qos_satisfied({1.999, 2.0}, {2.0, 2.0}, 1e-6));
  CHECK(qos_satisfied({1.9999995, 2.0}, {2.0, 2.0}, 1e-6));
}

TEST_CASE("constraint report") {
  StarProfile p = StarProfile::zeros(3);
  for (Index i = 0; i < 3; ++i) p.s_r[i] = std::polar(1.0, 0.3 * i);
  const auto ms = profile_constraint_report(p, Protocol::kModeSwitching);
  CHECK(ms.sum_power == doctest::Approx(0.0));
  CHECK(ms.amplitude == 0.0);
  CHECK(ms.binariness == doctest::Approx(0.0));

  StarProfile h = StarProfile::zeros(2);
  h.s_r.setConstant(std::sqrt(0.5));
  h.s_t.setConstant(std::sqrt(0.5));
  const auto half = profile_constraint_report(h, Protocol::kModeSwitching);
  CHECK(half.sum_power == doctest::Approx(0.0).epsilon(1e-15));
  // |s| - |s|^2 at |s| = sqrt(0.5)
  CHECK(half.binariness == doctest::Approx(std::sqrt(0.5) - 0.5).epsilon(1e-12));

  StarProfile over = StarProfile::zeros(1);
  over.s_r[0] = std::sqrt(0.6);
  over.s_t[0] = std::sqrt(0.6);
  CHECK(profile_constraint_report(over, Protocol::kEnergySplitting).sum_power ==
        doctest::Approx(0.2));
}

TEST_CASE("co-phasing angle") {
  using std::numbers::pi;
  CHECK(co_phase_angle(pi / 2, pi / 4, pi / 8) == doctest::Approx(pi / 8));
  CHECK(co_phase_angle(0.0, 0.0, 0.0) == 0.0);
  CHECK(wrap_phase(-0.5) == doctest::Approx(2 * pi - 0.5));
  CHECK(wrap_phase(2 * pi) == doctest::Approx(0.0));
}

TEST_CASE("co-phasing collapses to a magnitude sum") {
  RngStream rng(21, {3});
  for (int k = 0; k < 100; ++k) {
    const Index m = 1 + k % 8;
    const CVec v = testing::random_cvec(m, rng);
    const CVec gd = testing::random_cvec(m, rng);
    const cd f = testing::random_cd(rng);
    const CoPhasing cp = remark1_phases(f, v, gd);
    CHECK_FALSE(cp.direct_path_absent);
    CVec s(m);
    for (Index i = 0; i < m; ++i) s[i] = std::polar(1.0, cp.phases[i]);
    const double lhs = std::abs(f + bilinear(s, v.cwiseProduct(gd)));
    const double rhs = std::abs(f) + (v.cwiseAbs().array() * gd.cwiseAbs().array()).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    for (Index i = 0; i < m; ++i) {
      CHECK(cp.phases[i] >= 0.0);
      CHECK(cp.phases[i] < 2 * std::numbers::pi);
    }
  }
}

TEST_CASE("co-phasing without a direct path") {
  RngStream rng(21, {4});
  const CVec v = testing::random_cvec(3, rng);
  const CVec gd = testing::random_cvec(3, rng);
  const CoPhasing cp = remark1_phases(0.0, v, gd);
  CHECK(cp.direct_path_absent);
  CVec s(3);
  for (Index i = 0; i < 3; ++i) s[i] = std::polar(1.0, cp.phases[i]);
  CHECK(std::abs(bilinear(s, v.cwiseProduct(gd))) ==
        doctest::Approx((v.cwiseAbs().array() * gd.cwiseAbs().array()).sum()));
}

TEST_CASE("co-phasing beats a phase grid") {
  RngStream rng(21, {5});
  for (int k = 0; k < 10; ++k) {
    const Index m = 1 + k % 3;
    const CVec h = testing::random_cvec(m, rng);
    const cd f = testing::random_cd(rng);
    const CoPhasing cp = remark1_phases(f, h);
    CVec s(m);
    for (Index i = 0; i < m; ++i) s[i] = std::polar(1.0, cp.phases[i]);
    const double best = std::abs(f + bilinear(s, h));
    int total = 1;
    for (Index i = 0; i < m; ++i) total *= 16;
    double grid = 0.0;
    for (int code = 0; code < total; ++code) {
      int c = code;
      CVec g(m);
      for (Index i = 0; i < m; ++i) {
        g[i] = std::polar(1.0, 2 * std::numbers::pi * (c % 16) / 16.0);
        c /= 16;
      }
      grid = std::max(grid, std::abs(f + bilinear(g, h)));
    }
    CHECK(grid <= best + 1e-12);
  }
}

TEST_CASE("downlink sinr is monotone in the signal magnitude") {
  RngStream rng(21, {6});
  for (int k = 0; k < 100; ++k) {
    const Index m = 3;
    CompositeChannels ch{testing::random_cvec(m, rng), testing::random_cvec(m, rng),
                         testing::random_cvec(m, rng), testing::random_cd(rng)};
    StarProfile a = testing::random_profile(m, rng);
    StarProfile b = testing::random_profile(m, rng);
    b.s_t = a.s_t;
    const LinkBudget bud{3.0, 1.0, 1.0};
    const double na = std::norm(ch.f + bilinear(a.s_r, ch.h));
    const double nb = std::norm(ch.f + bilinear(b.s_r, ch.h));
    if (na <= nb) {
      CHECK(sinr_downlink(a, ch, bud) <= sinr_downlink(b, ch, bud) + 1e-12);
    } else {
      CHECK(sinr_downlink(a, ch, bud) >= sinr_downlink(b, ch, bud) - 1e-12);
    }
  }
}

TEST_CASE("budget validation") {
  CHECK_THROWS(LinkBudget{-1.0, 1.0, 1.0}.validate());
  CHECK_THROWS(QosThresholds{-0.1, 0.0}.validate());
}

}  // TEST_SUITE
