#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rydgate/pulses.hpp"

using namespace rydgate;

TEST(Pulses, ProtocolAShape) {
  auto s = PulseShape::protocol_a(7.78, 47.61, 1.0);
  EXPECT_NEAR(pulse_a(s, 0).Omega_L, 0, 1e-15);
  EXPECT_NEAR(pulse_a(s, 0.5).Omega_L, 7.78, 1e-12);
  EXPECT_NEAR(pulse_a(s, 0.25).Omega_L, 7.78 / 2, 1e-12);
  for (double t : {0.0, 0.3, 1.0}) EXPECT_EQ(pulse_a(s, t).Delta_L, 47.61);
}

TEST(Pulses, ProtocolBShape) {
  auto s = PulseShape::protocol_b(9.8, 37.44, -12.1, 1.0);
  EXPECT_NEAR(pulse_b(s, 0).Delta_L, 37.44, 1e-12);
  EXPECT_NEAR(pulse_b(s, 0.5).Delta_L, 37.44 + 12.1, 1e-12);
  EXPECT_NEAR(pulse_b(s, 1.0).Omega_L, 0, 1e-12);
  for (double t : {0.1, 0.37, 0.8}) {
    EXPECT_NEAR(pulse_b(s, t).Omega_L, pulse_b(s, 1.0 - t).Omega_L, 1e-12);
    EXPECT_NEAR(pulse_b(s, t).Delta_L, pulse_b(s, 1.0 - t).Delta_L, 1e-12);
  }
}

TEST(Pulses, ProtocolCAmplitudeAndArea) {
  EXPECT_NEAR(PulseShape::protocol_c(1.0, 100).Omega0(), 5.66, 0.005);
  EXPECT_NEAR(PulseShape::protocol_c(0.3, 250).Omega0(), 18.86, 0.005);
  // areas pi, 2 pi, pi on the resonant 1 <-> - transition, whose coupling is Omega/sqrt(2)
  auto s = PulseShape::protocol_c(0.7, 100);
  const int n = 200000;
  double a1 = 0, a2 = 0;
  for (int i = 0; i < n; ++i) {
    double t = (i + 0.5) * s.tau() / n;
    a1 += pulse_c(s, t, 1).Omega_L;
    a2 += pulse_c(s, t, 2).Omega_L;
  }
  const double scale = 2 * std::numbers::pi * s.tau() / n / std::sqrt(2.0);
  EXPECT_NEAR(a1 * scale, 2 * std::numbers::pi, 1e-6);
  EXPECT_NEAR(a2 * scale, 2 * std::numbers::pi, 1e-6);
  EXPECT_EQ(pulse_c(s, 0.5 * s.tau(), 1).Omega_L, 0);
  EXPECT_EQ(pulse_c(s, 0.1 * s.tau(), 2).Omega_L, 0);
  EXPECT_EQ(pulse_c(s, 0.3, 1).Delta_L, 50);
}

TEST(Pulses, DriveDispatch) {
  auto b = PulseShape::protocol_b(9.8, 37.44, -12.1, 1.0);
  auto d = drive(b, 0.4);
  EXPECT_EQ(d.Omega1, d.Omega2);
  EXPECT_EQ(d.Delta1, d.Delta2);
  auto c = PulseShape::protocol_c(1.0, 100);
  auto dc = drive(c, 0.1);
  EXPECT_GT(dc.Omega1, 0);
  EXPECT_EQ(dc.Omega2, 0);
  EXPECT_TRUE(c.addressed());
  EXPECT_FALSE(b.addressed());
}

TEST(Pulses, Validation) {
  EXPECT_THROW(PulseShape::protocol_a(-1, 0, 1), Error);
  EXPECT_THROW(PulseShape::protocol_b(1, 0, 0, 0), Error);
  EXPECT_THROW(PulseShape::protocol_c(1, 0), Error);
  auto s = PulseShape::protocol_a(1, 0, 1);
  EXPECT_THROW(pulse_a(s, 1.5), Error);
  EXPECT_THROW(pulse_a(s, -0.1), Error);
  EXPECT_THROW(pulse_c(PulseShape::protocol_c(1, 100), 0.5, 3), Error);
  EXPECT_EQ(parse_protocol("b"), Protocol::B);
  EXPECT_THROW(parse_protocol("D"), Error);
  EXPECT_NEAR(s.with_tau(2).tau(), 2, 0);
}
