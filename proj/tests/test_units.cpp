#include <cmath>

#include <gtest/gtest.h>

#include "rydgate/error.hpp"
#include "rydgate/units.hpp"

using namespace rydgate;

TEST(Units, AngularFrequencyConversions) {
  EXPECT_NEAR(mhz_to_rad_us(1.0), 6.283185307179586, 1e-15);
  EXPECT_NEAR(rad_us_to_mhz(mhz_to_rad_us(42.5)), 42.5, 1e-13);
  EXPECT_NEAR(mhz_to_rad_s(1.0), 6.283185307179586e6, 1e-6);
  EXPECT_NEAR(rad_s_to_mhz(mhz_to_rad_s(3.3)), 3.3, 1e-13);
}

TEST(Units, AtomicToSi) {
  EXPECT_NEAR(bohr_to_m(1.0), 5.29177210903e-11, 1e-22);
  EXPECT_NEAR(bohr_to_m(2.0, 2), 2 * 5.29177210903e-11 * 5.29177210903e-11, 1e-33);
  EXPECT_NEAR(hartree_to_invcm(1.0), 219474.6313632, 1e-6);
  // hartree energy agrees with the SI constants it is built from; hbar is quoted to 10 digits
  double Eh = si::hbar * si::hbar / (9.1093837015e-31 * si::a0 * si::a0);
  EXPECT_NEAR(Eh / si::hartree, 1.0, 5e-9);
}

TEST(Errors, CodesAndStatuses) {
  auto e = convergence_error("atomic", "no bracket");
  EXPECT_EQ(e.code(), "atomic.convergence");
  EXPECT_EQ(e.kind(), ErrorKind::convergence);
  EXPECT_STREQ(e.what(), "no bracket");
  EXPECT_NE(domain_error("x", "").exit_status(), config_error("x", "").exit_status());
  EXPECT_EQ(tracking_error("dynamics", "").code(), "dynamics.tracking");
  EXPECT_EQ(integration_error("dynamics", "").code(), "dynamics.integration");
}
