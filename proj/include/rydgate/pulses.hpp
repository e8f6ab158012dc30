#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "rydgate/error.hpp"
#include "rydgate/model.hpp"

namespace rydgate {

enum class Protocol { A, B, C };

inline const char* protocol_name(Protocol p) { return p == Protocol::A ? "A" : p == Protocol::B ? "B" : "C"; }

inline Protocol parse_protocol(const std::string& s) {
  if (s == "A" || s == "a") return Protocol::A;
  if (s == "B" || s == "b") return Protocol::B;
  if (s == "C" || s == "c") return Protocol::C;
  throw config_error("pulses", "unknown protocol '" + s + "'");
}

// Pulse parameters in 2pi x MHz, tau in us. Protocol C derives its amplitude from tau
// and its detuning from Omega_MW.
class PulseShape {
 public:
  static PulseShape protocol_a(double Omega0, double delta0, double tau) {
    return PulseShape(Protocol::A, Omega0, delta0, 0, tau, 0);
  }
  static PulseShape protocol_b(double Omega0, double delta0, double Delta0, double tau) {
    return PulseShape(Protocol::B, Omega0, delta0, Delta0, tau, 0);
  }
  static PulseShape protocol_c(double tau, double Omega_MW) {
    if (!(Omega_MW > 0)) throw domain_error("pulses", "protocol C needs Omega_MW > 0");
    return PulseShape(Protocol::C, 0, 0, 0, tau, Omega_MW);
  }

  Protocol protocol() const { return protocol_; }
  double tau() const { return tau_; }
  double delta0() const { return delta0_; }
  double Delta0() const { return Delta0_; }
  double Omega_MW() const { return omega_mw_; }
  bool addressed() const { return protocol_ == Protocol::C; }

  // 8 sqrt(2) pi / tau rad/us for protocol C
  double Omega0() const { return protocol_ == Protocol::C ? 4 * std::sqrt(2.0) / tau_ : Omega0_; }

  PulseShape with_tau(double tau) const {
    PulseShape p = *this;
    p.tau_ = tau;
    p.validate();
    return p;
  }

 private:
  PulseShape(Protocol p, double O, double d, double D, double tau, double mw)
      : protocol_(p), Omega0_(O), delta0_(d), Delta0_(D), tau_(tau), omega_mw_(mw) {
    validate();
  }
  void validate() const {
    if (!(Omega0_ >= 0)) throw domain_error("pulses", "Omega0 must be non-negative");
    if (!(tau_ > 0)) throw domain_error("pulses", "tau must be positive");
  }

  Protocol protocol_;
  double Omega0_, delta0_, Delta0_, tau_, omega_mw_;
};

struct PulseSample {
  double Omega_L;
  double Delta_L;
};

inline void check_time(const PulseShape& s, double t) {
  if (t < -1e-12 * s.tau() || t > s.tau() * (1 + 1e-12)) throw domain_error("pulses", "t outside [0, tau]");
}

inline double sin2(double x) {
  double s = std::sin(x);
  return s * s;
}

inline PulseSample pulse_a(const PulseShape& s, double t) {
  check_time(s, t);
  return {s.Omega0() * sin2(std::numbers::pi * t / s.tau()), s.delta0()};
}

inline PulseSample pulse_b(const PulseShape& s, double t) {
  check_time(s, t);
  double w = sin2(std::numbers::pi * t / s.tau());
  return {s.Omega0() * w, s.delta0() - s.Delta0() * w};
}

// ion 1 drives the outer quarters, ion 2 the middle half
inline PulseSample pulse_c(const PulseShape& s, double t, int ion) {
  check_time(s, t);
  if (ion != 1 && ion != 2) throw domain_error("pulses", "ion index must be 1 or 2");
  const double tau = s.tau(), pi = std::numbers::pi;
  double Omega = 0;
  bool outer = t <= 0.25 * tau || t >= 0.75 * tau;
  if (ion == 1 && outer) Omega = s.Omega0() * sin2(4 * pi * t / tau);
  if (ion == 2 && !outer) {
    double c = std::cos(2 * pi * t / tau);
    Omega = s.Omega0() * c * c;
  }
  return {Omega, 0.5 * s.Omega_MW()};
}

inline Drive drive(const PulseShape& s, double t) {
  switch (s.protocol()) {
    case Protocol::A: {
      auto p = pulse_a(s, t);
      return Drive::global(p.Omega_L, p.Delta_L);
    }
    case Protocol::B: {
      auto p = pulse_b(s, t);
      return Drive::global(p.Omega_L, p.Delta_L);
    }
    case Protocol::C: {
      auto a = pulse_c(s, t, 1), b = pulse_c(s, t, 2);
      return {a.Omega_L, a.Delta_L, b.Omega_L, b.Delta_L};
    }
  }
  return {};
}

}  // namespace rydgate
