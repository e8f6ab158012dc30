#pragma once

#include <cctype>
#include <cmath>
#include <string>

#include "rydgate/error.hpp"

namespace rydgate::atomic {

// Half-integer quantum numbers are stored doubled: j2 = 2j, mj2 = 2 m_j.
struct ElectronicState {
  int n = 1;
  int l = 0;
  int j2 = 1;
  int mj2 = 1;

  ElectronicState() = default;
  ElectronicState(int n_, int l_, int j2_, int mj2_) : n(n_), l(l_), j2(j2_), mj2(mj2_) { validate(); }

  double j() const { return 0.5 * j2; }
  double mj() const { return 0.5 * mj2; }

  void validate() const {
    if (n < 1 || l < 0 || l >= n) throw domain_error("atomic", "need n >= 1 and 0 <= l < n");
    if (j2 != 2 * l + 1 && j2 != 2 * l - 1) throw domain_error("atomic", "j must be l +/- 1/2");
    if (j2 < 1) throw domain_error("atomic", "j must be positive");
    if (std::abs(mj2) > j2 || (mj2 - j2) % 2 != 0) throw domain_error("atomic", "bad m_j");
  }

  bool same_level(const ElectronicState& o) const { return n == o.n && l == o.l && j2 == o.j2; }

  std::string label() const {
    static const char* L = "SPDFGHIKLMNOQRTUV";
    std::string s = std::to_string(n) + (l < 17 ? L[l] : '?') + std::to_string(j2) + "/2";
    return s;
  }

  // "46S1/2" style term symbol; m_j given doubled
  static ElectronicState parse(const std::string& term, int mj2) {
    static const std::string L = "SPDFGHIKLMNOQRTUV";
    std::size_t i = 0;
    while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
    if (i == 0 || i >= term.size()) throw domain_error("atomic", "bad term symbol '" + term + "'");
    int n = std::stoi(term.substr(0, i));
    auto lpos = L.find(static_cast<char>(std::toupper(static_cast<unsigned char>(term[i]))));
    if (lpos == std::string::npos) throw domain_error("atomic", "bad orbital letter in '" + term + "'");
    auto rest = term.substr(i + 1);
    auto slash = rest.find('/');
    if (slash == std::string::npos || rest.substr(slash + 1) != "2")
      throw domain_error("atomic", "expected j as k/2 in '" + term + "'");
    int j2 = std::stoi(rest.substr(0, slash));
    return ElectronicState(n, static_cast<int>(lpos), j2, mj2);
  }
};

}  // namespace rydgate::atomic
