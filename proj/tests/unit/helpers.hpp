#pragma once

#include <string>

#include "quasilab/algebra.hpp"
#include "quasilab/regions.hpp"

namespace quasilab::testing {

inline AlgebraPtr q2() {
  static const AlgebraPtr a = AlgebraSpec::parse("basis w1 = sqrt 2\n");
  return a;
}

inline AlgebraPtr q23() {
  static const AlgebraPtr a = AlgebraSpec::sqrt2_sqrt3();
  return a;
}

inline QValue q(const AlgebraPtr& a, const std::string& s) { return QValue::parse(a, s); }
inline QValue q(const std::string& s) { return q(q2(), s); }

inline RegionSet intervals(const std::string& s, const AlgebraPtr& a = q2()) {
  return RegionSet::parse_intervals(a, s);
}

}  // namespace quasilab::testing
