#pragma once

#include <cmath>

namespace mhear::detail {

// Running product of many factors. The mantissa is renormalised after each
// factor so long products neither overflow nor lose accuracy.
struct LogProduct {
  double mant = 1.0;
  long exp2 = 0;
  bool zero = false;
  bool infinite = false;

  void mul(double f) {
    if (f == 0.0) {
      zero = true;
      return;
    }
    mant *= f;
    renorm();
  }
  void div(double f) {
    if (f == 0.0) {
      infinite = true;
      return;
    }
    mant /= f;
    renorm();
  }
  double value() const {
    if (zero) return 0.0;
    if (infinite) return mant < 0 ? -HUGE_VAL : HUGE_VAL;
    return std::ldexp(mant, static_cast<int>(exp2));
  }

 private:
  void renorm() {
    int e = 0;
    mant = std::frexp(mant, &e);
    exp2 += e;
  }
};

}  // namespace mhear::detail
