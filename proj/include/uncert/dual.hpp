#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace uncert {

/// Forward-mode dual number carrying a value and N first partial derivatives.
template <std::size_t N>
struct Dual {
  double value = 0.0;
  std::array<double, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT: constants promote implicitly

  static constexpr Dual variable(double v, std::size_t index) {
    Dual r(v);
    r.d[index] = 1.0;
    return r;
  }

  bool is_constant() const {
    for (double g : d)
      if (g != 0.0) return false;
    return true;
  }

  /// Chain rule for a unary function with value `fv` and derivative `fd` at `value`.
  Dual chain(double fv, double fd) const {
    Dual r(fv);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = fd * d[i];
    return r;
  }
};

template <std::size_t N>
Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.value + b.value);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

template <std::size_t N>
Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.value - b.value);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

template <std::size_t N>
Dual<N> operator-(const Dual<N>& a) {
  return a.chain(-a.value, -1.0);
}

template <std::size_t N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.value * b.value);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] * b.value + a.value * b.d[i];
  return r;
}

template <std::size_t N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  const double q = a.value / b.value;
  Dual<N> r(q);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = (a.d[i] - q * b.d[i]) / b.value;
  return r;
}

using Dual3 = Dual<3>;

}  // namespace uncert
