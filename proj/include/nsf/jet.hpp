#pragma once

#include <array>
#include <cmath>

namespace nsf {

/// Truncated Taylor polynomial in the three variables (x1, x2, t), total degree <= 3.
///
/// Background closures are written once against this type; evaluating them on seeded
/// variables yields exact partial derivatives up to third order at the expansion point.
class Jet {
 public:
  static constexpr int kOrder = 3;
  static constexpr int kSize = 20;

  Jet() { c_.fill(0.0); }
  Jet(double v) {  // NOLINT(google-explicit-constructor): constants promote implicitly
    c_.fill(0.0);
    c_[0] = v;
  }

  /// Independent variable `axis` (0 = x1, 1 = x2, 2 = t) expanded about `value`.
  static Jet variable(int axis, double value) {
    Jet j(value);
    j.c_[index(axis == 0, axis == 1, axis == 2)] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double coeff(int a, int b, int c) const {
    if (a + b + c > kOrder) return 0.0;
    return c_[index(a, b, c)];
  }
  /// ∂1^a ∂2^b ∂t^c at the expansion point.
  double derivative(int a, int b, int c) const {
    return coeff(a, b, c) * fact(a) * fact(b) * fact(c);
  }

  /// Partial derivative along `axis` as a jet; it is exact to one degree less.
  Jet partial(int axis) const {
    Jet r;
    for (int a = 0; a <= kOrder; ++a)
      for (int b = 0; a + b <= kOrder; ++b)
        for (int c = 0; a + b + c <= kOrder; ++c) {
          int sa = a + (axis == 0), sb = b + (axis == 1), sc = c + (axis == 2);
          if (sa + sb + sc > kOrder) continue;
          int mult = axis == 0 ? sa : (axis == 1 ? sb : sc);
          r.c_[index(a, b, c)] = mult * c_[index(sa, sb, sc)];
        }
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (const auto& t : table().products) r.c_[t[2]] += a.c_[t[0]] * b.c_[t[1]];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
  friend Jet operator/(double s, const Jet& b) { return s * b.reciprocal(); }

  /// f(x0 + d) = f0 + f1 d + f2 d^2/2 + f3 d^3/6 with d the nilpotent part of *this.
  Jet compose(double f0, double f1, double f2, double f3) const {
    Jet d = *this;
    d.c_[0] = 0.0;
    Jet d2 = d * d;
    Jet d3 = d2 * d;
    Jet r = f1 * d + (f2 / 2.0) * d2 + (f3 / 6.0) * d3;
    r.c_[0] += f0;
    return r;
  }

  Jet reciprocal() const {
    double v = c_[0];
    return compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v));
  }

 private:
  struct Table {
    std::array<std::array<int, 3>, 84> products{};
  };

  static constexpr int fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }

  /// Graded lexicographic slot of the monomial x1^a x2^b t^c.
  static constexpr int index(int a, int b, int c) {
    int d = a + b + c;
    constexpr int offset[4] = {0, 1, 4, 10};
    int slot = 0;
    // monomials of degree d ordered by decreasing a, then decreasing b
    for (int aa = d; aa > a; --aa) slot += d - aa + 1;
    slot += (d - a) - b;
    return offset[d] + slot;
  }

  static const Table& table() {
    static const Table t = [] {
      Table tb;
      int n = 0;
      for (int a1 = 0; a1 <= kOrder; ++a1)
        for (int b1 = 0; a1 + b1 <= kOrder; ++b1)
          for (int c1 = 0; a1 + b1 + c1 <= kOrder; ++c1)
            for (int a2 = 0; a1 + b1 + c1 + a2 <= kOrder; ++a2)
              for (int b2 = 0; a1 + b1 + c1 + a2 + b2 <= kOrder; ++b2)
                for (int c2 = 0; a1 + b1 + c1 + a2 + b2 + c2 <= kOrder; ++c2)
                  tb.products[n++] = {index(a1, b1, c1), index(a2, b2, c2),
                                      index(a1 + a2, b1 + b2, c1 + c2)};
      return tb;
    }();
    return t;
  }

  std::array<double, kSize> c_;
};

inline Jet sin(const Jet& x) {
  double s = std::sin(x.value()), c = std::cos(x.value());
  return x.compose(s, c, -s, -c);
}
inline Jet cos(const Jet& x) {
  double s = std::sin(x.value()), c = std::cos(x.value());
  return x.compose(c, -s, -c, s);
}
inline Jet exp(const Jet& x) {
  double e = std::exp(x.value());
  return x.compose(e, e, e, e);
}
inline Jet log(const Jet& x) {
  double v = x.value();
  return x.compose(std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}
inline Jet pow(const Jet& x, double p) {
  double v = x.value();
  return x.compose(std::pow(v, p), p * std::pow(v, p - 1.0), p * (p - 1.0) * std::pow(v, p - 2.0),
                   p * (p - 1.0) * (p - 2.0) * std::pow(v, p - 3.0));
}
inline Jet sqrt(const Jet& x) { return pow(x, 0.5); }
inline Jet tanh(const Jet& x) {
  double t = std::tanh(x.value());
  double s = 1.0 - t * t;
  return x.compose(t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0));
}

}  // namespace nsf
