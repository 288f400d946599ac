#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace pantograph {

// Double-word arithmetic over long double (Dekker/Knuth error-free
// transforms).  Used by the exact assembly path, where boundary holonomies
// of condition e^{4R} would otherwise eat the whole working precision.
struct dd {
  long double hi = 0.0L, lo = 0.0L;

  dd() = default;
  dd(long double h) : hi(h), lo(0.0L) {}
  dd(long double h, long double l) : hi(h), lo(l) {}

  static dd two_sum(long double a, long double b) {
    long double s = a + b;
    long double bb = s - a;
    long double err = (a - (s - bb)) + (b - bb);
    return {s, err};
  }
  static dd quick_two_sum(long double a, long double b) {
    long double s = a + b;
    return {s, b - (s - a)};
  }
  static void split(long double a, long double& h, long double& l) {
    // 64-bit mantissa: splitter 2^32 + 1
    constexpr long double splitter = 4294967297.0L;
    long double t = splitter * a;
    h = t - (t - a);
    l = a - h;
  }
  static dd two_prod(long double a, long double b) {
    long double p = a * b;
    long double a1, a2, b1, b2;
    split(a, a1, a2);
    split(b, b1, b2);
    long double err = ((a1 * b1 - p) + a1 * b2 + a2 * b1) + a2 * b2;
    return {p, err};
  }

  dd operator+(const dd& o) const {
    dd s = two_sum(hi, o.hi);
    s.lo += lo + o.lo;
    return quick_two_sum(s.hi, s.lo);
  }
  dd operator-() const { return {-hi, -lo}; }
  dd operator-(const dd& o) const { return *this + (-o); }
  dd operator*(const dd& o) const {
    dd p = two_prod(hi, o.hi);
    p.lo += hi * o.lo + lo * o.hi;
    return quick_two_sum(p.hi, p.lo);
  }
  dd operator/(const dd& o) const {
    long double q1 = hi / o.hi;
    dd r = *this - o * dd(q1);
    long double q2 = r.hi / o.hi;
    r = r - o * dd(q2);
    long double q3 = r.hi / o.hi;
    dd q = quick_two_sum(q1, q2);
    return q + dd(q3);
  }
  dd sqrt() const {
    long double y = sqrtl(hi);
    dd yd(y);
    // one Newton step in dd
    dd r = (*this / yd + yd) * dd(0.5L);
    return r;
  }
  long double value() const { return hi + lo; }
  bool operator<(const dd& o) const { return hi < o.hi || (hi == o.hi && lo < o.lo); }
};

// Dense real dd matrix, sized for the 2x2 construction layer and its
// symmetric-power images.
struct DDMat {
  int rows = 0, cols = 0;
  std::vector<dd> a;

  DDMat() = default;
  DDMat(int r, int c) : rows(r), cols(c), a(r * c) {}
  dd& operator()(int i, int j) { return a[i * cols + j]; }
  const dd& operator()(int i, int j) const { return a[i * cols + j]; }

  static DDMat identity(int n) {
    DDMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = dd(1.0L);
    return m;
  }
  DDMat operator*(const DDMat& o) const {
    DDMat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < o.cols; ++j) {
        dd acc(0.0L);
        for (int k = 0; k < cols; ++k) acc = acc + (*this)(i, k) * o(k, j);
        r(i, j) = acc;
      }
    return r;
  }
  DDMat operator-() const {
    DDMat r = *this;
    for (auto& v : r.a) v = -v;
    return r;
  }
  dd det2() const { return a[0] * a[3] - a[1] * a[2]; }
  DDMat inv2() const {
    dd d = det2();
    DDMat r(2, 2);
    r(0, 0) = a[3] / d;
    r(0, 1) = -dd(a[1].hi, a[1].lo) / d;
    r(1, 0) = -dd(a[2].hi, a[2].lo) / d;
    r(1, 1) = a[0] / d;
    return r;
  }
  dd trace() const {
    dd t(0.0L);
    for (int i = 0; i < rows; ++i) t = t + (*this)(i, i);
    return t;
  }
};

}  // namespace pantograph
