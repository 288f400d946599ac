#include "pantograph/rational.hpp"

#include <algorithm>

namespace pantograph {

BigInt::BigInt(long long v) {
  if (v < 0) {
    sign_ = -1;
    unsigned long long u = (unsigned long long)(-(v + 1)) + 1ull;
    while (u) {
      mag_.push_back(uint32_t(u & 0xffffffffull));
      u >>= 32;
    }
  } else {
    sign_ = 1;
    unsigned long long u = (unsigned long long)v;
    while (u) {
      mag_.push_back(uint32_t(u & 0xffffffffull));
      u >>= 32;
    }
  }
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 1;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

int BigInt::cmp(const BigInt& o) const {
  if (mag_.empty() && o.mag_.empty()) return 0;
  int sa = sign(), sb = o.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  int m = cmp_mag(mag_, o.mag_);
  return sa >= 0 ? m : -m;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r;
  uint64_t carry = 0;
  for (size_t i = 0; i < std::max(a.size(), b.size()) || carry; ++i) {
    uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r.push_back(uint32_t(s & 0xffffffffull));
    carry = s >> 32;
  }
  return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r;
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t s = int64_t(a[i]) - borrow - (i < b.size() ? int64_t(b[i]) : 0);
    if (s < 0) {
      s += (int64_t(1) << 32);
      borrow = 1;
    } else
      borrow = 0;
    r.push_back(uint32_t(s));
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.size() || carry; ++j) {
      uint64_t cur = r[i + j] + carry;
      if (j < b.size()) cur += uint64_t(a[i]) * b[j];
      r[i + j] = uint32_t(cur & 0xffffffffull);
      carry = cur >> 32;
    }
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  if (b.empty()) throw std::domain_error("BigInt: division by zero");
  q.assign(a.size(), 0);
  r.clear();
  for (size_t i = a.size(); i-- > 0;) {
    // r = r * 2^32 + a[i]
    r.insert(r.begin(), a[i]);
    while (!r.empty() && r.back() == 0) r.pop_back();
    // binary search digit d in [0, 2^32) with b*d <= r
    uint64_t lo = 0, hi = 0xffffffffull;
    while (lo < hi) {
      uint64_t mid = (lo + hi + 1) >> 1;
      std::vector<uint32_t> t = mul_mag(b, {uint32_t(mid & 0xffffffffull), uint32_t(mid >> 32)});
      while (!t.empty() && t.back() == 0) t.pop_back();
      if (cmp_mag(t, r) <= 0)
        lo = mid;
      else
        hi = mid - 1;
    }
    q[i] = uint32_t(lo);
    std::vector<uint32_t> t = mul_mag(b, {uint32_t(lo & 0xffffffffull), uint32_t(lo >> 32)});
    while (!t.empty() && t.back() == 0) t.pop_back();
    r = sub_mag(r, t);
  }
  while (!q.empty() && q.back() == 0) q.pop_back();
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  if (!r.mag_.empty()) r.sign_ = -r.sign_;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  if (sign() == 0) return o;
  if (o.sign() == 0) return *this;
  if (sign_ == o.sign_) {
    r.sign_ = sign_;
    r.mag_ = add_mag(mag_, o.mag_);
  } else {
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) return BigInt(0);
    if (c > 0) {
      r.sign_ = sign_;
      r.mag_ = sub_mag(mag_, o.mag_);
    } else {
      r.sign_ = o.sign_;
      r.mag_ = sub_mag(o.mag_, mag_);
    }
  }
  r.trim();
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  BigInt r;
  r.mag_ = mul_mag(mag_, o.mag_);
  r.sign_ = sign_ * o.sign_;
  r.trim();
  return r;
}

BigInt BigInt::operator/(const BigInt& o) const {
  BigInt q, r;
  std::vector<uint32_t> qm, rm;
  divmod_mag(mag_, o.mag_, qm, rm);
  q.mag_ = qm;
  q.sign_ = sign_ * o.sign_;
  q.trim();
  return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
  BigInt r;
  std::vector<uint32_t> qm, rm;
  divmod_mag(mag_, o.mag_, qm, rm);
  r.mag_ = rm;
  r.sign_ = sign_;
  r.trim();
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  if (a.sign() < 0) a = -a;
  if (b.sign() < 0) b = -b;
  while (!b.is_zero()) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a.is_zero() ? BigInt(1) : a;
}

bool BigInt::fits_longlong() const {
  if (mag_.size() > 2) return false;
  unsigned long long v = 0;
  for (size_t i = mag_.size(); i-- > 0;) v = (v << 32) | mag_[i];
  return v <= 0x7fffffffffffffffull;
}

long long BigInt::to_longlong() const {
  unsigned long long v = 0;
  for (size_t i = mag_.size(); i-- > 0;) v = (v << 32) | mag_[i];
  return sign() < 0 ? -(long long)v : (long long)v;
}

double BigInt::to_double() const {
  double v = 0;
  for (size_t i = mag_.size(); i-- > 0;) v = v * 4294967296.0 + mag_[i];
  return sign() < 0 ? -v : v;
}

BigInt BigInt::from_string(const std::string& s) {
  BigInt r(0);
  size_t i = 0;
  int sg = 1;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) sg = s[i++] == '-' ? -1 : 1;
  for (; i < s.size(); ++i) r = r * BigInt(10) + BigInt(s[i] - '0');
  return sg < 0 ? -r : r;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  BigInt t = sign() < 0 ? -*this : *this;
  std::string out;
  while (!t.is_zero()) {
    BigInt q = t / BigInt(10);
    BigInt r = t - q * BigInt(10);
    out.push_back(char('0' + (r.is_zero() ? 0 : r.to_longlong())));
    t = q;
  }
  if (sign() < 0) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

Rat::Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

void Rat::normalize() {
  if (den_.is_zero()) throw std::domain_error("Rat: zero denominator");
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  BigInt g = BigInt::gcd(num_, den_);
  num_ = num_ / g;
  den_ = den_ / g;
}

Rat Rat::operator-() const { return Rat(-num_, den_); }
Rat Rat::operator+(const Rat& o) const { return Rat(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
Rat Rat::operator-(const Rat& o) const { return Rat(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
Rat Rat::operator*(const Rat& o) const { return Rat(num_ * o.num_, den_ * o.den_); }
Rat Rat::operator/(const Rat& o) const {
  if (o.is_zero()) throw std::domain_error("Rat: division by zero");
  return Rat(num_ * o.den_, den_ * o.num_);
}
bool Rat::operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
bool Rat::operator<(const Rat& o) const { return (num_ * o.den_) < (o.num_ * den_); }

std::string Rat::to_string() const {
  if (den_ == BigInt(1)) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

}  // namespace pantograph
