#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pantograph {

// Small arbitrary-precision integer: sign + base-2^32 magnitude.  Only what
// exact simplex pivoting needs: add, sub, mul, divmod, gcd, compare.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v);

  static BigInt from_string(const std::string& s);
  std::string to_string() const;

  bool is_zero() const { return mag_.empty(); }
  int sign() const { return mag_.empty() ? 0 : sign_; }
  bool fits_longlong() const;
  long long to_longlong() const;
  double to_double() const;

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator/(const BigInt& o) const;  // truncated quotient
  BigInt operator%(const BigInt& o) const;

  bool operator==(const BigInt& o) const { return cmp(o) == 0; }
  bool operator!=(const BigInt& o) const { return cmp(o) != 0; }
  bool operator<(const BigInt& o) const { return cmp(o) < 0; }
  bool operator<=(const BigInt& o) const { return cmp(o) <= 0; }
  bool operator>(const BigInt& o) const { return cmp(o) > 0; }
  bool operator>=(const BigInt& o) const { return cmp(o) >= 0; }

  static BigInt gcd(BigInt a, BigInt b);

 private:
  int sign_ = 1;                  // meaningful only when mag_ nonempty
  std::vector<uint32_t> mag_;     // little-endian limbs

  int cmp(const BigInt& o) const;
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);  // a >= b
  static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r);
  void trim();
};

// Exact rational with normalized sign and gcd-reduced terms.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(long long v) : num_(v), den_(1) {}
  Rat(BigInt n, BigInt d);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }
  double to_double() const { return num_.to_double() / den_.to_double(); }

  Rat operator-() const;
  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;

  bool operator==(const Rat& o) const;
  bool operator<(const Rat& o) const;
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  std::string to_string() const;

 private:
  BigInt num_, den_;  // den > 0
  void normalize();
};

}  // namespace pantograph
