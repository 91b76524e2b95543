#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace knlb {

// Exact positive-or-zero rational used for the scaling exponent q, so that
// floor(2q) and floor(4q/3) are computed without rounding at integer boundaries.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Accepts "3", "4/3", or a terminating decimal such as "1.25".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return double(num_) / double(den_); }

  // floor(q * a / b) for positive a, b.
  std::int64_t floor_scaled(std::int64_t a, std::int64_t b) const;

  std::int64_t floor_two_q() const { return floor_scaled(2, 1); }
  std::int64_t floor_four_thirds_q() const { return floor_scaled(4, 3); }
  std::int64_t floor_q() const { return floor_scaled(1, 1); }

  std::string str() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace knlb
