#ifndef RETROAI_RATIONAL_HPP
#define RETROAI_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace retroai {

// Exact rational over int64. Always kept in lowest
// terms with a positive denominator, so defaulted equality is value equality.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by intent
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    normalize();
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  // Decimal rendering with at least one fractional digit: 10 -> "10.0",
  // 25/4 -> "6.25". Non-terminating expansions are rounded half-up to
  // `max_digits` places.
  std::string to_decimal(int max_digits = 4) const {
    std::int64_t n = num_ < 0 ? -num_ : num_;
    std::string out = num_ < 0 ? "-" : "";
    out += std::to_string(n / den_);
    std::int64_t rem = n % den_;
    std::string frac;
    for (int i = 0; i < max_digits && rem != 0; ++i) {
      rem *= 10;
      frac.push_back(static_cast<char>('0' + rem / den_));
      rem %= den_;
    }
    if (rem != 0 && rem * 2 >= den_) {
      // Round the truncated expansion up, propagating carries.
      std::string whole = out.substr(num_ < 0 ? 1 : 0);
      std::string digits = whole + frac;
      int i = static_cast<int>(digits.size()) - 1;
      while (i >= 0 && digits[static_cast<std::size_t>(i)] == '9') {
        digits[static_cast<std::size_t>(i)] = '0';
        --i;
      }
      if (i < 0) {
        digits.insert(digits.begin(), '1');
      } else {
        ++digits[static_cast<std::size_t>(i)];
      }
      std::size_t whole_len = digits.size() - frac.size();
      out = (num_ < 0 ? "-" : "") + digits.substr(0, whole_len);
      frac = digits.substr(whole_len);
      while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    }
    if (frac.empty()) frac = "0";
    return out + "." + frac;
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace retroai

#endif  // RETROAI_RATIONAL_HPP
