#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "qpadic/errors.hpp"

namespace qpadic {

// Exact rational with a distinct +infinity, used for valuations.
// Denominators divide the ambient ramification index, so 64-bit components
// are ample. Always stored reduced with a positive denominator.
class ExactRational {
 public:
  ExactRational() : num_(0), den_(1) {}
  ExactRational(std::int64_t n) : num_(n), den_(1) {}
  ExactRational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (den_ == 0) raise(errc::bad_argument, "rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  static ExactRational infinity() {
    ExactRational r;
    r.inf_ = true;
    return r;
  }

  bool is_infinite() const { return inf_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return !inf_ && den_ == 1; }

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    if (a.inf_ || b.inf_) return infinity();
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
    if (a.inf_) return infinity();
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    if (a.inf_ || b.inf_) return infinity();
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  ExactRational operator-() const {
    if (inf_) return infinity();
    return {-num_, den_};
  }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const ExactRational& a, const ExactRational& b) { return !(a == b); }
  friend bool operator<(const ExactRational& a, const ExactRational& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const ExactRational& a, const ExactRational& b) { return a < b || a == b; }
  friend bool operator>(const ExactRational& a, const ExactRational& b) { return b < a; }
  friend bool operator>=(const ExactRational& a, const ExactRational& b) { return b <= a; }

  static ExactRational min(const ExactRational& a, const ExactRational& b) { return a < b ? a : b; }

  std::string str() const {
    if (inf_) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  std::int64_t num_;
  std::int64_t den_;
  bool inf_ = false;
};

}  // namespace qpadic
