#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "ints.hpp"

namespace kht {

// sparse Laurent polynomial in one variable with Int coefficients
class Laurent {
 public:
  Laurent() = default;

  static Laurent term(Int coeff, int exp) {
    Laurent p;
    if (coeff != 0) p.c_[exp] = std::move(coeff);
    return p;
  }

  const std::map<int, Int>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  Int coeff(int exp) const {
    auto it = c_.find(exp);
    return it == c_.end() ? Int(0) : it->second;
  }

  Laurent& operator+=(const Laurent& o) {
    for (const auto& [e, v] : o.c_) add(e, v);
    return *this;
  }
  friend Laurent operator+(Laurent a, const Laurent& b) {
    a += b;
    return a;
  }
  Laurent operator-() const {
    Laurent r;
    for (const auto& [e, v] : c_) r.c_[e] = -v;
    return r;
  }
  friend Laurent operator-(Laurent a, const Laurent& b) {
    a += -b;
    return a;
  }
  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    for (const auto& [ea, va] : a.c_)
      for (const auto& [eb, vb] : b.c_) r.add(ea + eb, va * vb);
    return r;
  }
  friend bool operator==(const Laurent& a, const Laurent& b) { return a.c_ == b.c_; }

  Laurent pow(int n) const {
    Laurent r = term(1, 0);
    for (int i = 0; i < n; ++i) r = r * *this;
    return r;
  }

  // descending exponents, e.g. "A^5 + A" or "-A^-9 + 2"
  std::string str(const std::string& var = "A") const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      const auto& [e, v] = *it;
      if (first) {
        if (v < 0) os << "-";
        first = false;
      } else {
        os << (v < 0 ? " - " : " + ");
      }
      Int m = abs_int(v);
      if (m != 1 || e == 0) os << m.str();
      if (e != 0) {
        os << var;
        if (e != 1) os << "^" << e;
      }
    }
    return os.str();
  }

 private:
  void add(int e, const Int& v) {
    auto& slot = c_[e];
    slot += v;
    if (slot == 0) c_.erase(e);
  }

  std::map<int, Int> c_;
};

}  // namespace kht
