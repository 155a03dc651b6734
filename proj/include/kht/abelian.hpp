#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ints.hpp"

namespace kht {

// finitely generated abelian group Z^free_rank + sum of Z_d with d an
// invariant-factor chain d_1 | d_2 | ..., every d >= 2
struct AbelianGroup {
  int64_t free_rank = 0;
  std::vector<Int> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

  // prime-power decomposition, as sorted values p^e (multiset)
  std::vector<Int> primary() const {
    std::vector<Int> out;
    for (Int d : torsion) {
      for (Int p = 2; p * p <= d; ++p) {
        if (d % p != 0) continue;
        Int pe = 1;
        while (d % p == 0) {
          pe *= p;
          d /= p;
        }
        out.push_back(pe);
      }
      if (d > 1) out.push_back(d);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool has_primary_factor(const Int& pe) const {
    const auto pr = primary();
    return std::find(pr.begin(), pr.end(), pe) != pr.end();
  }

  // "0", "Z", "Z^2", "Z + Z_2", "Z_2 + Z_4", ...
  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
      if (!first) os << " + ";
      first = false;
    };
    if (free_rank == 1) {
      sep();
      os << "Z";
    } else if (free_rank > 1) {
      sep();
      os << "Z^" << free_rank;
    }
    for (const Int& d : torsion) {
      sep();
      os << "Z_" << d.str();
    }
    return os.str();
  }
};

// inverse of AbelianGroup::str, accepting "" and "0" as the trivial group
inline AbelianGroup parse_group(const std::string& text) {
  AbelianGroup g;
  std::string s = text;
  for (char& c : s)
    if (c == '+') c = ' ';
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    if (tok == "0") continue;
    try {
      if (tok == "Z")
        g.free_rank += 1;
      else if (tok.rfind("Z^", 0) == 0)
        g.free_rank += std::stoll(tok.substr(2));
      else if (tok.rfind("Z_", 0) == 0)
        g.torsion.push_back(Int(tok.substr(2)));
      else
        throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed group token \"" + tok + "\"");
    }
  }
  std::sort(g.torsion.begin(), g.torsion.end());
  return g;
}

}  // namespace kht
