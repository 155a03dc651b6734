#pragma once

#include <cctype>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kht {

enum class Marker : unsigned char { A, B };

// one letter of a smoothed braid word, acting on strands (index, index+1), 1-based
struct Letter {
  int index = 1;  // 1 <= index <= strands-1
  int sign = 0;   // +1 or -1 for a crossing sigma_index^{sign}, 0 for the flat tangle e_index
  bool is_crossing() const { return sign != 0; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

// braid word in which some letters may already be smoothed to flat tangles;
// the link diagram is the braid closure of the word
struct SmoothedBraidWord {
  int strands = 1;
  std::vector<Letter> letters;

  int crossing_count() const {
    int c = 0;
    for (const Letter& l : letters) c += l.is_crossing() ? 1 : 0;
    return c;
  }

  // 0-based letter position of each crossing, left to right
  std::vector<int> crossing_letter_positions() const {
    std::vector<int> out;
    for (int p = 0; p < (int)letters.size(); ++p)
      if (letters[p].is_crossing()) out.push_back(p);
    return out;
  }

  friend bool operator==(const SmoothedBraidWord&, const SmoothedBraidWord&) = default;
};

struct DiagramStats {
  int strands = 0;
  int letters = 0;
  int crossings = 0;
  int writhe = 0;           // sum of crossing signs (braid exponent sum)
  int oriented_writhe = 0;  // crossing signs weighted by traced strand directions
  int components = 0;       // components of the closure curve
};

// family D^(k) built from the torus braid on m strands: (sigma_{m-1} ... sigma_1)^n sigma_1^k
struct TorusFamilySpec {
  int m = 2;
  int n = 0;
  int k = 0;
};

inline void validate(const SmoothedBraidWord& w) {
  if (w.strands < 1) throw std::invalid_argument("braid word needs at least one strand");
  for (const Letter& l : w.letters) {
    if (l.sign < -1 || l.sign > 1)
      throw std::invalid_argument("letter sign must be -1, 0 or +1");
    if (l.index < 1 || l.index >= w.strands)
      throw std::invalid_argument("letter index " + std::to_string(l.index) +
                                  " out of range for " + std::to_string(w.strands) + " strands");
  }
}

// text form: optional "N:" strand prefix, then tokens "i" / "-i" (crossings) and "ei" (flat),
// separated by spaces or commas, e.g. "4: 3 2 1 3 2 1 e1"
inline SmoothedBraidWord parse_word(const std::string& text,
                                    std::optional<int> strands = std::nullopt) {
  std::string body = text;
  std::optional<int> prefix;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    try {
      size_t used = 0;
      int n = std::stoi(head, &used);
      while (used < head.size() && std::isspace((unsigned char)head[used])) ++used;
      if (used != head.size()) throw std::invalid_argument("");
      prefix = n;
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed strand prefix before ':' in \"" + text + "\"");
    }
    body = text.substr(colon + 1);
  }
  if (prefix && strands && *prefix != *strands)
    throw std::invalid_argument("strand prefix disagrees with supplied strand count");
  if (prefix) strands = prefix;

  SmoothedBraidWord w;
  int max_index = 0;
  for (char& c : body)
    if (c == ',') c = ' ';
  std::string tok;
  std::istringstream is(body);
  while (is >> tok) {
    Letter l;
    try {
      size_t used = 0;
      if (tok[0] == 'e') {
        l.index = std::stoi(tok.substr(1), &used);
        used += 1;
        l.sign = 0;
        if (l.index < 1) throw std::invalid_argument("");
      } else {
        int v = std::stoi(tok, &used);
        if (v == 0) throw std::invalid_argument("");
        l.index = std::abs(v);
        l.sign = v > 0 ? +1 : -1;
      }
      if (used != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed letter token \"" + tok + "\"");
    }
    max_index = std::max(max_index, l.index);
    w.letters.push_back(l);
  }
  w.strands = strands ? *strands : max_index + 1;
  validate(w);
  return w;
}

inline std::string render_word(const SmoothedBraidWord& w) {
  std::ostringstream os;
  os << w.strands << ":";
  for (const Letter& l : w.letters) {
    os << " ";
    if (l.is_crossing())
      os << l.sign * l.index;
    else
      os << "e" << l.index;
  }
  return os.str();
}

inline SmoothedBraidWord torus_word(int m, int n, int k) {
  if (m < 2) throw std::invalid_argument("torus braid needs at least two strands");
  if (n < 0) throw std::invalid_argument("torus braid repeat count must be nonnegative");
  SmoothedBraidWord w;
  w.strands = m;
  for (int r = 0; r < n; ++r)
    for (int i = m - 1; i >= 1; --i) w.letters.push_back({i, +1});
  for (int t = 0; t < std::abs(k); ++t) w.letters.push_back({1, k > 0 ? +1 : -1});
  return w;
}

inline SmoothedBraidWord word_for(const TorusFamilySpec& f) { return torus_word(f.m, f.n, f.k); }

// flat 2-cable of the (2, 2s+1) torus knot as a 4-strand word
inline SmoothedBraidWord flat_two_cabling_word(int s) {
  if (s < 1) throw std::invalid_argument("cabling parameter must be at least 1");
  return torus_word(4, 4 * s + 2, -(4 * s + 2));
}

inline DiagramStats stats(const SmoothedBraidWord& w) {
  validate(w);
  DiagramStats st;
  st.strands = w.strands;
  st.letters = (int)w.letters.size();
  for (const Letter& l : w.letters) {
    if (l.is_crossing()) {
      ++st.crossings;
      st.writhe += l.sign;
    }
  }
  // trace the closure curve through endpoint pairings: crossings transpose the
  // two strand positions, flat letters cap the incoming pair and cup the new one;
  // directions matter because a strand turns around at every flat letter, which
  // flips the signs of the crossings it then passes in the oriented writhe
  const int n = w.strands;
  const int L = (int)w.letters.size();
  const int arcs = n + 2 * L;
  // endpoint 2*arc is the top end of the arc, 2*arc+1 the bottom end
  std::vector<int> mate(2 * (size_t)arcs, -1);
  const auto pair_ends = [&](int e1, int e2) {
    mate[e1] = e2;
    mate[e2] = e1;
  };
  const auto top = [](int a) { return 2 * a; };
  const auto bot = [](int a) { return 2 * a + 1; };
  std::vector<int> cur(n);
  for (int p = 0; p < n; ++p) cur[p] = p;
  std::vector<std::pair<int, int>> upper(L, {-1, -1});
  for (int l = 0; l < L; ++l) {
    const int i = w.letters[l].index - 1;
    const int o0 = n + 2 * l, o1 = o0 + 1;
    upper[l] = {cur[i], cur[i + 1]};
    if (w.letters[l].is_crossing()) {
      pair_ends(bot(cur[i]), top(o1));
      pair_ends(bot(cur[i + 1]), top(o0));
    } else {
      pair_ends(bot(cur[i]), bot(cur[i + 1]));
      pair_ends(top(o0), top(o1));
    }
    cur[i] = o0;
    cur[i + 1] = o1;
  }
  for (int p = 0; p < n; ++p) pair_ends(bot(cur[p]), top(p));

  // orient each component so that its lowest-numbered arc points down the page
  std::vector<int> dir(arcs, 0);
  for (int a0 = 0; a0 < arcs; ++a0) {
    if (dir[a0] != 0) continue;
    ++st.components;
    int entry = top(a0);
    do {
      const int arc = entry / 2;
      dir[arc] = entry % 2 == 0 ? +1 : -1;
      entry = mate[entry ^ 1];  // leave through the other end, jump to its mate
    } while (entry != top(a0));
  }
  for (int l = 0; l < L; ++l)
    if (w.letters[l].is_crossing())
      st.oriented_writhe += w.letters[l].sign * dir[upper[l].first] * dir[upper[l].second];
  return st;
}

// replace the crossing at 0-based letter position with its A- or B-smoothing;
// sigma_i^{+1}: A is the identity tangle, B is e_i; sigma_i^{-1}: mirrored
inline SmoothedBraidWord smooth_at(const SmoothedBraidWord& w, int position, Marker m) {
  validate(w);
  if (position < 0 || position >= (int)w.letters.size())
    throw std::invalid_argument("smoothing position out of range");
  const Letter l = w.letters[position];
  if (!l.is_crossing()) throw std::invalid_argument("letter at position is already smoothed");
  SmoothedBraidWord out = w;
  const bool identity = (l.sign > 0) == (m == Marker::A);
  if (identity)
    out.letters.erase(out.letters.begin() + position);
  else
    out.letters[position] = Letter{l.index, 0};
  return out;
}

}  // namespace kht
