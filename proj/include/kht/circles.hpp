#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "diagram.hpp"
#include "unionfind.hpp"

namespace kht {

// Kauffman state: one marker per crossing, in word order
struct KauffmanState {
  std::vector<Marker> labels;

  // bit (c-1-t) of the mask is 1 when crossing t carries B, so ascending masks
  // enumerate label strings in lexicographic order with A < B
  static KauffmanState from_mask(uint32_t mask, int crossings) {
    KauffmanState s;
    s.labels.resize(crossings);
    for (int t = 0; t < crossings; ++t)
      s.labels[t] = (mask >> (crossings - 1 - t)) & 1u ? Marker::B : Marker::A;
    return s;
  }

  uint32_t to_mask() const {
    uint32_t m = 0;
    const int c = (int)labels.size();
    for (int t = 0; t < c; ++t)
      if (labels[t] == Marker::B) m |= 1u << (c - 1 - t);
    return m;
  }

  friend bool operator==(const KauffmanState&, const KauffmanState&) = default;
};

// circles of a fully smoothed diagram, numbered canonically by smallest arc id
struct CircleDecomposition {
  int count = 0;
  std::vector<int> circle_of_arc;  // arc id -> circle index
  std::vector<int> min_arc;        // circle index -> smallest arc on it
};

// fixed arc layout of a word: arcs 0..strands-1 are the top boundary arcs,
// letter l owns outgoing arcs strands+2l (left) and strands+2l+1 (right);
// every letter's incoming arcs and the bottom boundary depend only on the word
struct WordArcs {
  int strands = 0;
  int total = 0;
  std::vector<int> in0, in1;  // per letter
  std::vector<int> bottom;    // per strand position, after the last letter

  explicit WordArcs(const SmoothedBraidWord& w) {
    strands = w.strands;
    total = w.strands + 2 * (int)w.letters.size();
    bottom.resize(w.strands);
    for (int p = 0; p < w.strands; ++p) bottom[p] = p;
    in0.resize(w.letters.size());
    in1.resize(w.letters.size());
    for (int l = 0; l < (int)w.letters.size(); ++l) {
      const int i = w.letters[l].index - 1;
      in0[l] = bottom[i];
      in1[l] = bottom[i + 1];
      bottom[i] = w.strands + 2 * l;
      bottom[i + 1] = w.strands + 2 * l + 1;
    }
  }

  int out0(int l) const { return strands + 2 * l; }
  int out1(int l) const { return strands + 2 * l + 1; }
};

// does this letter become a cup-cap under the given marker
inline bool cupcap_under(const Letter& l, Marker m) {
  if (!l.is_crossing()) return true;
  return (l.sign > 0) == (m == Marker::B);
}

namespace detail {

// reusable buffers so hot loops resolve states without allocating
struct ResolveScratch {
  std::vector<int> parent;
};

inline void resolve_arcs_into(const SmoothedBraidWord& w, const WordArcs& arcs, uint32_t mask,
                              ResolveScratch& scratch, CircleDecomposition& d) {
  auto& parent = scratch.parent;
  parent.resize(arcs.total);
  for (int a = 0; a < arcs.total; ++a) parent[a] = a;
  auto find = [&parent](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&parent, &find](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  };

  const int c = w.crossing_count();
  int t = 0;
  for (int l = 0; l < (int)w.letters.size(); ++l) {
    const Letter& letter = w.letters[l];
    Marker m = Marker::A;
    if (letter.is_crossing()) {
      m = (mask >> (c - 1 - t)) & 1u ? Marker::B : Marker::A;
      ++t;
    }
    if (cupcap_under(letter, m)) {
      unite(arcs.in0[l], arcs.in1[l]);
      unite(arcs.out0(l), arcs.out1(l));
    } else {
      unite(arcs.in0[l], arcs.out0(l));
      unite(arcs.in1[l], arcs.out1(l));
    }
  }
  for (int p = 0; p < arcs.strands; ++p) unite(arcs.bottom[p], p);

  // roots are class minima, so ascending arc order numbers circles canonically
  d.count = 0;
  d.circle_of_arc.resize(arcs.total);
  d.min_arc.clear();
  for (int a = 0; a < arcs.total; ++a) {
    const int r = find(a);
    if (r == a) {
      d.min_arc.push_back(a);
      d.circle_of_arc[a] = d.count++;
    } else {
      d.circle_of_arc[a] = d.circle_of_arc[r];
    }
  }
}

inline CircleDecomposition resolve_arcs(const SmoothedBraidWord& w, const WordArcs& arcs,
                                        uint32_t mask) {
  ResolveScratch scratch;
  CircleDecomposition d;
  resolve_arcs_into(w, arcs, mask, scratch, d);
  return d;
}

}  // namespace detail

inline CircleDecomposition resolve(const SmoothedBraidWord& w, const KauffmanState& s) {
  validate(w);
  if ((int)s.labels.size() != w.crossing_count())
    throw std::invalid_argument("state has wrong number of labels for word");
  WordArcs arcs(w);
  return detail::resolve_arcs(w, arcs, s.to_mask());
}

// local effect of flipping one crossing's marker: either two source circles merge
// into one target circle, or one source circle splits into two target circles;
// all other circles correspond one to one and carry their signs across
struct Resmoothing {
  bool is_merge = false;
  int x = -1, y = -1;        // merge: the two source circles; split: x only (y unused)
  int z = -1, z2 = -1;       // merge: target circle z; split: targets z and z2
  std::vector<int> carry;    // per target circle: matching source circle, or -1 at z/z2
};

inline Resmoothing resmooth(const WordArcs& arcs, const CircleDecomposition& src,
                            const CircleDecomposition& tgt, int letter_pos) {
  const int site[4] = {arcs.in0[letter_pos], arcs.in1[letter_pos], arcs.out0(letter_pos),
                       arcs.out1(letter_pos)};
  int sspec[2] = {-1, -1}, tspec[2] = {-1, -1};
  int ns = 0, nt = 0;
  auto add = [](int spec[2], int& n, int c) {
    for (int i = 0; i < n; ++i)
      if (spec[i] == c) return true;
    if (n == 2) return false;
    spec[n++] = c;
    return true;
  };
  bool ok = true;
  for (int a : site) {
    ok = ok && add(sspec, ns, src.circle_of_arc[a]);
    ok = ok && add(tspec, nt, tgt.circle_of_arc[a]);
  }
  if (!ok || ns + nt != 3)
    throw std::logic_error("resmoothing must merge two circles or split one");

  Resmoothing r;
  r.is_merge = (ns == 2);
  if (r.is_merge) {
    r.x = std::min(sspec[0], sspec[1]);
    r.y = std::max(sspec[0], sspec[1]);
    r.z = tspec[0];
  } else {
    r.x = sspec[0];
    r.z = std::min(tspec[0], tspec[1]);
    r.z2 = std::max(tspec[0], tspec[1]);
  }
  r.carry.assign(tgt.count, -1);
  for (int ct = 0; ct < tgt.count; ++ct) {
    if (ct == r.z || (!r.is_merge && ct == r.z2)) continue;
    r.carry[ct] = src.circle_of_arc[tgt.min_arc[ct]];
  }
  return r;
}

}  // namespace kht
