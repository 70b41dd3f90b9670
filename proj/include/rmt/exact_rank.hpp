#ifndef RMT_EXACT_RANK_HPP_
#define RMT_EXACT_RANK_HPP_

#include "rmt/ensemble.hpp"

namespace rmt {

/// True when every entry is an integer of magnitude below 2^52.
bool has_integer_entries(const Matrix& m);

/// Rank over the rationals of an integer matrix.
///
/// Elimination modulo the prime 2^61 - 1 settles the full-rank case (a
/// nonzero minor mod p is nonzero over Z); otherwise fraction-free Bareiss
/// elimination in arbitrary precision gives the exact rank.
/// Throws ParameterError on non-integer entries.
int exact_rank(const Matrix& m);

/// Rank modulo 2^61 - 1; a lower bound for the rational rank.
int modular_rank(const Matrix& m);

/// Fraction-free elimination only, no modular shortcut.
int bareiss_rank(const Matrix& m);

inline bool exactly_singular(const Matrix& m) {
  return m.rows() != m.cols() || exact_rank(m) < m.rows();
}

}  // namespace rmt

#endif  // RMT_EXACT_RANK_HPP_
