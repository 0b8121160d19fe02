#ifndef MORSE2D_ORACLE_HPP
#define MORSE2D_ORACLE_HPP

#include <string>

#include "algebra.hpp"
#include "common.hpp"
#include "complex.hpp"
#include "dgvf.hpp"
#include "morse_boundary.hpp"

namespace morse2d {

// Brute-force references. Nothing here uses the gradient machinery beyond
// explicit path enumeration.

struct FullChainComplex {
  IntMatrix d1;  // V x E
  IntMatrix d2;  // E x T
};

inline FullChainComplex full_chain_complex(const OrientedComplex2& c) {
  FullChainComplex f;
  f.d1 = IntMatrix(c.num_cells(0), c.num_cells(1));
  f.d2 = IntMatrix(c.num_cells(1), c.num_cells(2));
  for (int q = 1; q <= 2; ++q) {
    IntMatrix& d = q == 1 ? f.d1 : f.d2;
    const CellId row0 = c.first_id(q - 1), col0 = c.first_id(q);
    for (std::size_t j = 0; j < c.num_cells(q); ++j) {
      const CellId s = col0 + static_cast<CellId>(j);
      const auto faces = c.faces(s);
      for (std::size_t i = 0; i < faces.size(); ++i)
        d(static_cast<std::size_t>(faces[i] - row0), j) = OrientedComplex2::face_sign(i);
    }
    for (std::size_t i = 0; i < c.num_cells(q - 1); ++i) d.row_ids.push_back(row0 + static_cast<CellId>(i));
    for (std::size_t j = 0; j < c.num_cells(q); ++j) d.col_ids.push_back(col0 + static_cast<CellId>(j));
  }
  return f;
}

inline HomologyResult oracle_homology(const OrientedComplex2& c) {
  const auto f = full_chain_complex(c);
  return homology_from_chain(f.d1, f.d2);
}

// Betti numbers over Z_p straight from ranks mod p of the full boundary maps.
inline std::array<std::size_t, 3> oracle_betti_mod(const OrientedComplex2& c, int p) {
  const auto f = full_chain_complex(c);
  const std::size_t r1 = mod_m_rank(f.d1, p), r2 = mod_m_rank(f.d2, p);
  return {c.num_cells(0) - r1, c.num_cells(1) - r1 - r2, c.num_cells(2) - r2};
}

inline constexpr std::size_t kOracleCellCap = 500;

inline MorseBoundaryOperator oracle_morse_operator(const OrientedComplex2& c, const MorseMatching& m,
                                                   std::size_t cap = kOracleCellCap) {
  if (c.num_cells() > cap)
    throw Error("complex has " + std::to_string(c.num_cells()) + " cells, above the oracle cap of " +
                std::to_string(cap));
  return enumerate_bdry_op(c, m);
}

inline HomologyResult oracle_morse_homology(const OrientedComplex2& c, const MorseMatching& m,
                                            std::size_t cap = kOracleCellCap) {
  return morse_homology(oracle_morse_operator(c, m, cap));
}

}  // namespace morse2d

#endif  // MORSE2D_ORACLE_HPP
