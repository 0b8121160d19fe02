#ifndef MORSE2D_PIPELINE_HPP
#define MORSE2D_PIPELINE_HPP

#include <chrono>

#include "algebra.hpp"
#include "complex.hpp"
#include "dgvf.hpp"
#include "frameflow.hpp"
#include "morse_boundary.hpp"

namespace morse2d {

struct StageTimes {
  double frame_ms = 0;
  double boundary_ms = 0;
  double snf_ms = 0;
};

struct HomologyReport {
  MorseMatching matching;
  MorseCounts counts;
  MorseBoundaryOperator op;
  HomologyResult integral;
  HomologyResult result;  // over the requested coefficients
  StageTimes times;
  OpCounter frame_ops;
  OpCounter boundary_ops;
};

// Optimal field, Morse boundary operator, SNF, then universal coefficients.
inline HomologyReport calc_homology(const OrientedComplex2& c, const AbelianGroup& coefficients = AbelianGroup::integers(),
                                    const MainFrameOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  HomologyReport r;
  auto t0 = clock::now();
  MainFrameHooks hooks;
  hooks.ops = &r.frame_ops;
  r.matching = main_frame(c, opt, hooks);
  auto t1 = clock::now();
  r.counts = critical_cells(r.matching, c);
  r.op = calc_bdry_op(c, r.matching, &r.boundary_ops);
  auto t2 = clock::now();
  r.integral = morse_homology(r.op);
  r.result = coefficients == AbelianGroup::integers() ? r.integral
                                                      : homology_with_coefficients(r.integral, coefficients);
  auto t3 = clock::now();
  r.times = {ms(t0, t1), ms(t1, t2), ms(t2, t3)};
  return r;
}

}  // namespace morse2d

#endif  // MORSE2D_PIPELINE_HPP
