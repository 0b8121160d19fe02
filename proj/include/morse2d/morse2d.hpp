#ifndef MORSE2D_MORSE2D_HPP
#define MORSE2D_MORSE2D_HPP

#include "algebra.hpp"
#include "cancellation.hpp"
#include "common.hpp"
#include "complex.hpp"
#include "dgvf.hpp"
#include "frameflow.hpp"
#include "morse_boundary.hpp"
#include "oracle.hpp"
#include "pipeline.hpp"

#endif  // MORSE2D_MORSE2D_HPP
