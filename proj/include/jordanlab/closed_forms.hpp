#pragma once

#include "jordanlab/geometry.hpp"
#include "jordanlab/report.hpp"

namespace jordanlab {

// Affine-coordinate formulas for J and M on the projective line compared with
// the projector construction. samples == 0 on a finite field means every tuple.
// Also records a witness on which the +xz denominator breaks J^{xz}_a(a) = a.
CheckReport closed_form_crosscheck(RingRef field, std::uint64_t samples, std::uint64_t seed, bool parallel = true);

}  // namespace jordanlab
