#pragma once

#include <vector>

#include "stvsr/tensor.hpp"

namespace stvsr::detail {

/// In-place unnormalized 3-D DFT of a (t, h, w) complex array.
void fft3_inplace(const Shape3& shape, std::vector<Complex>& data, bool inverse);

}  // namespace stvsr::detail
