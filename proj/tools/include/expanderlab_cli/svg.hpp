#pragma once

#include <string>

#include "expanderlab/spectral.hpp"

namespace expanderlab::cli {

/// Static plot of the effective potential V and the first eigenfunction
/// over the operator grid.
std::string spectrum_plot_svg(const WeightedOperator1D& op, const SpectrumResult& result, const std::string& title);

}  // namespace expanderlab::cli
