#pragma once

#include <vector>

#include "share/geometry.hpp"
#include "share/signal.hpp"

namespace share {

/// Output of every estimator: one (theta, r) label per recovered source,
/// the matching waveform rows and the final data-fit residual.
template <typename Scalar = double>
struct EstimateSet {
  std::vector<SourceTruth<Scalar>> entries;
  CMatrix<Scalar> waveforms;
  Scalar residual_norm = Scalar(0);

  int L() const { return static_cast<int>(entries.size()); }
};

}  // namespace share
