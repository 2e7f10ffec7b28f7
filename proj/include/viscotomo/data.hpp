// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef VISCOTOMO_DATA_HPP
#define VISCOTOMO_DATA_HPP

#include <cstddef>
#include <vector>

#include "viscotomo/frequency.hpp"

namespace viscotomo
{

// Complex pressure values recorded at every receiver for one source firing at
// one damped frequency.
struct FrequencyTrace
{
  int source_id = 0;
  ComplexFrequency omega{};
  std::vector<Complex> values;  // one entry per receiver, Pa
};

// A rectangular set of traces: every source appears with the same receiver
// layout for each frequency it was recorded at. This is the unit exchanged
// between forward modeling, noise injection, and inversion.
struct FrequencyData
{
  std::vector<FrequencyTrace> traces;

  [[nodiscard]] std::size_t value_count() const
  {
    std::size_t n = 0;
    for (const FrequencyTrace& t : traces)
      n += t.values.size();
    return n;
  }
};

}  // namespace viscotomo

#endif  // VISCOTOMO_DATA_HPP
