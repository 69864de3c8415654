#pragma once

#include <vector>

#include "covertlink/complex_buffer.hpp"
#include "covertlink/ofdm/config.hpp"

namespace covertlink::ofdm {

/// One 16-sample period of the short training symbol (unit average power).
const std::vector<cdouble>& stf_period();

/// One 64-sample long training symbol (time domain).
const std::vector<cdouble>& ltf_symbol();

/// Frequency-domain long-training values per subcarrier (-32..31 order by
/// bin), +/-1 on the 52 occupied bins, 0 elsewhere.
const std::vector<double>& ltf_sequence();

/// Full 320-sample preamble: 10 short periods, 32-sample guard, two long
/// symbols.
std::vector<cdouble> build_preamble();

}  // namespace covertlink::ofdm
