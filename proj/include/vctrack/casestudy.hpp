#pragma once

#include <string>
#include <vector>

#include "vctrack/rational.hpp"

namespace vctrack::casestudy {

inline constexpr const char* kApp = "clashroyale";
inline constexpr const char* kChestId = "cs-2";
inline constexpr const char* kWizardsId = "cs-4";

/// $19.99 for 2500 gems, 250 of them on a magic chest.
inline Rational golden_chest() { return Rational(1999, 1000); }
/// 800 of 1000 gold bought for 60 of those gems.
inline Rational golden_wizards() { return Rational(5997, 15625); }

/// The six-event log: gem pack, chest, gold pack, wizards, then a grant and
/// a resale that must not disturb the two attributions. Every quantity
/// (currency units and item counts) is multiplied by `scale`.
std::vector<std::string> log_lines(unsigned scale = 1);

} // namespace vctrack::casestudy
