#pragma once

#include "iwsurv/estimation.hpp"

#include <span>
#include <string_view>

namespace iwsurv {

enum class FixtureId { A, B, C };

/// A: 50 ordered draws from IW(1, 1.1).
/// B: 50 ordered draws from IW(1, 4.1).
/// C: 15 insulating-fluid times to breakdown, in minutes.
std::span<const double> fixture_values(FixtureId id);
Sample fixture(FixtureId id);

/// Accepts "A", "B", "C" in either case.
FixtureId parse_fixture_id(std::string_view name);

} // namespace iwsurv
