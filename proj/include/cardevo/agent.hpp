#pragma once

#include <array>

#include "cardevo/cards.hpp"
#include "cardevo/game_state.hpp"

namespace cardevo {

using CardTriple = std::array<const Card*, 3>;

// A playing policy. Implementations must be stateless with respect to the
// match (decisions depend only on the call arguments), so one instance can
// serve many concurrent games.
class Agent {
 public:
  virtual ~Agent() = default;

  // Draft-phase choice: index 0..2 into the offered triple.
  virtual int pick(const CardTriple& triple) const = 0;

  // Battle-phase choice; called repeatedly within a turn until it returns
  // Pass. Must return an action legal for the given view.
  virtual Action act(const PlayerView& view) const = 0;
};

}  // namespace cardevo
