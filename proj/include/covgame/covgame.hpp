#pragma once

#include "covgame/assignment.hpp"
#include "covgame/distance.hpp"
#include "covgame/equilibria.hpp"
#include "covgame/errors.hpp"
#include "covgame/experiments.hpp"
#include "covgame/game.hpp"
#include "covgame/instances.hpp"
#include "covgame/lll.hpp"
#include "covgame/lp.hpp"
#include "covgame/random.hpp"
