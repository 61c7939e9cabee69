#pragma once

#include "lorasim/adr.hpp"
#include "lorasim/channel.hpp"
#include "lorasim/config_space.hpp"
#include "lorasim/mobility.hpp"
#include "lorasim/phy.hpp"
#include "lorasim/rng.hpp"
#include "lorasim/runner.hpp"
#include "lorasim/scenario.hpp"
#include "lorasim/simulation.hpp"
