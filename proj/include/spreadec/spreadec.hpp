#pragma once

#include "bigint.hpp"
#include "channel.hpp"
#include "decoder.hpp"
#include "field_tower.hpp"
#include "matspace.hpp"
#include "rng.hpp"
#include "spread_code.hpp"
#include "stats.hpp"
