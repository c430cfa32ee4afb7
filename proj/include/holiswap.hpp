#pragma once

#include "holiswap/cache_model.hpp"
#include "holiswap/energy.hpp"
#include "holiswap/error.hpp"
#include "holiswap/key_value.hpp"
#include "holiswap/lookup.hpp"
#include "holiswap/metrics.hpp"
#include "holiswap/policy.hpp"
#include "holiswap/rng.hpp"
#include "holiswap/run_config.hpp"
#include "holiswap/trace.hpp"
#include "holiswap/trace_record.hpp"
