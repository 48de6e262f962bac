#pragma once

// Umbrella header.

#include "argbayes/acceptability.hpp"
#include "argbayes/argset.hpp"
#include "argbayes/config.hpp"
#include "argbayes/data_io.hpp"
#include "argbayes/errors.hpp"
#include "argbayes/framework.hpp"
#include "argbayes/gibbs.hpp"
#include "argbayes/harness.hpp"
#include "argbayes/inference.hpp"
#include "argbayes/lru_cache.hpp"
#include "argbayes/model.hpp"
#include "argbayes/random.hpp"
