#pragma once

// Umbrella header.

#include "confint/core.hpp"
#include "confint/errors.hpp"
#include "confint/oracle.hpp"
#include "confint/region.hpp"
#include "confint/solver.hpp"
#include "confint/textio.hpp"
#include "confint/types.hpp"
