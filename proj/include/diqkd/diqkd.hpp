#pragma once

#include "diqkd/attack.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/keyrate.hpp"
#include "diqkd/mcsim.hpp"
#include "diqkd/noise.hpp"
#include "diqkd/qstate.hpp"
#include "diqkd/random.hpp"
#include "diqkd/svetlichny.hpp"
#include "diqkd/thresholds.hpp"
