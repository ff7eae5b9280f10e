#pragma once

#include "wft/core.hpp"
#include "wft/system_model.hpp"
#include "wft/riemann.hpp"
#include "wft/profile.hpp"
#include "wft/front.hpp"
#include "wft/tracker.hpp"
#include "wft/log_io.hpp"
#include "wft/diagnostics.hpp"
#include "wft/oracle.hpp"
#include "wft/driver.hpp"
