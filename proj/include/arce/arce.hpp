// SPDX-License-Identifier: Apache-2.0
//
// arce - angle- and range-constrained localization for multistatic radar
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "arce/baselines.hpp"
#include "arce/crlb.hpp"
#include "arce/estimator.hpp"
#include "arce/geometry.hpp"
#include "arce/measurement.hpp"
#include "arce/monte_carlo.hpp"
#include "arce/random.hpp"
#include "arce/scenario.hpp"
#include "arce/secular.hpp"
#include "arce/types.hpp"
