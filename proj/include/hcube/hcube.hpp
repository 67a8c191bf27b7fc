#pragma once

#include "hcube/bench.hpp"
#include "hcube/core.hpp"
#include "hcube/error.hpp"
#include "hcube/estimators.hpp"
#include "hcube/inequalities.hpp"
#include "hcube/io.hpp"
#include "hcube/martingales.hpp"
#include "hcube/norms.hpp"
#include "hcube/operators.hpp"
#include "hcube/parallel.hpp"
#include "hcube/random.hpp"
#include "hcube/verify.hpp"
