#pragma once

#include "opsw/enumerate.hpp"
#include "opsw/errors.hpp"
#include "opsw/experiments.hpp"
#include "opsw/format.hpp"
#include "opsw/instance.hpp"
#include "opsw/lp_format.hpp"
#include "opsw/matrix.hpp"
#include "opsw/milp.hpp"
#include "opsw/models.hpp"
#include "opsw/recourse.hpp"
#include "opsw/rng.hpp"
#include "opsw/simplex.hpp"
#include "opsw/solver.hpp"
#include "opsw/uncertainty.hpp"
