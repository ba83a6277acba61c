#pragma once

#include "fwnc/domains.hpp"
#include "fwnc/errors.hpp"
#include "fwnc/gap.hpp"
#include "fwnc/objectives.hpp"
#include "fwnc/sampling.hpp"
#include "fwnc/solver.hpp"
#include "fwnc/trace_check.hpp"
#include "fwnc/vector.hpp"
