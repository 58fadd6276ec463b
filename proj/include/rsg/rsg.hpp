#pragma once

#include "rsg/rng.hpp"
#include "rsg/distribution.hpp"
#include "rsg/game.hpp"
#include "rsg/strategy.hpp"
#include "rsg/montecarlo.hpp"
#include "rsg/stats.hpp"
#include "rsg/utility.hpp"
#include "rsg/nash.hpp"
#include "rsg/worst_case.hpp"
#include "rsg/explicit_solver.hpp"
#include "rsg/dpp.hpp"
#include "rsg/mirror_descent.hpp"
#include "rsg/quantile_a1.hpp"
#include "rsg/io.hpp"
#include "rsg/experiments.hpp"
