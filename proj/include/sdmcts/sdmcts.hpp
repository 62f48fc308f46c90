#pragma once

#include "baselines.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "dataset.hpp"
#include "description.hpp"
#include "error.hpp"
#include "exploration_rate.hpp"
#include "generator.hpp"
#include "mcts.hpp"
#include "measures.hpp"
#include "object_set.hpp"
#include "pattern_pool.hpp"
#include "random.hpp"
#include "refinement.hpp"
#include "result_set.hpp"
