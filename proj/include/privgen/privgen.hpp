#pragma once

// Umbrella header for the privgen library.

#include "privgen/config.hpp"
#include "privgen/csv.hpp"
#include "privgen/dataset.hpp"
#include "privgen/error.hpp"
#include "privgen/evaluation.hpp"
#include "privgen/features.hpp"
#include "privgen/forest.hpp"
#include "privgen/generator.hpp"
#include "privgen/markov.hpp"
#include "privgen/mining.hpp"
#include "privgen/models.hpp"
#include "privgen/parallel.hpp"
#include "privgen/privacy.hpp"
#include "privgen/rng.hpp"
#include "privgen/timeutil.hpp"
#include "privgen/tree.hpp"
