#pragma once

// Umbrella header: relaxed empirical Fréchet mean sets on finite metric
// spaces — estimators, adaptive relaxation rates, exact 1-D medians, and
// the Monte Carlo harness for consistency experiments.

#include "meanset/constants.hpp"
#include "meanset/covariance.hpp"
#include "meanset/covering.hpp"
#include "meanset/csv.hpp"
#include "meanset/errors.hpp"
#include "meanset/exact1d.hpp"
#include "meanset/experiment.hpp"
#include "meanset/frechet.hpp"
#include "meanset/metric_space.hpp"
#include "meanset/models.hpp"
#include "meanset/rates.hpp"
#include "meanset/rng.hpp"
#include "meanset/serialize.hpp"
#include "meanset/twostep.hpp"
