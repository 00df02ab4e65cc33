#pragma once

#include "smartsize/bayesian.hpp"
#include "smartsize/design.hpp"
#include "smartsize/errors.hpp"
#include "smartsize/estimators.hpp"
#include "smartsize/frequentist.hpp"
#include "smartsize/numerics.hpp"
#include "smartsize/quadrature.hpp"
#include "smartsize/report.hpp"
#include "smartsize/scenario.hpp"
#include "smartsize/simulation.hpp"
