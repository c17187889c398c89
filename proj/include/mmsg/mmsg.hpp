// Umbrella header.
#pragma once

#include "mmsg/assignment.hpp"
#include "mmsg/csv.hpp"
#include "mmsg/diagnostics.hpp"
#include "mmsg/errors.hpp"
#include "mmsg/estimators.hpp"
#include "mmsg/experiments.hpp"
#include "mmsg/linalg.hpp"
#include "mmsg/metrics.hpp"
#include "mmsg/model.hpp"
#include "mmsg/model_io.hpp"
#include "mmsg/parallel.hpp"
#include "mmsg/realdata.hpp"
#include "mmsg/rng.hpp"
#include "mmsg/svg.hpp"
#include "mmsg/wsc.hpp"
