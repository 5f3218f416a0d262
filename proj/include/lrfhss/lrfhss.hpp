#pragma once

#include "lrfhss/analytic.hpp"
#include "lrfhss/config.hpp"
#include "lrfhss/errors.hpp"
#include "lrfhss/experiment.hpp"
#include "lrfhss/frame_model.hpp"
#include "lrfhss/report.hpp"
#include "lrfhss/simcore.hpp"
