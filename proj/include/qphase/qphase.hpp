#pragma once

#include "qphase/errors.hpp"
#include "qphase/model_core.hpp"
#include "qphase/moments.hpp"
#include "qphase/phase_analysis.hpp"
#include "qphase/special.hpp"
