#pragma once

#include "fbosc/config.hpp"
#include "fbosc/errors.hpp"
#include "fbosc/gaussian_states.hpp"
#include "fbosc/lorentzian.hpp"
#include "fbosc/psd.hpp"
#include "fbosc/rng.hpp"
#include "fbosc/saturation.hpp"
#include "fbosc/series_io.hpp"
#include "fbosc/spectra.hpp"
#include "fbosc/timedomain.hpp"
#include "fbosc/transfer.hpp"
