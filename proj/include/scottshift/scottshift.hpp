#pragma once

#include "scottshift/error.hpp"
#include "scottshift/special.hpp"
#include "scottshift/quadrature.hpp"
#include "scottshift/channels.hpp"
#include "scottshift/grid.hpp"
#include "scottshift/discretize.hpp"
#include "scottshift/spectra.hpp"
#include "scottshift/shift.hpp"
#include "scottshift/verify.hpp"
#include "scottshift/thomasfermi.hpp"
#include "scottshift/scott.hpp"
#include "scottshift/io.hpp"
