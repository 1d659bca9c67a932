#pragma once

#include "qmeter/acceptance.hpp"
#include "qmeter/couplings.hpp"
#include "qmeter/errors.hpp"
#include "qmeter/evolution.hpp"
#include "qmeter/fft.hpp"
#include "qmeter/grid.hpp"
#include "qmeter/io.hpp"
#include "qmeter/oracle.hpp"
#include "qmeter/parallel.hpp"
#include "qmeter/params.hpp"
#include "qmeter/propagator.hpp"
#include "qmeter/quadrature.hpp"
#include "qmeter/scenario.hpp"
#include "qmeter/scenario_io.hpp"
#include "qmeter/time_function.hpp"
#include "qmeter/transitions.hpp"
#include "qmeter/version.hpp"
#include "qmeter/wavefunction.hpp"
