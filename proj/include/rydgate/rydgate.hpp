#pragma once

#include "rydgate/atomic/angular.hpp"
#include "rydgate/atomic/potential.hpp"
#include "rydgate/atomic/radial.hpp"
#include "rydgate/atomic/species.hpp"
#include "rydgate/atomic/state.hpp"
#include "rydgate/crystal.hpp"
#include "rydgate/dynamics.hpp"
#include "rydgate/error.hpp"
#include "rydgate/gatemetrics.hpp"
#include "rydgate/model.hpp"
#include "rydgate/optimize/differential_evolution.hpp"
#include "rydgate/optimize/protocols.hpp"
#include "rydgate/pulses.hpp"
#include "rydgate/units.hpp"
