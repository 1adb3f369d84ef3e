#pragma once

#include "spinforge/config.hpp"
#include "spinforge/core.hpp"
#include "spinforge/csv.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/field.hpp"
#include "spinforge/integrate.hpp"
#include "spinforge/loops.hpp"
#include "spinforge/program.hpp"
#include "spinforge/quadrature.hpp"
#include "spinforge/resonance.hpp"
#include "spinforge/run.hpp"
#include "spinforge/synthesize.hpp"
