#pragma once

#include "pep1d/drift.hpp"
#include "pep1d/eps.hpp"
#include "pep1d/error.hpp"
#include "pep1d/measure.hpp"
#include "pep1d/oracle.hpp"
#include "pep1d/potentials.hpp"
#include "pep1d/relax.hpp"
#include "pep1d/validate.hpp"
