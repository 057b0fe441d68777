#pragma once

#include "asymlim/admissibility.hpp"
#include "asymlim/asymptotics.hpp"
#include "asymlim/constructions.hpp"
#include "asymlim/error.hpp"
#include "asymlim/expr.hpp"
#include "asymlim/fixtures.hpp"
#include "asymlim/io.hpp"
#include "asymlim/linalg.hpp"
#include "asymlim/operators.hpp"
#include "asymlim/random.hpp"
#include "asymlim/spectrum.hpp"
#include "asymlim/verify.hpp"
