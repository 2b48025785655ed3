#pragma once

#include "qwitness/classical.hpp"
#include "qwitness/error.hpp"
#include "qwitness/ineq.hpp"
#include "qwitness/opalg.hpp"
#include "qwitness/optimize.hpp"
#include "qwitness/qobs.hpp"
#include "qwitness/witness.hpp"
