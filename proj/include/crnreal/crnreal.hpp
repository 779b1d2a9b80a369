#pragma once

#include "crnreal/rational.hpp"
#include "crnreal/polynomial.hpp"
#include "crnreal/multipoly.hpp"
#include "crnreal/crn.hpp"
#include "crnreal/parser.hpp"
#include "crnreal/limit.hpp"
#include "crnreal/compiler.hpp"
#include "crnreal/simulator.hpp"
#include "crnreal/stability.hpp"
#include "crnreal/realtime.hpp"
#include "crnreal/serialize.hpp"
