#pragma once

#include "factorbench/arith.hpp"
#include "factorbench/bench.hpp"
#include "factorbench/common.hpp"
#include "factorbench/gf2.hpp"
#include "factorbench/io.hpp"
#include "factorbench/pollard_rho.hpp"
#include "factorbench/primegen.hpp"
#include "factorbench/quadratic_sieve.hpp"
#include "factorbench/report.hpp"
