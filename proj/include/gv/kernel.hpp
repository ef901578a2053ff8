#pragma once

#include "gv/kernel/chart.hpp"
#include "gv/kernel/errors.hpp"
#include "gv/kernel/parser.hpp"
#include "gv/kernel/poly.hpp"
#include "gv/kernel/random.hpp"
#include "gv/kernel/substitute.hpp"
