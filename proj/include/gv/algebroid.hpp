#pragma once

#include "gv/algebroid/antialgebroid.hpp"
#include "gv/algebroid/examples.hpp"
#include "gv/algebroid/prolongation.hpp"
