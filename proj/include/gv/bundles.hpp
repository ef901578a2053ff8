#pragma once

#include "gv/bundles/double.hpp"
#include "gv/bundles/matrix.hpp"
#include "gv/bundles/multiple.hpp"
#include "gv/bundles/neighbors.hpp"
#include "gv/bundles/nfold.hpp"
#include "gv/bundles/random.hpp"
