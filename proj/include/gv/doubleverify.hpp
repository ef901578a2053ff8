#pragma once

#include "gv/doubleverify/conditions.hpp"
#include "gv/doubleverify/cotangent.hpp"
#include "gv/doubleverify/examples.hpp"
#include "gv/doubleverify/families.hpp"
#include "gv/doubleverify/nfold.hpp"
#include "gv/doubleverify/structure.hpp"
#include "gv/doubleverify/transform.hpp"
