#pragma once

#include "gv/fields/bracket.hpp"
#include "gv/fields/derivation.hpp"
#include "gv/fields/related.hpp"
