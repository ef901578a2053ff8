#pragma once

#include "gv/cli/document.hpp"
#include "gv/cli/run.hpp"
