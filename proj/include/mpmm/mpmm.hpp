#pragma once

#include "mpmm/errors.hpp"
#include "mpmm/precision.hpp"
#include "mpmm/opcounter.hpp"
#include "mpmm/matrix.hpp"
#include "mpmm/matgen.hpp"
#include "mpmm/fastmm.hpp"
#include "mpmm/opmodel.hpp"
#include "mpmm/blocklu.hpp"
#include "mpmm/bench.hpp"
