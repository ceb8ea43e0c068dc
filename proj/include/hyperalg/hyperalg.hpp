#pragma once

#include "hyperalg/algdep.hpp"
#include "hyperalg/engine.hpp"
#include "hyperalg/expsum.hpp"
#include "hyperalg/geometry.hpp"
#include "hyperalg/linalg.hpp"
#include "hyperalg/modular.hpp"
#include "hyperalg/mpoly.hpp"
#include "hyperalg/multiindex.hpp"
#include "hyperalg/rational.hpp"
#include "hyperalg/serialize.hpp"
#include "hyperalg/symbol.hpp"
#include "hyperalg/util.hpp"

#define HYPERALG_VERSION "0.1.0"
