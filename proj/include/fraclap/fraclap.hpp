#pragma once

#include "fraclap/blockenc.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/grid.hpp"
#include "fraclap/io.hpp"
#include "fraclap/linalg.hpp"
#include "fraclap/qop.hpp"
#include "fraclap/ratapprox.hpp"
#include "fraclap/refsolve.hpp"
#include "fraclap/schrod.hpp"
#include "fraclap/system.hpp"
