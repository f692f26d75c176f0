#pragma once

// Umbrella header for the whole library.

#include "bipartite.hpp"
#include "codefile.hpp"
#include "codegen.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "oracle.hpp"
#include "pattern.hpp"
#include "prng.hpp"
#include "recovery.hpp"
#include "symbolic.hpp"
