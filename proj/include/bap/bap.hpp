#pragma once

#include "bap/colgen.hpp"
#include "bap/error.hpp"
#include "bap/exact.hpp"
#include "bap/gen.hpp"
#include "bap/harness.hpp"
#include "bap/io.hpp"
#include "bap/lp.hpp"
#include "bap/magician.hpp"
#include "bap/model.hpp"
#include "bap/packing.hpp"
#include "bap/random.hpp"
#include "bap/rounding.hpp"
#include "bap/scaling.hpp"
