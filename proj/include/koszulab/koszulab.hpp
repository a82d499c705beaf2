#pragma once

#include "koszulab/completion.hpp"
#include "koszulab/duality.hpp"
#include "koszulab/localcoh.hpp"
#include "koszulab/poly_io.hpp"
#include "koszulab/serialize.hpp"
