#pragma once

#include "crossings.hpp"
#include "dualization.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "oracle.hpp"
#include "topology.hpp"
