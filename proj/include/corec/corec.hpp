#pragma once

#include "corec/error.hpp"
#include "corec/core.hpp"
#include "corec/rtree.hpp"
#include "corec/algebra.hpp"
#include "corec/solver.hpp"
#include "corec/presentation.hpp"
#include "corec/checker.hpp"
#include "corec/io.hpp"
