#pragma once

// Valuation-based discrete optimization: factored objectives solved by
// local computation on a rooted Markov tree.

#include "vbs/algebra.hpp"
#include "vbs/domain.hpp"
#include "vbs/error.hpp"
#include "vbs/io.hpp"
#include "vbs/markov_tree.hpp"
#include "vbs/oracle.hpp"
#include "vbs/problem.hpp"
#include "vbs/propagation.hpp"
#include "vbs/valuation.hpp"
