#pragma once

#include "bfq/algebraic.hpp"
#include "bfq/cheatsheet.hpp"
#include "bfq/combinatorial.hpp"
#include "bfq/condense.hpp"
#include "bfq/core.hpp"
#include "bfq/dt.hpp"
#include "bfq/lp.hpp"
#include "bfq/rational.hpp"
#include "bfq/zoo.hpp"
