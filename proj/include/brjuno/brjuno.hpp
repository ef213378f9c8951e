#pragma once

#include "brjuno/analysis.hpp"
#include "brjuno/evaluation.hpp"
#include "brjuno/exact_real.hpp"
#include "brjuno/expansion.hpp"
#include "brjuno/mobius.hpp"
#include "brjuno/parse.hpp"
