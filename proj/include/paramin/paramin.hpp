// Umbrella header.
#pragma once

#include "paramin/number.hpp"
#include "paramin/interval_set.hpp"
#include "paramin/expr.hpp"
#include "paramin/set_expr.hpp"
#include "paramin/problem.hpp"
#include "paramin/slice.hpp"
#include "paramin/minimizer.hpp"
#include "paramin/sequence.hpp"
#include "paramin/verdict.hpp"
#include "paramin/checks.hpp"
#include "paramin/theorems.hpp"
#include "paramin/report.hpp"
#include "paramin/testing.hpp"
#include "paramin/corpus.hpp"
