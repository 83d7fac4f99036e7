#pragma once

#include "ebltl/error.hpp"
#include "ebltl/formula.hpp"
#include "ebltl/dsl/machine.hpp"
#include "ebltl/dsl/print.hpp"
#include "ebltl/sem/eval.hpp"
#include "ebltl/sem/explore.hpp"
#include "ebltl/ltl/trace.hpp"
#include "ebltl/ltl/evaluate.hpp"
#include "ebltl/ltl/model_check.hpp"
#include "ebltl/refine/renaming.hpp"
#include "ebltl/refine/chain.hpp"
#include "ebltl/refine/po.hpp"
#include "ebltl/refine/strategy.hpp"
#include "ebltl/refine/ca.hpp"
#include "ebltl/preserve/translate.hpp"
#include "ebltl/preserve/beta.hpp"
#include "ebltl/preserve/lemma.hpp"
#include "ebltl/oracle/oracle.hpp"
#include "ebltl/oracle/random.hpp"
#include "ebltl/oracle/corpus.hpp"
#include "ebltl/report.hpp"
