#pragma once

#include <filesystem>
#include <string>

#include "ebltl/oracle/random.hpp"

inline std::filesystem::path corpus(const std::string& rel) {
  return std::filesystem::path(EBLTL_CORPUS_DIR) / rel;
}

using ebltl::oracle::random_formula;
using ebltl::oracle::random_graph;
using ebltl::oracle::random_trace;
