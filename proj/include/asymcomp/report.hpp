#pragma once

#include <string>

#include "asymcomp/classifier.hpp"
#include "asymcomp/comparator.hpp"

namespace asymcomp {

// Machine-readable renderings with a stable key order.

std::string comp_result_json(const ComplexityFn& f1, const ComplexityFn& f2,
                             const CompResult& result, int indent = 2);
std::string library_json(const ClassifiedLibrary& lib, int indent = 2);
std::string config_json(const ComparatorConfig& cfg, int indent = 2);

/// "class k: [id ...] (representative: id)" lines, k starting at 1.
std::string library_text(const ClassifiedLibrary& lib);

}  // namespace asymcomp
