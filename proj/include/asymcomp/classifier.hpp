#pragma once

#include <functional>
#include <string>
#include <vector>

#include "asymcomp/comparator.hpp"

namespace asymcomp {

struct NamedFn {
  std::string id;
  ComplexityFn fn;
};

using CompareFn = std::function<CompCode(const ComplexityFn&, const ComplexityFn&)>;

/// Comparator bound to a configuration.
CompareFn comparator_for(const ComparatorConfig& cfg);

/// Functions sharing one growth class: for each pair f, g there are
/// constants c1, c2 > 0 and n0 with c1*g(n) <= f(n) <= c2*g(n) for n >= n0.
/// The representative is the first member.
struct ThetaClass {
  std::vector<NamedFn> members;

  const NamedFn& representative() const { return members.front(); }
  std::vector<std::string> ids() const;
};

/// Growth classes in ascending order. <4> from the comparator is treated as
/// "equal" for ordering purposes, so such classes keep their relative order.
struct ClassifiedLibrary {
  std::vector<ThetaClass> classes;
  ComparatorConfig config;

  std::size_t size() const;
  bool contains(const std::string& id) const;
  /// Index of the class holding `id`, or -1.
  int class_of(const std::string& id) const;
};

class ClassifyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ClassifiedLibrary classify(const std::vector<NamedFn>& fns, const ComparatorConfig& cfg = {});
ClassifiedLibrary classify(const std::vector<NamedFn>& fns, const ComparatorConfig& cfg,
                           const CompareFn& compare);

ClassifiedLibrary insert_function(const ClassifiedLibrary& lib, NamedFn fn);
ClassifiedLibrary insert_function(const ClassifiedLibrary& lib, NamedFn fn,
                                  const CompareFn& compare);

/// Merges classes whose representatives `better` reports equivalent (closed
/// transitively), then re-sorts under `better`.
ClassifiedLibrary refine(const ClassifiedLibrary& lib, const CompareFn& better);

}  // namespace asymcomp
