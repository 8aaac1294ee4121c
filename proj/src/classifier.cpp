#include "asymcomp/classifier.hpp"

#include <numeric>
#include <set>

namespace asymcomp {

CompareFn comparator_for(const ComparatorConfig& cfg) {
  return [cfg](const ComplexityFn& a, const ComplexityFn& b) { return comp(a, b, cfg).code; };
}

std::vector<std::string> ThetaClass::ids() const {
  std::vector<std::string> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.id);
  return out;
}

std::size_t ClassifiedLibrary::size() const {
  std::size_t n = 0;
  for (const auto& c : classes) n += c.members.size();
  return n;
}

bool ClassifiedLibrary::contains(const std::string& id) const { return class_of(id) >= 0; }

int ClassifiedLibrary::class_of(const std::string& id) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (const auto& m : classes[i].members) {
      if (m.id == id) return static_cast<int>(i);
    }
  }
  return -1;
}

namespace {

// Stable insertion sort: a class moves ahead of its predecessor only when
// its representative compares strictly lower (<2>).
void sort_classes(std::vector<ThetaClass>& classes, const CompareFn& compare) {
  for (std::size_t i = 1; i < classes.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && compare(classes[j].representative().fn,
                            classes[j - 1].representative().fn) == CompCode::FirstSmaller) {
      std::swap(classes[j], classes[j - 1]);
      --j;
    }
  }
}

}  // namespace

ClassifiedLibrary classify(const std::vector<NamedFn>& fns, const ComparatorConfig& cfg) {
  return classify(fns, cfg, comparator_for(cfg));
}

ClassifiedLibrary classify(const std::vector<NamedFn>& fns, const ComparatorConfig& cfg,
                           const CompareFn& compare) {
  std::set<std::string> seen;
  for (const auto& f : fns) {
    if (!seen.insert(f.id).second) throw ClassifyError("duplicate function id '" + f.id + "'");
  }

  // C_i starts as {f_i}; a later f_j moves into the first open C_i whose
  // seed compares <1> against it.
  std::vector<ThetaClass> sets(fns.size());
  for (std::size_t i = 0; i < fns.size(); ++i) sets[i].members.push_back(fns[i]);
  std::vector<bool> moved(fns.size(), false);
  for (std::size_t i = 0; i + 1 < fns.size(); ++i) {
    if (moved[i]) continue;
    for (std::size_t j = i + 1; j < fns.size(); ++j) {
      if (moved[j]) continue;
      if (compare(fns[i].fn, fns[j].fn) == CompCode::Equivalent) {
        sets[i].members.push_back(fns[j]);
        sets[j].members.clear();
        moved[j] = true;
      }
    }
  }

  ClassifiedLibrary lib;
  lib.config = cfg;
  for (auto& s : sets) {
    if (!s.members.empty()) lib.classes.push_back(std::move(s));
  }
  sort_classes(lib.classes, compare);
  return lib;
}

ClassifiedLibrary insert_function(const ClassifiedLibrary& lib, NamedFn fn) {
  return insert_function(lib, std::move(fn), comparator_for(lib.config));
}

ClassifiedLibrary insert_function(const ClassifiedLibrary& lib, NamedFn fn,
                                  const CompareFn& compare) {
  if (lib.contains(fn.id)) throw ClassifyError("duplicate function id '" + fn.id + "'");
  ClassifiedLibrary out = lib;
  std::vector<CompCode> results;
  results.reserve(out.classes.size());
  for (auto& cls : out.classes) {
    CompCode r = compare(cls.representative().fn, fn.fn);
    if (r == CompCode::Equivalent) {
      cls.members.push_back(std::move(fn));
      return out;
    }
    results.push_back(r);
  }
  std::size_t pos = out.classes.size();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i] == CompCode::SecondSmaller) {
      pos = i;
      break;
    }
  }
  ThetaClass fresh;
  fresh.members.push_back(std::move(fn));
  out.classes.insert(out.classes.begin() + static_cast<std::ptrdiff_t>(pos), std::move(fresh));
  return out;
}

ClassifiedLibrary refine(const ClassifiedLibrary& lib, const CompareFn& better) {
  const std::size_t n = lib.classes.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (find(i) == find(j)) continue;
      if (better(lib.classes[i].representative().fn, lib.classes[j].representative().fn) ==
          CompCode::Equivalent) {
        parent[find(j)] = find(i);
      }
    }
  }

  ClassifiedLibrary out;
  out.config = lib.config;
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(out.classes.size());
      out.classes.emplace_back();
    }
    auto& members = out.classes[static_cast<std::size_t>(slot[root])].members;
    members.insert(members.end(), lib.classes[i].members.begin(), lib.classes[i].members.end());
  }
  sort_classes(out.classes, better);
  return out;
}

}  // namespace asymcomp
