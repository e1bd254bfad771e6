#include "relocate/sign_model.hpp"

#include <algorithm>
#include <utility>

#include "relocate/error.hpp"

namespace relocate {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidKnowledgeBase, what); }

bool links_to(const std::vector<FeatureGroup>& groups, const std::string& name) {
  for (const FeatureGroup& g : groups) {
    for (const Feature& f : g) {
      if (const auto* l = std::get_if<SignLink>(&f); l && l->sign == name) return true;
    }
  }
  return false;
}

bool has_kind_path_plan(const CausalRelation& r) {
  for (const auto* side : {&r.conditions, &r.effects}) {
    for (const FeatureGroup& g : *side) {
      for (const Feature& f : g) {
        if (std::holds_alternative<PathPlanOperator>(f)) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::string describe(const Feature& feature) {
  return std::visit(Overloaded{
                        [](const SignLink& l) { return l.sign; },
                        [](const SensorDatum& s) { return s.channel + "=" + s.value; },
                        [](const PersonalFeature& p) {
                          return p.target.empty() ? p.id : p.id + "(" + p.target + ")";
                        },
                        [](const PathPlanOperator& p) { return "path_plan(" + p.target + ")"; },
                    },
                    feature);
}

std::vector<std::string> CausalRelation::effect_links() const {
  std::vector<std::string> out;
  for (const FeatureGroup& g : effects) {
    for (const Feature& f : g) {
      if (const auto* l = std::get_if<SignLink>(&f)) out.push_back(l->sign);
    }
  }
  return out;
}

KnowledgeBase::KnowledgeBase(std::vector<Sign> signs) : signs_(std::move(signs)) {
  for (std::size_t i = 0; i < signs_.size(); ++i) {
    Sign& s = signs_[i];
    if (s.name.empty()) invalid("sign with empty name");
    if (!by_name_.emplace(s.name, i).second) invalid("duplicate sign '" + s.name + "'");
    for (auto& r : s.significance) r.owner = s.name;
    for (auto& r : s.personal_meaning) r.owner = s.name;
  }

  auto check_link = [&](const Feature& f, const std::string& where) {
    std::visit(Overloaded{
                   [&](const SignLink& l) {
                     if (!by_name_.contains(l.sign)) invalid(where + ": unknown sign '" + l.sign + "'");
                   },
                   [&](const SensorDatum& d) {
                     if (d.channel.empty()) invalid(where + ": sensor datum without channel");
                   },
                   [&](const PersonalFeature& p) {
                     if (p.id.empty()) invalid(where + ": personal feature without id");
                     if (!p.target.empty() && !by_name_.contains(p.target))
                       invalid(where + ": unknown sign '" + p.target + "'");
                   },
                   [&](const PathPlanOperator& p) {
                     if (!by_name_.contains(p.target)) invalid(where + ": unknown sign '" + p.target + "'");
                   },
               },
               f);
  };

  for (const Sign& s : signs_) {
    for (const FeatureGroup& g : s.image) {
      if (g.empty()) invalid("sign '" + s.name + "': empty image group");
      for (const Feature& f : g) {
        if (!std::holds_alternative<SignLink>(f) && !std::holds_alternative<SensorDatum>(f))
          invalid("sign '" + s.name + "': image may hold only sign links and sensor data");
        check_link(f, "image of '" + s.name + "'");
        if (const auto* d = std::get_if<SensorDatum>(&f)) channels_.insert(d->channel);
      }
    }

    auto check_relation = [&](const CausalRelation& r, bool personal) {
      std::string where = "relation '" + r.label + "' of '" + s.name + "'";
      if (r.conditions.empty() && r.effects.empty()) invalid(where + ": no conditions and no effects");
      if (!links_to(r.conditions, s.name) && !links_to(r.effects, s.name))
        invalid(where + ": does not link to its own sign");
      for (const auto* side : {&r.conditions, &r.effects}) {
        for (const FeatureGroup& g : *side) {
          for (const Feature& f : g) {
            check_link(f, where);
            if (!personal && (std::holds_alternative<PersonalFeature>(f) ||
                              std::holds_alternative<PathPlanOperator>(f)))
              invalid(where + ": personal features belong in personal meanings");
          }
        }
      }
    };
    for (const CausalRelation& r : s.significance) check_relation(r, false);
    for (const CausalRelation& r : s.personal_meaning) check_relation(r, true);

    for (const auto& [sig, pms] : s.xi) {
      if (sig >= s.significance.size()) invalid("sign '" + s.name + "': xi names a missing significance");
      for (std::size_t pm : pms) {
        if (pm >= s.personal_meaning.size())
          invalid("sign '" + s.name + "': xi names a missing personal meaning");
      }
    }
  }

  // Path planning is the lowest level: a relation carrying it may not delegate
  // to further personal meanings.
  for (const Sign& s : signs_) {
    for (const CausalRelation& r : s.personal_meaning) {
      if (!has_kind_path_plan(r)) continue;
      for (const std::string& name : r.effect_links()) {
        if (name != s.name && !signs_[by_name_.find(name)->second].personal_meaning.empty())
          invalid("relation '" + r.label + "' of '" + s.name +
                  "': path planning combined with higher-level action '" + name + "'");
      }
    }
  }
}

const Sign* KnowledgeBase::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &signs_[it->second];
}

const Sign& KnowledgeBase::at(std::string_view name) const {
  const Sign* s = find(name);
  if (s == nullptr) throw Error(ErrorCode::UnknownSign, std::string(name));
  return *s;
}

std::size_t KnowledgeBase::position(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw Error(ErrorCode::UnknownSign, std::string(name));
  return it->second;
}

bool Situation::add_group(std::vector<std::string> group) {
  std::vector<std::string> unique;
  for (std::string& name : group) {
    if (std::find(unique.begin(), unique.end(), name) == unique.end()) unique.push_back(std::move(name));
  }
  if (unique.empty()) return false;
  auto key = [](std::vector<std::string> g) {
    std::sort(g.begin(), g.end());
    return g;
  };
  auto k = key(unique);
  for (const auto& g : groups) {
    if (key(g) == k) return false;
  }
  groups.push_back(std::move(unique));
  return true;
}

std::set<std::string> Situation::signs() const {
  std::set<std::string> out;
  for (const auto& g : groups) out.insert(g.begin(), g.end());
  return out;
}

bool Situation::empty() const {
  return std::all_of(groups.begin(), groups.end(), [](const auto& g) { return g.empty(); });
}

bool Situation::subset_of(const Situation& other) const {
  auto mine = signs();
  auto theirs = other.signs();
  return std::includes(theirs.begin(), theirs.end(), mine.begin(), mine.end());
}

std::string Situation::canonical() const {
  std::vector<std::string> parts;
  for (auto g : groups) {
    std::sort(g.begin(), g.end());
    std::string s;
    for (const auto& n : g) s += n + "\x1f";
    parts.push_back(std::move(s));
  }
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + "\x1e";
  return out;
}

std::string Situation::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i > 0) out += ", ";
    out += "[";
    for (std::size_t j = 0; j < groups[i].size(); ++j) {
      if (j > 0) out += ", ";
      out += groups[i][j];
    }
    out += "]";
  }
  return out + "]";
}

std::vector<Activation> recognize_levels(const KnowledgeBase& kb, std::span<const Feature> low_level) {
  std::set<SensorDatum> sensed;
  std::set<std::string> active;
  for (const Feature& f : low_level) {
    if (const auto* d = std::get_if<SensorDatum>(&f)) {
      if (!kb.channels().contains(d->channel))
        throw Error(ErrorCode::UnresolvedFeature, "unknown sensor channel '" + d->channel + "'");
      sensed.insert(*d);
    } else if (const auto* l = std::get_if<SignLink>(&f)) {
      if (!kb.contains(l->sign)) throw Error(ErrorCode::UnresolvedFeature, "unknown sign '" + l->sign + "'");
      active.insert(l->sign);
    } else {
      throw Error(ErrorCode::UnresolvedFeature, "not a perceptual feature: " + describe(f));
    }
  }

  std::vector<int> level(kb.size(), 0);
  for (std::size_t i = 0; i < kb.size(); ++i) {
    if (active.contains(kb.signs()[i].name)) level[i] = -1;  // given, reported at level 0
  }

  auto satisfied = [&](const FeatureGroup& g) {
    return std::all_of(g.begin(), g.end(), [&](const Feature& f) {
      if (const auto* d = std::get_if<SensorDatum>(&f)) return sensed.contains(*d);
      if (const auto* l = std::get_if<SignLink>(&f)) return active.contains(l->sign);
      return false;
    });
  };

  for (int pass = 1;; ++pass) {
    std::vector<std::size_t> fired;
    for (std::size_t i = 0; i < kb.size(); ++i) {
      if (level[i] != 0) continue;
      const Sign& s = kb.signs()[i];
      if (std::any_of(s.image.begin(), s.image.end(), satisfied)) fired.push_back(i);
    }
    if (fired.empty()) break;
    for (std::size_t i : fired) {
      level[i] = pass;
      active.insert(kb.signs()[i].name);
    }
  }

  std::vector<Activation> out;
  for (std::size_t i = 0; i < kb.size(); ++i) {
    if (level[i] != 0) out.push_back({kb.signs()[i].name, std::max(level[i], 0)});
  }
  return out;
}

std::vector<std::string> recognize(const KnowledgeBase& kb, std::span<const Feature> low_level) {
  std::vector<std::string> out;
  for (auto& a : recognize_levels(kb, low_level)) out.push_back(std::move(a.sign));
  return out;
}

std::vector<std::size_t> xi(const Sign& sign, std::size_t significance_index) {
  if (significance_index >= sign.significance.size())
    throw Error(ErrorCode::IndexOutOfRange, "significance " + std::to_string(significance_index) + " of '" +
                                                sign.name + "'");
  auto it = sign.xi.find(significance_index);
  return it == sign.xi.end() ? std::vector<std::size_t>{} : it->second;
}

std::vector<std::size_t> xi_inverse(const Sign& sign, std::size_t pm_index) {
  if (pm_index >= sign.personal_meaning.size())
    throw Error(ErrorCode::IndexOutOfRange, "personal meaning " + std::to_string(pm_index) + " of '" +
                                                sign.name + "'");
  std::vector<std::size_t> out;
  for (const auto& [sig, pms] : sign.xi) {
    if (std::find(pms.begin(), pms.end(), pm_index) != pms.end()) out.push_back(sig);
  }
  return out;
}

int effect_coverage(const CausalRelation& relation, const Situation& target) {
  auto wanted = target.signs();
  std::set<std::string> hit;
  for (const std::string& name : relation.effect_links()) {
    if (wanted.contains(name)) hit.insert(name);
  }
  return static_cast<int>(hit.size());
}

namespace {

struct Expander {
  const KnowledgeBase& kb;
  TopDownActivation out;
  std::vector<std::pair<std::string, std::size_t>> stack;

  void expand(const Sign& sign, std::size_t pm_index) {
    std::pair<std::string, std::size_t> key{sign.name, pm_index};
    if (std::find(stack.begin(), stack.end(), key) != stack.end())
      throw Error(ErrorCode::CyclicHierarchy, "personal meaning " + std::to_string(pm_index) + " of '" +
                                                  sign.name + "' expands into itself");
    stack.push_back(key);
    const CausalRelation& r = sign.personal_meaning[pm_index];
    out.trace.push_back(r.label);
    for (const FeatureGroup& g : r.effects) {
      for (const Feature& f : g) {
        if (const auto* p = std::get_if<PathPlanOperator>(&f)) {
          out.operators.push_back({PrimitiveOperator::Kind::PathPlan, "path_plan", p->target, r.label});
          out.trace.push_back(describe(f));
        } else if (const auto* p = std::get_if<PersonalFeature>(&f)) {
          out.operators.push_back({PrimitiveOperator::Kind::Personal, p->id, p->target, r.label});
          out.trace.push_back(describe(f));
        } else if (const auto* l = std::get_if<SignLink>(&f)) {
          if (l->sign == sign.name) continue;
          const Sign& next = kb.at(l->sign);
          if (next.personal_meaning.empty()) continue;
          expand(next, 0);
        }
      }
    }
    stack.pop_back();
  }
};

}  // namespace

TopDownActivation activate_top_down(const KnowledgeBase& kb, const Sign& sign, std::size_t pm_index) {
  if (pm_index >= sign.personal_meaning.size())
    throw Error(ErrorCode::IndexOutOfRange, "personal meaning " + std::to_string(pm_index) + " of '" +
                                                sign.name + "'");
  Expander e{kb, {}, {}};
  e.expand(sign, pm_index);
  return std::move(e.out);
}

}  // namespace relocate
