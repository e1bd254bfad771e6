#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace relocate {

/// Link to another sign of the same knowledge base.
struct SignLink {
  std::string sign;
  friend auto operator<=>(const SignLink&, const SignLink&) = default;
};

/// Raw sensor reading, e.g. {region, X_1} or {obstacle_type, ot_1}.
struct SensorDatum {
  std::string channel;
  std::string value;
  friend auto operator<=>(const SensorDatum&, const SensorDatum&) = default;
};

/// Agent-internal property. `destroy` and `send_message` are interpreted by
/// the behaviour planner; any other id is an opaque atomic action.
struct PersonalFeature {
  std::string id;
  std::string target;  // optional sign the action applies to
  friend auto operator<=>(const PersonalFeature&, const PersonalFeature&) = default;
};

/// Hook into the path planner: relocate to the area bound to `target`.
struct PathPlanOperator {
  std::string target;
  friend auto operator<=>(const PathPlanOperator&, const PathPlanOperator&) = default;
};

using Feature = std::variant<SignLink, SensorDatum, PersonalFeature, PathPlanOperator>;
using FeatureGroup = std::vector<Feature>;

std::string describe(const Feature& feature);

/// Condition/effect rule. Groups keep the column structure of the source.
struct CausalRelation {
  std::string label;
  std::vector<FeatureGroup> conditions;
  std::vector<FeatureGroup> effects;
  std::string owner;

  /// Sign names linked from the effects, in order, duplicates kept.
  std::vector<std::string> effect_links() const;

  friend bool operator==(const CausalRelation&, const CausalRelation&) = default;
};

struct Sign {
  std::string name;
  std::vector<FeatureGroup> image;
  std::vector<CausalRelation> significance;
  std::vector<CausalRelation> personal_meaning;
  /// significance index -> personal-meaning indices.
  std::map<std::size_t, std::vector<std::size_t>> xi;

  friend bool operator==(const Sign&, const Sign&) = default;
};

/// Validated, immutable set of signs in declaration order.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  /// Fills relation owners and validates. Throws InvalidKnowledgeBase.
  explicit KnowledgeBase(std::vector<Sign> signs);

  const std::vector<Sign>& signs() const { return signs_; }
  std::size_t size() const { return signs_.size(); }
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  const Sign* find(std::string_view name) const;
  /// Throws UnknownSign.
  const Sign& at(std::string_view name) const;
  std::size_t position(std::string_view name) const;
  /// Sensor channels mentioned by any image.
  const std::set<std::string>& channels() const { return channels_; }

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) { return a.signs_ == b.signs_; }

 private:
  std::vector<Sign> signs_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::set<std::string> channels_;
};

/// Grouped set of sign names. Each group is duplicate-free and keeps
/// insertion order.
struct Situation {
  std::vector<std::vector<std::string>> groups;

  /// Appends a group (deduplicated); ignored if an equal group is present.
  /// Returns whether the situation changed.
  bool add_group(std::vector<std::string> group);
  std::set<std::string> signs() const;
  bool empty() const;
  /// Union-of-groups containment; group order is ignored.
  bool subset_of(const Situation& other) const;
  /// Order-insensitive text form, stable for hashing and comparison.
  std::string canonical() const;
  std::string to_string() const;

  friend bool operator==(const Situation&, const Situation&) = default;
};

struct Activation {
  std::string sign;
  /// Bottom-up pass in which the sign fired; 1 means matched on raw input.
  int level = 0;
};

/// Bottom-up recognition. A sign fires when one of its image groups is fully
/// contained in the active features; fired signs become active SignLinks and
/// the process repeats until a fixpoint. Results are in KB order.
/// Throws UnresolvedFeature for sensor channels unknown to the KB.
std::vector<Activation> recognize_levels(const KnowledgeBase& kb, std::span<const Feature> low_level);
std::vector<std::string> recognize(const KnowledgeBase& kb, std::span<const Feature> low_level);

/// Personal-meaning indices realising significance `index`. Throws IndexOutOfRange.
std::vector<std::size_t> xi(const Sign& sign, std::size_t significance_index);
/// Significance indices mapped onto personal meaning `index`. Throws IndexOutOfRange.
std::vector<std::size_t> xi_inverse(const Sign& sign, std::size_t pm_index);

/// Number of distinct target signs named by the relation's effect links.
int effect_coverage(const CausalRelation& relation, const Situation& target);

struct PrimitiveOperator {
  enum class Kind { PathPlan, Personal };
  Kind kind = Kind::Personal;
  std::string id;      // personal feature id; "path_plan" for path planning
  std::string target;  // sign the operator applies to
  std::string source;  // label of the relation that carried it

  friend bool operator==(const PrimitiveOperator&, const PrimitiveOperator&) = default;
};

struct TopDownActivation {
  std::vector<PrimitiveOperator> operators;
  /// Visited relation labels and emitted operators, in expansion order.
  std::vector<std::string> trace;
};

/// Depth-first expansion of a personal meaning. SignLinks to signs that own
/// personal meanings expand into the first of them; links back to the owner
/// and to purely descriptive signs are skipped. Throws CyclicHierarchy when a
/// (sign, relation) pair recurs on the expansion stack, IndexOutOfRange.
TopDownActivation activate_top_down(const KnowledgeBase& kb, const Sign& sign, std::size_t pm_index);

}  // namespace relocate
