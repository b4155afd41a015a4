#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace debate {

using StateId = std::uint32_t;

/// A finite control whose states carry an `Info` record and an ordered rule
/// list. Tables are either explicit (loaded from a file) or generated on
/// demand by a compiler, in which case states come into existence the first
/// time they are referenced.
template <class Info, class Rule>
class StateTable {
 public:
  virtual ~StateTable() = default;

  /// Number of states known so far. For generated tables this grows as
  /// states are expanded.
  virtual std::size_t known_states() const = 0;
  virtual const Info& info(StateId id) const = 0;
  virtual const std::vector<Rule>& rules(StateId id) const = 0;
};

template <class Info, class Rule>
class ExplicitStateTable final : public StateTable<Info, Rule> {
 public:
  ExplicitStateTable(std::vector<Info> infos, std::vector<std::vector<Rule>> rules)
      : infos_(std::move(infos)), rules_(std::move(rules)) {
    rules_.resize(infos_.size());
  }

  std::size_t known_states() const override { return infos_.size(); }
  const Info& info(StateId id) const override { return infos_.at(id); }
  const std::vector<Rule>& rules(StateId id) const override { return rules_.at(id); }

 private:
  std::vector<Info> infos_;
  std::vector<std::vector<Rule>> rules_;
};

/// Generated table keyed by an ordered abstract state `Key`.
template <class Key, class Info, class Rule>
class GeneratedStateTable final : public StateTable<Info, Rule> {
 public:
  class Interner {
   public:
    explicit Interner(GeneratedStateTable& table) : table_(table) {}
    StateId operator()(const Key& key) { return table_.intern_locked(key); }

   private:
    GeneratedStateTable& table_;
  };

  struct Definition {
    Info info;
    std::vector<Rule> rules;
  };
  using Builder = std::function<Definition(const Key&, Interner&)>;

  GeneratedStateTable(Builder builder, std::size_t state_cap)
      : builder_(std::move(builder)), cap_(state_cap) {}

  /// Registers `key` and returns its id; safe to call from outside a build.
  StateId intern(const Key& key) {
    std::lock_guard lock(mutex_);
    return intern_locked(key);
  }

  std::size_t known_states() const override {
    std::lock_guard lock(mutex_);
    return keys_.size();
  }

  const Info& info(StateId id) const override { return expand(id).info; }
  const std::vector<Rule>& rules(StateId id) const override { return expand(id).rules; }

  const Key& key(StateId id) const {
    std::lock_guard lock(mutex_);
    return keys_.at(id);
  }

 private:
  StateId intern_locked(const Key& key) {
    auto [it, inserted] = ids_.try_emplace(key, static_cast<StateId>(keys_.size()));
    if (inserted) {
      if (keys_.size() >= cap_) {
        ids_.erase(it);
        on_cap();
      }
      keys_.push_back(key);
      defs_.emplace_back();
    }
    return it->second;
  }

  [[noreturn]] static void on_cap();

  const Definition& expand(StateId id) const {
    std::lock_guard lock(mutex_);
    auto& self = const_cast<GeneratedStateTable&>(*this);
    auto& slot = self.defs_.at(id);
    if (!slot) {
      Interner interner(self);
      Key key = keys_[id];
      slot = builder_(key, interner);
    }
    return *slot;
  }

  Builder builder_;
  std::size_t cap_;
  mutable std::mutex mutex_;
  std::map<Key, StateId> ids_;
  std::deque<Key> keys_;
  std::deque<std::optional<Definition>> defs_;
};

}  // namespace debate

#include "debate/error.hpp"

namespace debate {

template <class Key, class Info, class Rule>
void GeneratedStateTable<Key, Info, Rule>::on_cap() {
  fail(ErrorCode::limit, "generated state table exceeded its state cap");
}

}  // namespace debate
