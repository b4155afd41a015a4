// One-sided amplifier: a short coin prefix decides directly with a fixed
// probability, otherwise the core verifier runs unchanged.

#include "builder.hpp"

#include "debate/constructions.hpp"
#include "debate/error.hpp"

namespace debate {

namespace {

// Prefix states compare the coin bits read so far against the threshold
// 2^r - 1; `less` means the prefix is already strictly below it.
struct Key {
  bool core = false;
  StateId id = 0;  // core state
  unsigned i = 0;  // coins read
  bool less = false;
  auto operator<=>(const Key&) const = default;
};

Key core_key(StateId id) {
  Key key;
  key.core = true;
  key.id = id;
  return key;
}

Key prefix_key(unsigned i, bool less) {
  Key key;
  key.i = i;
  key.less = less;
  return key;
}

using Table = GeneratedStateTable<Key, VerifierState, VerifierRule>;

}  // namespace

const char* to_string(AmplifyDirection direction) {
  return direction == AmplifyDirection::pre_reject ? "pre-reject" : "pre-accept";
}

AmplifyDirection parse_amplify_direction(std::string_view text) {
  if (text == "pre-reject" || text == "pre_reject") return AmplifyDirection::pre_reject;
  if (text == "pre-accept" || text == "pre_accept") return AmplifyDirection::pre_accept;
  fail(ErrorCode::usage, "unknown amplifier direction '" + std::string(text) + "' (pre-reject|pre-accept)");
}

Rational AmplifierParams::wrapper_probability() const { return (pow2(r) - 1) / pow2(r + 1); }
Rational AmplifierParams::sure_side() const { return (pow2(r) + 1) / pow2(r + 1); }
Rational AmplifierParams::weak_side() const { return (pow2(2 * r) + 1) / pow2(2 * r + 1); }
Rational AmplifierParams::error_bound() const { return (pow2(2 * r) - 1) / pow2(2 * r + 1); }

CompiledVerifier amplify(const CompiledVerifier& core, const AmplifierParams& params) {
  if (params.r > 30) fail(ErrorCode::limit, "amplifier parameter r is too large");
  const VerifierSpec& inner = core.spec;
  inner.validate();
  const unsigned coins = params.r + 1;
  const std::uint64_t threshold = (std::uint64_t{1} << params.r) - 1;
  auto program = inner.program;
  const StateId inner_start = inner.start;
  const StateId direct = params.direction == AmplifyDirection::pre_reject ? inner.reject : inner.accept;

  // Prefix states past the threshold (i >= coins) just count the remaining
  // coins before entering the core.
  auto full_builder = [=](const Key& key, Table::Interner& intern) -> Table::Definition {
    if (key.core) {
      Table::Definition def{program->info(key.id), program->rules(key.id)};
      for (auto& rule : def.rules) rule.next = intern(core_key(rule.next));
      return def;
    }
    const bool above = key.i >= coins;
    const unsigned read = above ? key.i - coins : key.i;
    std::string name = "amp[" + std::to_string(read) + (above ? ",gt]" : key.less ? ",lt]" : ",eq]");
    Table::Definition def{detail::tossing(std::move(name)), {}};
    for (int bit = 0; bit < 2; ++bit) {
      StateId next;
      if (above) {
        next = read + 1 == coins ? intern(core_key(inner_start)) : intern(prefix_key(key.i + 1, false));
      } else {
        const int threshold_bit = static_cast<int>((threshold >> (coins - 1 - read)) & 1);
        const bool less = key.less || bit < threshold_bit;
        const bool greater = !key.less && bit > threshold_bit;
        if (read + 1 == coins) next = intern(core_key(less ? direct : inner_start));
        else if (greater) next = intern(prefix_key(coins + read + 1, false));
        else next = intern(prefix_key(read + 1, less));
      }
      VerifierRule rule;
      rule.coin = bit;
      rule.next = next;
      def.rules.push_back(rule);
    }
    return def;
  };

  CompiledVerifier out;
  VerifierSpec& spec = out.spec;
  spec.name = std::string("amplify(") + to_string(params.direction) + "," + std::to_string(params.r) + "," +
              inner.name + ")";
  spec.input_alphabet = inner.input_alphabet;
  spec.work_alphabet = inner.work_alphabet;
  spec.work_cells = inner.work_cells;
  if (inner.coin_budget) spec.coin_budget = *inner.coin_budget + coins;
  spec.symbols = inner.symbols;
  auto table = std::make_shared<Table>(full_builder, 4'000'000);
  spec.start = table->intern(prefix_key(0, false));
  spec.accept = table->intern(core_key(inner.accept));
  spec.reject = table->intern(core_key(inner.reject));
  spec.program = table;
  spec.provenance = inner.provenance;
  spec.provenance["construction"] = "amplify(" + (inner.provenance.count("construction") ? inner.provenance.at("construction") : std::string("verifier")) + ")";
  spec.provenance["amplifier_r"] = std::to_string(params.r);
  spec.provenance["amplifier_direction"] = to_string(params.direction);
  spec.provenance["wrapper_probability"] = to_string(params.wrapper_probability());
  spec.provenance["sure_side"] = to_string(params.sure_side());
  spec.provenance["weak_side"] = to_string(params.weak_side());
  spec.provenance["error_bound"] = to_string(params.error_bound());
  spec.validate();
  out.layout = core.layout;
  out.honest = core.honest;
  return out;
}

}  // namespace debate
