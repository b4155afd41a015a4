#pragma once

#include "debate/io.hpp"
#include "debate/machines.hpp"
#include "debate/verifier.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace test_support {

inline std::string fixture(const std::string& name) { return std::string(DEBATE_FIXTURE_DIR) + "/" + name; }

inline debate::MultiheadAlternatingMachine load_automaton(const std::string& name) {
  return debate::io::automaton_from_json(debate::io::read_json_file(fixture(name)));
}

inline debate::MultiheadAlternatingMachine load_normalized(const std::string& name) {
  return debate::normalize_alternation(load_automaton(name));
}

inline debate::AlternatingTM load_atm(const std::string& name) {
  return debate::io::atm_from_json(debate::io::read_json_file(fixture(name)));
}

inline debate::VerifierSpec load_verifier(const std::string& name) {
  return debate::io::verifier_from_json(debate::io::read_json_file(fixture(name)));
}

/// All words over `alphabet` of length at most `max_length`, shortest first.
inline std::vector<std::string> words(const std::string& alphabet, std::size_t max_length) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < max_length)
      for (char c : alphabet) out.push_back(out[i] + c);
  return out;
}

// Reference languages of the fixture machines, written directly from their
// definitions.
inline bool is_anbn(const std::string& w) {
  const std::size_t n = w.size() / 2;
  return w.size() % 2 == 0 && w == std::string(n, 'a') + std::string(n, 'b');
}

inline bool is_anbncn(const std::string& w) {
  const std::size_t n = w.size() / 3;
  return w.size() % 3 == 0 && w == std::string(n, 'a') + std::string(n, 'b') + std::string(n, 'c');
}

inline bool first_equals_last(const std::string& w) { return !w.empty() && w.front() == w.back(); }
inline bool starts_and_ends_with_a(const std::string& w) { return !w.empty() && w.front() == 'a' && w.back() == 'a'; }
inline bool starts_with_a(const std::string& w) { return !w.empty() && w.front() == 'a'; }
inline bool never(const std::string&) { return false; }
inline bool a_in_first_two(const std::string& w) { return w.find('a') != std::string::npos && w.find('a') < 2; }
inline bool even_as(const std::string& w) {
  std::size_t n = 0;
  for (char c : w) n += c == 'a';
  return n % 2 == 0;
}

using Language = std::function<bool(const std::string&)>;

/// Fixture file -> reference language.
inline const std::map<std::string, Language>& languages() {
  static const std::map<std::string, Language> table{
      {"anbn.json", is_anbn},
      {"anbn_blind.json", is_anbn},
      {"anbncn.json", is_anbncn},
      {"first_last.json", first_equals_last},
      {"ends_a_blind.json", starts_and_ends_with_a},
      {"guess_bit_blind.json", never},
      {"echo_private.json", starts_with_a},
      {"echo_hidden_private.json", never},
      {"window_atm.json", a_in_first_two},
      {"even_a_tape.json", even_as},
  };
  return table;
}

}  // namespace test_support
