// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/names.hpp"

#include "xdoc/corpus.hpp"

namespace xdoc {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out)
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  return out;
}

bool is_honorific(std::string_view token) {
  return token == "mr" || token == "mrs" || token == "ms" || token == "miss";
}

HonorificGender honorific_gender(std::string_view token) {
  if (token == "mr") return HonorificGender::kMale;
  if (token == "mrs" || token == "ms" || token == "miss")
    return HonorificGender::kFemale;
  return HonorificGender::kNone;
}

std::vector<std::string> name_tokens(std::string_view surface) {
  std::vector<std::string> tokens = tokenize(surface);
  std::size_t skip = 0;
  while (skip < tokens.size() && is_honorific(tokens[skip])) ++skip;
  tokens.erase(tokens.begin(),
               tokens.begin() + static_cast<std::ptrdiff_t>(skip));
  return tokens;
}

std::string last_name_of(std::string_view canonical) {
  const std::vector<std::string> tokens = name_tokens(canonical);
  return tokens.empty() ? std::string() : tokens.back();
}

}  // namespace xdoc
