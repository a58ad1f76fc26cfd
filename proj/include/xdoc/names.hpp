// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xdoc {

// ASCII-only lowercase; bytes >= 0x80 pass through untouched.
std::string ascii_lower(std::string_view s);

enum class HonorificGender { kNone, kMale, kFemale };

// Recognized leading honorifics: mr, mrs, ms, miss.
bool is_honorific(std::string_view token);
HonorificGender honorific_gender(std::string_view token);

// Tokenizes a surface string and strips leading honorific tokens.
std::vector<std::string> name_tokens(std::string_view surface);

// Last whitespace-separated token of the canonical string after stripping
// honorifics; empty when no name token remains.
std::string last_name_of(std::string_view canonical);

}  // namespace xdoc
