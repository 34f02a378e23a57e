// Copyright 2026 The BiVert Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BIVERT_CORE_UTF8_HPP
#define BIVERT_CORE_UTF8_HPP

#include <string>
#include <string_view>
#include <vector>

namespace bivert::utf8 {

// Throws Error(kInvalidArgument) on malformed input.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

// Simple case mapping for Latin, Greek and Cyrillic; other code points are
// returned unchanged.
char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view text);

bool is_space(char32_t cp);
bool is_han(char32_t cp);

}  // namespace bivert::utf8

#endif  // BIVERT_CORE_UTF8_HPP
