// Copyright 2026 The pronres Authors.
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

// Minimal UTF-8 helpers. All character offsets in pronres count Unicode code
// points, never bytes.

#ifndef PRONRES_UTF8_H_
#define PRONRES_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace pronres::utf8 {

// Splits a UTF-8 string into one string per code point. Invalid lead bytes
// are kept as single-byte units.
std::vector<std::string> CodePoints(std::string_view text);

// Number of code points in `text`.
int Length(std::string_view text);

// Code-point substring [begin, end).
std::string Substr(std::string_view text, int begin, int end);

bool StartsWith(std::string_view text, std::string_view prefix);
bool EndsWith(std::string_view text, std::string_view suffix);

}  // namespace pronres::utf8

#endif  // PRONRES_UTF8_H_
