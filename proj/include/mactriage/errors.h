// Copyright 2026 The mactriage Authors.
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

#ifndef MACTRIAGE_ERRORS_H_
#define MACTRIAGE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mactriage {

// Malformed input text. `where` is a line number or path, whichever the
// parser had on hand.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, const std::string& where,
             const std::string& what)
      : std::runtime_error(source + ":" + where + ": " + what) {}
};

// A snapshot that parsed but cannot be assembled (missing files, broken
// MAC/DAC mapping, undeclared attribute names).
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pipeline outputs that contradict each other.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mactriage

#endif  // MACTRIAGE_ERRORS_H_
