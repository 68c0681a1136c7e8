/* Copyright 2026 The vidsum Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef VIDSUM_ERRORS_H_
#define VIDSUM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace vidsum {

// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing, unreadable or unwritable file.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents: bad magic, version, shape or syntax.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Argument or payload outside its valid domain (NaN, bad fraction, ...).
class ValueError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Two per-video objects that must describe the same video do not.
class IdMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace vidsum

#endif  // VIDSUM_ERRORS_H_
