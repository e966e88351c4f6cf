// Copyright 2026 The Nestrec Authors.
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

#ifndef NESTREC_ERRORS_H_
#define NESTREC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace nestrec {

// Base class for data errors. Environment failures (missing files, I/O)
// are reported as IoError; everything else is a problem with the data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char *kind() const { return "error"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char *kind() const override { return "io"; }
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string &message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }
  const char *kind() const override { return "parse"; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
  const char *kind() const override { return "validation"; }
};

class DecodeError : public Error {
 public:
  using Error::Error;
  const char *kind() const override { return "decode"; }
};

class NestingError : public Error {
 public:
  using Error::Error;
  const char *kind() const override { return "nesting"; }
};

class NumericalError : public Error {
 public:
  using Error::Error;
  const char *kind() const override { return "numerical"; }
};

}  // namespace nestrec

#endif  // NESTREC_ERRORS_H_
