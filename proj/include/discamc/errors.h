// Copyright 2026 The discamc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DISCAMC_ERRORS_H_
#define DISCAMC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace discamc {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed an out-of-range or inconsistent argument.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// On-disk data is malformed, truncated, or has an unsupported version.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

// A stage of the pipeline cannot proceed with the data it was given
// (too-small calibration corpus, missing classes, mismatched exemplars).
class PipelineError : public Error {
 public:
  using Error::Error;
};

// The model endpoint could not be reached or kept failing after retries.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int last_status)
      : Error(what), last_status_(last_status) {}

  // HTTP status of the final attempt; 0 when no response was received.
  int last_status() const { return last_status_; }

 private:
  int last_status_;
};

}  // namespace discamc

#endif  // DISCAMC_ERRORS_H_
