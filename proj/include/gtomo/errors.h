// Copyright 2026 The gtomo Authors
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

#ifndef GTOMO_ERRORS_H
#define GTOMO_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gtomo {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the remaining failure classes, each of which maps onto a CLI exit code.

/// A linear map or Gram matrix does not have the rank required by the request.
class RankDeficientError : public std::runtime_error {
   public:
    RankDeficientError(const std::string &what, std::size_t rank, std::size_t required)
        : std::runtime_error(what + " (rank " + std::to_string(rank) + " of " + std::to_string(required) + ")"),
          rank_(rank),
          required_(required) {
    }
    std::size_t rank() const {
        return rank_;
    }
    std::size_t required() const {
        return required_;
    }
    std::size_t deficiency() const {
        return required_ > rank_ ? required_ - rank_ : 0;
    }

   private:
    std::size_t rank_;
    std::size_t required_;
};

/// An eigensolver failed or a probability left its admissible range.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A dense allocation would exceed the configured memory cap.
class ResourceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace gtomo

#endif
