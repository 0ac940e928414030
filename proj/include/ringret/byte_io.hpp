// Copyright 2026 The ringret Authors.
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

#ifndef RINGRET_BYTE_IO_HPP_
#define RINGRET_BYTE_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "ringret/errors.hpp"

namespace ringret::bytes {

// Little-endian fixed-width encoding on top of std::string buffers.

template <typename T>
void append_le(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    }
  }
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  Reader(std::string_view data, const char* context)
      : data_(data), context_(context) {}

  template <typename T>
  T read_le() {
    static_assert(std::is_trivially_copyable_v<T>);
    if (data_.size() - pos_ < sizeof(T)) {
      throw FormatError(FormatError::Kind::kTruncated,
                        std::string(context_) + ": truncated at byte " +
                            std::to_string(pos_));
    }
    char buf[sizeof(T)];
    std::memcpy(buf, data_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
        std::swap(buf[i], buf[sizeof(T) - 1 - i]);
      }
    }
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
  }

  std::string_view read_bytes(std::size_t n) {
    if (data_.size() - pos_ < n) {
      throw FormatError(FormatError::Kind::kTruncated,
                        std::string(context_) + ": truncated at byte " +
                            std::to_string(pos_));
    }
    const auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string_view data_;
  const char* context_;
  std::size_t pos_ = 0;
};

}  // namespace ringret::bytes

#endif  // RINGRET_BYTE_IO_HPP_
