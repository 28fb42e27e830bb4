/*
 * Copyright 2026 The eegxai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <string>
#include <string_view>

namespace eegxai {

inline constexpr std::array<std::string_view, 5> kBandNames = {"delta", "theta", "alpha", "beta",
                                                               "gamma"};

// Channel-major feature layout: feature index f = channel * n_bands + band.
struct Layout {
  int n_channels = 62;
  int n_bands = 5;

  int n_features() const { return n_channels * n_bands; }
  int feature(int channel, int band) const { return channel * n_bands + band; }
  int channel_of(int f) const { return f / n_bands; }
  int band_of(int f) const { return f % n_bands; }

  friend bool operator==(const Layout&, const Layout&) = default;
};

}  // namespace eegxai
