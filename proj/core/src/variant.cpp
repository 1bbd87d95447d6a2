// Copyright 2026 The Tempocast Authors. All Rights Reserved.
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

#include "tempocast/variant.hpp"

#include "tempocast/error.hpp"

namespace tempocast {
namespace {

constexpr nn::Architecture kArchitectures[] = {nn::Architecture::kMlp, nn::Architecture::kLstm,
                                               nn::Architecture::kMixer};

}  // namespace

std::string Variant::name() const {
  std::string out = fused ? "LR-" : "";
  if (features.spectral) out += "FFT-";
  if (features.rank_pool) out += "RP-";
  out += nn::to_string(architecture);
  return out;
}

Variant Variant::parse(std::string_view name) {
  for (const Variant& v : all_variants())
    if (v.name() == name) return v;
  throw ParameterError("unknown variant '" + std::string(name) + "'");
}

Variant Variant::fft_branch() const {
  if (!fused) throw ParameterError(name() + " has no fusion branches");
  return Variant{FeatureSet{true, false}, architecture, false};
}

Variant Variant::rp_branch() const {
  if (!fused) throw ParameterError(name() + " has no fusion branches");
  return Variant{FeatureSet{false, true}, architecture, false};
}

std::vector<Variant> all_variants() {
  std::vector<Variant> out;
  const FeatureSet families[] = {{false, false}, {true, false}, {false, true}, {true, true}};
  for (const FeatureSet& f : families)
    for (nn::Architecture a : kArchitectures) out.push_back(Variant{f, a, false});
  for (nn::Architecture a : kArchitectures) out.push_back(Variant{{true, true}, a, true});
  return out;
}

std::vector<Variant> default_variants() {
  std::vector<Variant> out;
  for (const Variant& v : all_variants())
    if (v.architecture != nn::Architecture::kMixer) out.push_back(v);
  return out;
}

}  // namespace tempocast
