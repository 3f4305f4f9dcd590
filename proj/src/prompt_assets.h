// Copyright 2026 The PolicyEvol Lab Authors
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

#ifndef POLICYEVOL_SRC_PROMPT_ASSETS_H_
#define POLICYEVOL_SRC_PROMPT_ASSETS_H_

#include <string_view>

namespace policyevol::internal {

// Template text embedded from assets/prompts/<name>.txt.
std::string_view PromptAsset(std::string_view name);

}  // namespace policyevol::internal

#endif  // POLICYEVOL_SRC_PROMPT_ASSETS_H_
