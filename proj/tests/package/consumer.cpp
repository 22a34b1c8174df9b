// Copyright 2026 The qhybrid Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Builds against an installed qhybrid and checks one known value.
#include "qhybrid/quantum_model.hpp"

int main() {
    const auto layout = qhybrid::CircuitLayout::parse(2, "u1-all, u2-even, u1-all");
    return layout.num_params() == 15 ? 0 : 1;
}
