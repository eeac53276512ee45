/*
Copyright 2026 The hyperfree Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace hyperfree {

std::string trim(const std::string& s);
double parse_double(const std::string& s, const std::string& what);
long long parse_int(const std::string& s, const std::string& what);
// Shortest round-trip form with 17 significant digits.
std::string fmt17(double v);

// Worker count used by parallel loops; 0 selects the hardware concurrency.
void set_thread_count(int n);
int thread_count();
// Runs body(i) for i in [0, n) on up to thread_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace hyperfree
