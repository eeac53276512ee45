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

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfcli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat "key = value" file; "[section]" lines prefix the following keys with "section.".
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    // Getters record the value actually used, defaults included.
    std::string get(const std::string& key, const std::string& def);
    double get_double(const std::string& key, double def);
    long long get_int(const std::string& key, long long def);
    std::vector<double> get_list(const std::string& key, const std::vector<double>& def);

    const std::map<std::string, std::string>& entries() const { return entries_; }
    const std::map<std::string, std::string>& resolved() const { return resolved_; }

private:
    std::map<std::string, std::string> entries_;
    std::map<std::string, std::string> resolved_;
};

double to_double(const std::string& key, const std::string& s);
long long to_int(const std::string& key, const std::string& s);
std::string fmt17(double x);

} // namespace hfcli
