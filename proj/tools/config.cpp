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


#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hfcli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double to_double(const std::string& key, const std::string& s)
{
    const std::string t = trim(s);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
        throw ConfigError("config: '" + key + "' is not a finite number: '" + s + "'");
    return v;
}

long long to_int(const std::string& key, const std::string& s)
{
    const std::string t = trim(s);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw ConfigError("config: '" + key + "' is not an integer: '" + s + "'");
    return v;
}

Config Config::parse(const std::string& text)
{
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty())
            key = section + "." + key;
        cfg.set(key, trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string Config::get(const std::string& key, const std::string& def)
{
    auto it = entries_.find(key);
    const std::string v = it == entries_.end() ? def : it->second;
    resolved_[key] = v;
    return v;
}

double Config::get_double(const std::string& key, double def)
{
    auto it = entries_.find(key);
    const double v = it == entries_.end() ? def : to_double(key, it->second);
    resolved_[key] = fmt17(v);
    return v;
}

long long Config::get_int(const std::string& key, long long def)
{
    auto it = entries_.find(key);
    const long long v = it == entries_.end() ? def : to_int(key, it->second);
    resolved_[key] = std::to_string(v);
    return v;
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& def)
{
    auto it = entries_.find(key);
    std::vector<double> out;
    if (it == entries_.end()) {
        out = def;
    } else {
        std::istringstream in(it->second);
        std::string item;
        while (std::getline(in, item, ','))
            out.push_back(to_double(key, item));
    }
    std::string s;
    for (std::size_t i = 0; i < out.size(); ++i)
        s += (i ? "," : "") + fmt17(out[i]);
    resolved_[key] = s;
    return out;
}

} // namespace hfcli
