// Copyright 2026 The SemantiX Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "semantix/error.hpp"

namespace semantix {

// Flat "key = value" settings; keys are long flag names without the dashes.
// Blank lines and lines starting with '#' are ignored.
inline std::map<std::string, std::string> parse_config(std::istream& in, const std::string& name) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw DataError(name + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.starts_with("--")) key.erase(0, 2);
    if (key.empty()) throw DataError(name + ":" + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second)
      throw DataError(name + ":" + std::to_string(lineno) + ": key '" + key + "' set twice");
  }
  return out;
}

inline std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path);
  return parse_config(in, path);
}

// Appends "--key value" for every config entry whose flag is absent from
// args, so explicit flags win over the file.
inline std::vector<std::string> layer_config(std::vector<std::string> args,
                                             const std::map<std::string, std::string>& config) {
  for (const auto& [key, value] : config) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args)
      if (a == flag || a.starts_with(flag + "=")) present = true;
    if (!present) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

}  // namespace semantix
