// Copyright 2026 The fbqc Authors
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

#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace fbqc {

struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string &what) : std::invalid_argument(what) {
    }
};

/// Campaign configuration: flat key-value INI with one section per command.
/// Values are kept as text; the CLI converts and validates them.
class CampaignConfig {
   public:
    using Section = std::map<std::string, std::string>;

    static const std::map<std::string, std::set<std::string>> &schema() {
        static const std::map<std::string, std::set<std::string>> s{
            {"inspect", {"kind", "size", "example", "graph", "dump_network", "out"}},
            {"simulate",
             {"kind", "size", "p_erasure", "p_error", "p_fail", "p_loss", "encoded", "trials", "seed", "workers",
              "dump_matching", "out"}},
            {"sweep",
             {"kind", "sizes", "c_erasure", "c_error", "x_min", "x_max", "points", "trials", "seed", "workers", "out"}},
            {"threshold",
             {"kind", "sizes", "c_erasure", "c_error", "x_min", "x_max", "points", "trials", "seed", "workers", "out"}},
            {"lossmap",
             {"erasure_threshold", "erasure_threshold_four_star", "p_fail_min", "p_fail_max", "points", "out"}},
            {"algebra", {"network", "outcomes"}},
        };
        return s;
    }

    static CampaignConfig parse(const std::string &text) {
        boost::property_tree::ptree tree;
        std::istringstream in(text);
        try {
            boost::property_tree::ini_parser::read_ini(in, tree);
        } catch (const boost::property_tree::ini_parser_error &e) {
            throw ConfigError(e.message() + " (line " + std::to_string(e.line()) + ")");
        }
        CampaignConfig cfg;
        for (const auto &[name, sec] : tree) {
            auto known = schema().find(name);
            if (known == schema().end()) {
                throw ConfigError(sec.empty() ? "key '" + name + "' outside any section"
                                              : "unknown section [" + name + "]");
            }
            Section &out = cfg.sections_[name];
            for (const auto &[key, val] : sec) {
                if (!known->second.count(key)) {
                    throw ConfigError("unknown key '" + key + "' in [" + name + "]");
                }
                out[key] = val.get_value<std::string>();
            }
        }
        return cfg;
    }

    static CampaignConfig load(const std::string &path) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot read config file " + path);
        }
        std::stringstream s;
        s << in.rdbuf();
        return parse(s.str());
    }

    std::string serialize() const {
        boost::property_tree::ptree tree;
        for (const auto &[name, sec] : sections_) {
            boost::property_tree::ptree &t = tree.put_child(name, {});
            for (const auto &[key, val] : sec) {
                t.put(key, val);
            }
        }
        std::ostringstream out;
        boost::property_tree::ini_parser::write_ini(out, tree);
        return out.str();
    }

    const Section &section(const std::string &name) const {
        static const Section empty;
        auto it = sections_.find(name);
        return it == sections_.end() ? empty : it->second;
    }

    void set(const std::string &section_name, const std::string &key, const std::string &value) {
        auto known = schema().find(section_name);
        if (known == schema().end() || !known->second.count(key)) {
            throw ConfigError("unknown key '" + key + "' in [" + section_name + "]");
        }
        sections_[section_name][key] = value;
    }

    bool operator==(const CampaignConfig &o) const {
        return sections_ == o.sections_;
    }

   private:
    std::map<std::string, Section> sections_;
};

}  // namespace fbqc
