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

// Text format, one record per line:
//
//   fbqc-network v1
//   qubits <n>
//   [lattice <four-star|six-ring> <L> <periodic|open>]
//   state <id> qubits <q...> gens <+XZ..> ... [pos <x> <y> <z>]
//   fusion <id> tag <XX_ZZ|XZ_ZX|Z> qubits <q...> meas <+XX> ... names <s...> [pos <x> <y> <z>]
//   end

#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbqc/network.hpp"

namespace fbqc {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string &what) : std::runtime_error(what) {
    }
};

inline void write_network(std::ostream &out, const FusionNetwork &net) {
    out << "fbqc-network v1\n";
    out << "qubits " << net.n_qubits << "\n";
    if (net.lattice) {
        out << "lattice " << to_string(net.lattice->kind) << " " << net.lattice->L << " "
            << (net.lattice->periodic ? "periodic" : "open") << "\n";
    }
    auto pos = [&](const std::optional<Coord> &p) {
        if (p) {
            out << " pos " << (*p)[0] << " " << (*p)[1] << " " << (*p)[2];
        }
    };
    for (const auto &rs : net.resource_states) {
        out << "state " << rs.id << " qubits";
        for (auto q : rs.qubits) {
            out << " " << q;
        }
        out << " gens";
        for (const auto &g : rs.stabilizers.gens) {
            out << " " << g.str('I');
        }
        pos(rs.position);
        out << "\n";
    }
    for (const auto &f : net.fusions) {
        out << "fusion " << f.id << " tag " << to_string(f.basis_tag) << " qubits";
        for (auto q : f.qubits) {
            out << " " << q;
        }
        out << " meas";
        for (const auto &m : f.measurements) {
            out << " " << m.str('I');
        }
        out << " names";
        for (const auto &s : f.outcome_names) {
            out << " " << s;
        }
        pos(f.position);
        out << "\n";
    }
    out << "end\n";
}

inline std::string network_to_string(const FusionNetwork &net) {
    std::ostringstream s;
    write_network(s, net);
    return s.str();
}

namespace detail {

inline BasisTag parse_tag(const std::string &s) {
    for (auto t : {BasisTag::XX_ZZ, BasisTag::XZ_ZX, BasisTag::SingleQubitZ}) {
        if (s == to_string(t)) {
            return t;
        }
    }
    throw ParseError("unknown fusion tag '" + s + "'");
}

inline bool is_keyword(const std::string &s) {
    return s == "qubits" || s == "gens" || s == "meas" || s == "names" || s == "pos" || s == "tag";
}

/// Splits a record's tokens into keyword -> values.
inline std::map<std::string, std::vector<std::string>> fields(const std::vector<std::string> &tok, std::size_t from,
                                                              int line_no) {
    std::map<std::string, std::vector<std::string>> m;
    std::string key;
    for (std::size_t k = from; k < tok.size(); k++) {
        if (is_keyword(tok[k])) {
            key = tok[k];
            if (m.count(key)) {
                throw ParseError("line " + std::to_string(line_no) + ": repeated field " + key);
            }
            m[key];
        } else if (key.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": value before field name");
        } else {
            m[key].push_back(tok[k]);
        }
    }
    return m;
}

inline std::size_t to_index(const std::string &s, int line_no) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size() || v < 0) {
            throw std::invalid_argument(s);
        }
        return static_cast<std::size_t>(v);
    } catch (const std::exception &) {
        throw ParseError("line " + std::to_string(line_no) + ": bad index '" + s + "'");
    }
}

inline std::optional<Coord> to_pos(const std::map<std::string, std::vector<std::string>> &m, int line_no) {
    auto it = m.find("pos");
    if (it == m.end()) {
        return std::nullopt;
    }
    if (it->second.size() != 3) {
        throw ParseError("line " + std::to_string(line_no) + ": pos needs 3 coordinates");
    }
    Coord c;
    for (int k = 0; k < 3; k++) {
        try {
            c[k] = std::stoi(it->second[k]);
        } catch (const std::exception &) {
            throw ParseError("line " + std::to_string(line_no) + ": bad coordinate");
        }
    }
    return c;
}

inline PauliOp to_pauli(const std::string &s, std::size_t n, int line_no) {
    if (s.empty() || (s[0] != '+' && s[0] != '-') || s.size() != n + 1 ||
        s.find_first_not_of("IXYZ", 1) != std::string::npos) {
        throw ParseError("line " + std::to_string(line_no) + ": bad Pauli string '" + s + "'");
    }
    return PauliOp::parse(s);
}

}  // namespace detail

/// Parses and validates a network written by write_network.
inline FusionNetwork read_network(std::istream &in) {
    FusionNetwork net;
    std::string line;
    int line_no = 0;
    bool header = false, ended = false, have_qubits = false;
    while (std::getline(in, line)) {
        line_no++;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) {
            tok.push_back(t);
        }
        if (tok.empty() || tok[0][0] == '#') {
            continue;
        }
        if (ended) {
            throw ParseError("line " + std::to_string(line_no) + ": content after end");
        }
        if (!header) {
            if (tok.size() != 2 || tok[0] != "fbqc-network" || tok[1] != "v1") {
                throw ParseError("missing 'fbqc-network v1' header");
            }
            header = true;
            continue;
        }
        const std::string &kind = tok[0];
        if (kind == "qubits" && tok.size() == 2) {
            net.n_qubits = detail::to_index(tok[1], line_no);
            have_qubits = true;
        } else if (kind == "lattice" && tok.size() == 4) {
            LatticeMeta meta;
            if (tok[1] == "four-star") {
                meta.kind = LatticeKind::FourStar;
            } else if (tok[1] == "six-ring") {
                meta.kind = LatticeKind::SixRing;
            } else {
                throw ParseError("line " + std::to_string(line_no) + ": unknown lattice kind");
            }
            meta.L = static_cast<int>(detail::to_index(tok[2], line_no));
            if (tok[3] != "periodic" && tok[3] != "open") {
                throw ParseError("line " + std::to_string(line_no) + ": expected periodic|open");
            }
            meta.periodic = tok[3] == "periodic";
            net.lattice = meta;
        } else if (kind == "state" && tok.size() >= 2) {
            auto f = detail::fields(tok, 2, line_no);
            ResourceState rs;
            rs.id = detail::to_index(tok[1], line_no);
            for (const auto &q : f["qubits"]) {
                rs.qubits.push_back(detail::to_index(q, line_no));
            }
            std::vector<PauliOp> gens;
            for (const auto &g : f["gens"]) {
                gens.push_back(detail::to_pauli(g, rs.qubits.size(), line_no));
            }
            try {
                rs.stabilizers = GeneratorSet(rs.qubits.size(), std::move(gens));
            } catch (const std::exception &e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
            rs.position = detail::to_pos(f, line_no);
            if (rs.id != net.resource_states.size()) {
                throw ParseError("line " + std::to_string(line_no) + ": state ids must be consecutive");
            }
            net.resource_states.push_back(std::move(rs));
        } else if (kind == "fusion" && tok.size() >= 2) {
            auto f = detail::fields(tok, 2, line_no);
            Fusion fu;
            fu.id = detail::to_index(tok[1], line_no);
            if (f["tag"].size() != 1) {
                throw ParseError("line " + std::to_string(line_no) + ": fusion needs one tag");
            }
            fu.basis_tag = detail::parse_tag(f["tag"][0]);
            for (const auto &q : f["qubits"]) {
                fu.qubits.push_back(detail::to_index(q, line_no));
            }
            for (const auto &m : f["meas"]) {
                fu.measurements.push_back(detail::to_pauli(m, fu.qubits.size(), line_no));
            }
            fu.outcome_names = f["names"];
            if (!fu.outcome_names.empty() && fu.outcome_names.size() != fu.measurements.size()) {
                throw ParseError("line " + std::to_string(line_no) + ": one name per measurement expected");
            }
            fu.position = detail::to_pos(f, line_no);
            if (fu.id != net.fusions.size()) {
                throw ParseError("line " + std::to_string(line_no) + ": fusion ids must be consecutive");
            }
            net.fusions.push_back(std::move(fu));
        } else if (kind == "end" && tok.size() == 1) {
            ended = true;
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": unrecognized record '" + kind + "'");
        }
    }
    if (!header || !have_qubits || !ended) {
        throw ParseError("truncated network (missing header, qubits or end)");
    }
    try {
        finalize_network(net);
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
    return net;
}

inline FusionNetwork network_from_string(const std::string &text) {
    std::istringstream s(text);
    return read_network(s);
}

}  // namespace fbqc
