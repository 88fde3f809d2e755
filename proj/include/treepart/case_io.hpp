// Copyright 2026 The treepart Authors.
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

// MATPOWER-subset case files and the network JSON dump.

#ifndef TREEPART_CASE_IO_HPP_
#define TREEPART_CASE_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "treepart/network.hpp"

namespace treepart {

// Reads mpc.baseMVA, mpc.bus (BUS_I, BUS_TYPE, PD), mpc.gen (GEN_BUS, PG,
// and GEN_STATUS/PMAX/PMIN when present), mpc.branch (F_BUS, T_BUS, BR_R,
// BR_X, RATE_A, BR_STATUS) and, optionally, the linear coefficient of
// mpc.gencost. Other tables and columns are skipped. Out-of-service
// branches and generators and isolated (type 4) buses are dropped, parallel
// branches merged. Line flows are zero; see dcflow for computing them.
//
// Throws ParseError on malformed text and ValidationError on semantic
// problems (duplicate bus ids, disconnected network, ...).
Network parse_case(std::string_view text);

// Writes the subset read by parse_case. Round-trips every field bit-exactly
// except susceptance, which is written as its reciprocal reactance.
std::string write_case(const Network& net);

// {buses:[{id, injection_mw, load_mw, is_generator}],
//  lines:[{from, to, susceptance, flow_mw, capacity_mw}], base_mva,
//  generators:[...]} with external bus ids. Doubles round-trip exactly.
nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Dispatches on extension: ".json" is a network dump, anything else a
// MATPOWER case.
Network load_network(const std::filesystem::path& path);

}  // namespace treepart

#endif  // TREEPART_CASE_IO_HPP_
