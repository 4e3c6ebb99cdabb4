#pragma once

#include <string>

#include "offrl/mdp.hpp"

namespace offrl {

// MDP spec file: one JSON document with keys S, A, H, P (SxAxS), r (SxA),
// d1 (S). Loaders validate all invariants and reject with a path-precise
// message.
TabularMdp load_mdp(const std::string& path);
TabularMdp parse_mdp(const std::string& json_text);
std::string mdp_to_json(const TabularMdp& mdp);
void save_mdp(const TabularMdp& mdp, const std::string& path);

// Policy file: JSON with key probs (HxSxA).
Policy load_policy(const std::string& path);
Policy parse_policy(const std::string& json_text);
std::string policy_to_json(const Policy& pi);
void save_policy(const Policy& pi, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace offrl
