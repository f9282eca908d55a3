#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bnet/model.hpp"
#include "bnet/propagate.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(BNET_DATA_DIR) + "/" + name;
}

inline std::string corpus_path(const std::string& name) {
  return std::string(BNET_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// The alarm network built directly in code (independent of the parsers):
// Burglary, Earthquake priors (0.5, 0.5) and (0.9, 0.1); Seismometer and
// Alarm conditioned on both.
inline bnet::Network holmes_network() {
  std::vector<bnet::VariableSpec> spec(4);
  spec[0] = {"Burglary", {"N", "Y"}, {}, {0.5, 0.5}};
  spec[1] = {"Earthquake", {"N", "Y"}, {}, {0.9, 0.1}};
  spec[2] = {"Seismometer",
             {"0", "1", "2"},
             {"Burglary", "Earthquake"},
             {0.97, 0.02, 0.01,   //
              0.01, 0.97, 0.02,   //
              0.01, 0.02, 0.97,   //
              0.00, 0.03, 0.97}};
  spec[3] = {"Alarm",
             {"N", "Y"},
             {"Burglary", "Earthquake"},
             {0.99, 0.01,   //
              0.01, 0.99,   //
              0.01, 0.99,   //
              0.00, 1.00}};
  return bnet::Network::build(std::move(spec));
}

inline bnet::Finding state_finding(const bnet::Network& net,
                                   const std::string& variable,
                                   const std::string& state,
                                   const std::string& label = "") {
  const auto v = net.find_variable(variable).value();
  const auto s = net.find_state(v, state).value();
  bnet::Finding f;
  f.variable = v;
  f.mask.assign(net.arity(v), 0);
  f.mask[s] = 1;
  f.label = label;
  return f;
}

}  // namespace testutil
