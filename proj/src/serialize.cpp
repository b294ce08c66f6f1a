#include "ttn/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ttn {

using nlohmann::json;

std::string state_to_json(const TtnState& s) {
  json j;
  j["format"] = "ttn-state-v1";
  j["n"] = s.topo.n();
  j["d"] = s.d;

  json edges = json::array();
  for (int e = 0; e < s.topo.num_edges(); ++e) {
    const auto& ep = s.topo.edge_endpoints(e);
    json pair = json::array();
    for (int c : ep) {
      if (s.topo.endpoint_is_leaf(c))
        pair.push_back("q" + std::to_string(s.topo.endpoint_id(c) + 1));
      else
        pair.push_back("v" + std::to_string(s.topo.endpoint_id(c) + 1));
    }
    edges.push_back(pair);
  }
  j["edges"] = edges;

  json leaf_map = json::array();
  for (int slot = 0; slot < s.topo.n(); ++slot)
    leaf_map.push_back(s.topo.qudit_at_slot(slot) + 1);
  j["qudit_at_slot"] = leaf_map;

  // tensor index convention: the incident-edge order of each vertex
  json vorder = json::array();
  for (int v = 0; v < s.topo.num_vertices(); ++v) {
    const auto& ve = s.topo.vertex_edges(v);
    vorder.push_back(std::vector<int>{ve[0], ve[1], ve[2]});
  }
  j["vertex_edges"] = vorder;

  json weights = json::array();
  for (int e = 0; e < s.topo.num_edges(); ++e)
    weights.push_back(s.weights[static_cast<size_t>(e)]);
  j["weights"] = weights;

  json tensors = json::array();
  for (const auto& t : s.tensors) {
    json jt;
    jt["shape"] = t.shape();
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(2 * t.size()));
    for (long i = 0; i < t.size(); ++i) {
      flat.push_back(t[i].real());
      flat.push_back(t[i].imag());
    }
    jt["data"] = flat;
    tensors.push_back(jt);
  }
  j["tensors"] = tensors;
  j["canonical"] = s.canonical;
  j["normalized"] = s.normalized;
  return j.dump();
}

TtnState state_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "ttn-state-v1")
    throw std::invalid_argument("unknown state document format");
  const int n = j.at("n").get<int>();

  std::vector<std::array<int, 2>> edges;
  for (const auto& pair : j.at("edges")) {
    std::array<int, 2> enc;
    for (int k = 0; k < 2; ++k) {
      std::string name = pair.at(static_cast<size_t>(k)).get<std::string>();
      if (name.size() < 2 || (name[0] != 'q' && name[0] != 'v'))
        throw std::invalid_argument("bad endpoint name: " + name);
      int id = std::stoi(name.substr(1)) - 1;
      enc[static_cast<size_t>(k)] = (name[0] == 'q') ? id : n + id;
    }
    edges.push_back(enc);
  }

  TtnState s;
  s.topo = TreeTopology(n, std::move(edges));
  if (j.contains("qudit_at_slot")) {
    std::vector<int> map;
    for (const auto& q : j["qudit_at_slot"]) map.push_back(q.get<int>() - 1);
    s.topo.set_leaf_map(map);
  }
  if (j.contains("vertex_edges")) {
    std::vector<std::array<int, 3>> vorder;
    for (const auto& jv : j["vertex_edges"]) {
      std::array<int, 3> a{jv.at(0).get<int>(), jv.at(1).get<int>(), jv.at(2).get<int>()};
      vorder.push_back(a);
    }
    s.topo.set_vertex_edge_order(vorder);
  }
  s.d = j.at("d").get<int>();
  for (const auto& w : j.at("weights"))
    s.weights.push_back(w.get<std::vector<double>>());

  for (const auto& jt : j.at("tensors")) {
    std::vector<long> shape = jt.at("shape").get<std::vector<long>>();
    std::vector<double> flat = jt.at("data").get<std::vector<double>>();
    if (flat.size() % 2 != 0)
      throw std::invalid_argument("tensor data must be interleaved re,im");
    std::vector<cx> data(flat.size() / 2);
    for (size_t i = 0; i < data.size(); ++i)
      data[i] = cx{flat[2 * i], flat[2 * i + 1]};
    s.tensors.push_back(DenseTensor(std::move(shape), std::move(data)));
  }
  s.canonical = j.value("canonical", false);
  s.normalized = j.value("normalized", false);
  s.check_shapes();
  return s;
}

void save_state(const TtnState& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << state_to_json(s) << "\n";
}

TtnState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return state_from_json(buf.str());
}

}  // namespace ttn
