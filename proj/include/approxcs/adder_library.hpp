#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "approxcs/adders.hpp"

namespace approxcs {

// Adder model library file. Line oriented, '#' starts a comment:
//
//   model <name>
//     row <abc> <sum> <cout>      # eight rows, listed in order 000..111
//     net <id> = <GATE> <in> [<in>]   # optional; inputs a, b, cin or earlier ids
//     out sum = <signal>
//     out cout = <signal>
//     cost <float>
//     transistors <int>           # optional
//   end
//
// Row order is normative; netlists, when present, must reproduce the table.

namespace detail {

inline GateKind parse_gate_kind(const std::string& s, int line) {
    if (s == "AND") return GateKind::And;
    if (s == "OR") return GateKind::Or;
    if (s == "NOT") return GateKind::Not;
    if (s == "XOR") return GateKind::Xor;
    if (s == "XNOR") return GateKind::Xnor;
    if (s == "NAND") return GateKind::Nand;
    if (s == "NOR") return GateKind::Nor;
    throw std::runtime_error("adder library line " + std::to_string(line) + ": unknown gate \"" +
                             s + "\"");
}

} // namespace detail

inline std::vector<FullAdderModel> parse_adder_library(std::istream& in) {
    std::vector<FullAdderModel> models;
    FullAdderModel cur;
    std::map<std::string, int> signals;
    Netlist netlist;
    bool in_model = false, has_netlist = false;
    int rows_seen = 0;
    std::string line;
    int line_no = 0;

    const auto fail = [&](const std::string& msg) {
        throw std::runtime_error("adder library line " + std::to_string(line_no) + ": " + msg);
    };
    const auto signal_id = [&](const std::string& name) {
        const auto it = signals.find(name);
        if (it == signals.end()) fail("unknown signal \"" + name + "\"");
        return it->second;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;

        if (key == "model") {
            if (in_model) fail("nested model block");
            std::string name;
            if (!(ls >> name)) fail("model needs a name");
            cur = FullAdderModel{};
            cur.name = name;
            signals = {{"a", 0}, {"b", 1}, {"cin", 2}};
            netlist = Netlist{};
            has_netlist = false;
            rows_seen = 0;
            in_model = true;
        } else if (!in_model) {
            fail("\"" + key + "\" outside a model block");
        } else if (key == "row") {
            std::string abc;
            int s = -1, c = -1;
            if (!(ls >> abc >> s >> c) || abc.size() != 3) fail("malformed row");
            const int idx = (abc[0] - '0') * 4 + (abc[1] - '0') * 2 + (abc[2] - '0');
            if (idx != rows_seen)
                fail("rows must appear in input order 000..111 (expected row " +
                     std::to_string(rows_seen) + ")");
            if ((s | c) > 1 || s < 0 || c < 0) fail("row outputs must be bits");
            cur.set_row(idx, s, c);
            ++rows_seen;
        } else if (key == "net") {
            std::string id, eq, kind, in0, in1;
            if (!(ls >> id >> eq >> kind >> in0) || eq != "=") fail("malformed net");
            Gate g;
            g.kind = detail::parse_gate_kind(kind, line_no);
            g.in0 = signal_id(in0);
            if (g.kind != GateKind::Not) {
                if (!(ls >> in1)) fail("gate needs two inputs");
                g.in1 = signal_id(in1);
            }
            if (signals.count(id)) fail("signal \"" + id + "\" redefined");
            signals[id] = 3 + static_cast<int>(netlist.gates.size());
            netlist.gates.push_back(g);
            has_netlist = true;
        } else if (key == "out") {
            std::string which, eq, sig;
            if (!(ls >> which >> eq >> sig) || eq != "=") fail("malformed out");
            if (which == "sum")
                netlist.sum_signal = signal_id(sig);
            else if (which == "cout")
                netlist.cout_signal = signal_id(sig);
            else
                fail("out must bind sum or cout");
        } else if (key == "cost") {
            if (!(ls >> cur.cost)) fail("malformed cost");
        } else if (key == "transistors") {
            int t = 0;
            if (!(ls >> t)) fail("malformed transistors");
            cur.transistor_count = t;
        } else if (key == "end") {
            if (rows_seen != 8) fail("model \"" + cur.name + "\" has " +
                                     std::to_string(rows_seen) + " rows, need 8");
            if (has_netlist || netlist.sum_signal >= 0 || netlist.cout_signal >= 0) {
                if (netlist.sum_signal < 0 || netlist.cout_signal < 0)
                    fail("netlist present but sum/cout outputs not both bound");
                cur.netlist = netlist;
            }
            cur.validate();
            models.push_back(cur);
            in_model = false;
        } else {
            fail("unknown directive \"" + key + "\"");
        }
    }
    if (in_model) throw std::runtime_error("adder library: unterminated model block");
    return models;
}

inline std::vector<FullAdderModel> load_adder_library(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open adder library: " + path);
    return parse_adder_library(in);
}

inline const FullAdderModel& find_model(const std::vector<FullAdderModel>& lib,
                                        const std::string& name) {
    for (const auto& m : lib)
        if (m.name == name) return m;
    throw std::invalid_argument("adder model \"" + name + "\" not in library");
}

inline std::map<std::string, double> cost_table(const std::vector<FullAdderModel>& lib) {
    std::map<std::string, double> costs;
    for (const auto& m : lib) costs[m.name] = m.cost;
    return costs;
}

} // namespace approxcs
