#include "pldc/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace pldc {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ParseError(std::string("expected matrix for ") + what);
    const auto rows = j.size();
    const auto cols = j[0].size();
    Eigen::MatrixXd M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw ParseError(std::string("ragged matrix rows in ") + what);
        for (std::size_t c = 0; c < cols; ++c) M(i, c) = j[i][c].get<double>();
    }
    return M;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string("expected array for ") + what);
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

TwoStageInstance load_json_instance(const std::string& path) {
    std::ifstream in(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON parse failure in ") + path + ": " + e.what());
    }
    try {
        TwoStageInstance inst;
        const auto& fs = doc.at("first_stage");
        inst.c = vector_from_json(fs.at("c"), "first_stage.c");
        inst.A = matrix_from_json(fs.at("A"), "first_stage.A");
        inst.b_nominal = vector_from_json(fs.at("b"), "first_stage.b");
        if (fs.contains("perturbed_rows"))
            inst.perturbed_rows = fs.at("perturbed_rows").get<std::vector<int>>();
        const auto& ss = doc.at("second_stage");
        inst.q = vector_from_json(ss.at("q"), "second_stage.q");
        inst.W = matrix_from_json(ss.at("W"), "second_stage.W");
        for (const auto& s : doc.at("scenarios")) {
            Scenario sc;
            sc.probability = s.at("p").get<double>();
            sc.h = vector_from_json(s.at("h"), "scenario.h");
            sc.T = matrix_from_json(s.at("T_entries"), "scenario.T_entries");
            inst.scenarios.push_back(std::move(sc));
        }
        inst.validate();
        return inst;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad instance schema in ") + path + ": " + e.what());
    }
}

// --- SMPS subset ---------------------------------------------------------

struct MpsCore {
    std::vector<std::string> row_names;          // constraint rows, file order
    std::map<std::string, int> row_index;
    std::map<std::string, char> row_type;        // E/L/G
    std::string obj_row;
    std::vector<std::string> col_names;
    std::map<std::string, int> col_index;
    std::map<std::string, std::map<std::string, double>> entries;  // col -> row -> val
    std::map<std::string, double> obj;
    std::map<std::string, double> rhs;
    std::string rhs_name;
};

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

MpsCore parse_core(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CORE file " + path);
    MpsCore core;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '*') continue;
        if (!std::isspace(static_cast<unsigned char>(line[0]))) {
            auto toks = tokens_of(line);
            section = toks.empty() ? "" : toks[0];
            if (section == "RANGES" || section == "BOUNDS")
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": section " + section + " not supported");
            continue;
        }
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        if (section == "ROWS") {
            if (toks.size() != 2)
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad ROWS line");
            char type = toks[0][0];
            if (type == 'N') {
                if (core.obj_row.empty()) core.obj_row = toks[1];
            } else if (type == 'E' || type == 'L' || type == 'G') {
                core.row_index[toks[1]] = static_cast<int>(core.row_names.size());
                core.row_names.push_back(toks[1]);
                core.row_type[toks[1]] = type;
            } else {
                throw ParseError(path + ":" + std::to_string(lineno) + ": unknown row type");
            }
        } else if (section == "COLUMNS") {
            if (toks.size() < 3 || toks.size() % 2 == 0)
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad COLUMNS line");
            const std::string& col = toks[0];
            if (!core.col_index.count(col)) {
                core.col_index[col] = static_cast<int>(core.col_names.size());
                core.col_names.push_back(col);
            }
            for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
                double val = std::stod(toks[i + 1]);
                if (toks[i] == core.obj_row)
                    core.obj[col] = val;
                else if (core.row_index.count(toks[i]))
                    core.entries[col][toks[i]] = val;
                else
                    throw ParseError(path + ":" + std::to_string(lineno) + ": unknown row " +
                                     toks[i]);
            }
        } else if (section == "RHS") {
            if (toks.size() < 3 || toks.size() % 2 == 0)
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad RHS line");
            core.rhs_name = toks[0];
            for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
                if (!core.row_index.count(toks[i]))
                    throw ParseError(path + ":" + std::to_string(lineno) + ": unknown row " +
                                     toks[i]);
                core.rhs[toks[i]] = std::stod(toks[i + 1]);
            }
        }
    }
    if (core.obj_row.empty()) throw ParseError(path + ": missing objective row");
    return core;
}

std::string sibling(const std::string& core_path, const std::string& ext) {
    auto dot = core_path.find_last_of('.');
    std::string base = (dot == std::string::npos) ? core_path : core_path.substr(0, dot);
    return base + ext;
}

TwoStageInstance load_smps_instance(const std::string& core_path) {
    MpsCore core = parse_core(core_path);

    // TIME: second PERIODS entry marks the first stage-2 column and row.
    std::ifstream tim(sibling(core_path, ".tim"));
    if (!tim) throw ParseError("cannot open TIME file for " + core_path);
    std::string line;
    std::vector<std::pair<std::string, std::string>> periods;
    bool in_periods = false;
    while (std::getline(tim, line)) {
        if (line.empty() || line[0] == '*') continue;
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        if (!std::isspace(static_cast<unsigned char>(line[0]))) {
            in_periods = (toks[0] == "PERIODS");
            continue;
        }
        if (in_periods && toks.size() >= 2) periods.emplace_back(toks[0], toks[1]);
    }
    if (periods.size() != 2) throw ParseError("TIME file must declare exactly two periods");
    if (!core.col_index.count(periods[1].first) || !core.row_index.count(periods[1].second))
        throw ParseError("TIME stage-2 marker references unknown column/row");
    const int first_s2_col = core.col_index[periods[1].first];
    const int first_s2_row = core.row_index[periods[1].second];

    // STOCH: INDEP DISCRETE blocks keyed by (col,row).
    std::ifstream sto(sibling(core_path, ".sto"));
    if (!sto) throw ParseError("cannot open STOCH file for " + core_path);
    struct Realization { double value, prob; };
    std::vector<std::pair<std::pair<std::string, std::string>, std::vector<Realization>>> blocks;
    bool in_indep = false;
    while (std::getline(sto, line)) {
        if (line.empty() || line[0] == '*') continue;
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        if (!std::isspace(static_cast<unsigned char>(line[0]))) {
            if (toks[0] == "INDEP") {
                if (toks.size() < 2 || toks[1] != "DISCRETE")
                    throw ParseError("only INDEP DISCRETE is supported");
                in_indep = true;
            } else {
                in_indep = (toks[0] == "STOCH");
                if (toks[0] == "BLOCKS" || toks[0] == "SCENARIOS")
                    throw ParseError("only INDEP DISCRETE is supported");
            }
            continue;
        }
        if (!in_indep) continue;
        if (toks.size() != 4 && toks.size() != 5)
            throw ParseError("bad INDEP DISCRETE line: " + line);
        std::pair<std::string, std::string> key{toks[0], toks[1]};
        double value = std::stod(toks[2]);
        double prob = std::stod(toks.back());
        auto it = std::find_if(blocks.begin(), blocks.end(),
                               [&](const auto& b) { return b.first == key; });
        if (it == blocks.end()) {
            blocks.push_back({key, {}});
            it = std::prev(blocks.end());
        }
        it->second.push_back({value, prob});
    }
    if (blocks.empty()) throw ParseError("STOCH file declares no random entries");
    double nscen = 1.0;
    for (auto& blk : blocks) {
        double ps = 0.0;
        for (auto& r : blk.second) ps += r.prob;
        if (std::abs(ps - 1.0) > 1e-9)
            throw ValidationError("INDEP block probabilities do not sum to 1 for row " +
                                  blk.first.second);
        nscen *= static_cast<double>(blk.second.size());
    }
    if (nscen > 100000.0) throw TooLarge("scenario cross-product too large");

    // Assemble stage partitions (file order).
    const int ncols = static_cast<int>(core.col_names.size());
    const int nrows = static_cast<int>(core.row_names.size());
    const int n1c = first_s2_col, n1r = first_s2_row;
    const int n2c = ncols - n1c, n2r = nrows - n1r;
    if (n1c <= 0 || n1r <= 0 || n2c <= 0 || n2r <= 0)
        throw ParseError("degenerate stage partition in TIME file");

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n1r, n1c);
    Eigen::MatrixXd Tbase = Eigen::MatrixXd::Zero(n2r, n1c);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n2r, n2c);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n1c);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n2c);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n1r);
    Eigen::VectorXd hbase = Eigen::VectorXd::Zero(n2r);

    for (const auto& [col, rowvals] : core.entries) {
        int cj = core.col_index[col];
        for (const auto& [row, val] : rowvals) {
            int ri = core.row_index[row];
            if (cj < n1c && ri < n1r)
                A(ri, cj) = val;
            else if (cj < n1c)
                Tbase(ri - n1r, cj) = val;
            else if (ri >= n1r)
                W(ri - n1r, cj - n1c) = val;
            else
                throw ParseError("stage-2 column " + col + " appears in stage-1 row " + row);
        }
    }
    for (const auto& [col, val] : core.obj) {
        int cj = core.col_index[col];
        if (cj < n1c)
            c[cj] = val;
        else
            q[cj - n1c] = val;
    }
    for (const auto& [row, val] : core.rhs) {
        int ri = core.row_index[row];
        if (ri < n1r)
            b[ri] = val;
        else
            hbase[ri - n1r] = val;
    }

    // Inequality rows get slack columns so everything lands in equality form.
    std::vector<int> s1_slack_rows, s2_slack_rows;
    std::vector<double> s1_sign, s2_sign;
    for (int ri = 0; ri < nrows; ++ri) {
        char t = core.row_type[core.row_names[ri]];
        if (t == 'E') continue;
        double sign = (t == 'L') ? 1.0 : -1.0;
        if (ri < n1r) {
            s1_slack_rows.push_back(ri);
            s1_sign.push_back(sign);
        } else {
            s2_slack_rows.push_back(ri - n1r);
            s2_sign.push_back(sign);
        }
    }

    TwoStageInstance inst;
    const int dx = n1c + static_cast<int>(s1_slack_rows.size());
    const int dy = n2c + static_cast<int>(s2_slack_rows.size());
    inst.A = Eigen::MatrixXd::Zero(n1r, dx);
    inst.A.leftCols(n1c) = A;
    for (std::size_t k = 0; k < s1_slack_rows.size(); ++k)
        inst.A(s1_slack_rows[k], n1c + static_cast<int>(k)) = s1_sign[k];
    inst.c = Eigen::VectorXd::Zero(dx);
    inst.c.head(n1c) = c;
    inst.b_nominal = b;
    inst.W = Eigen::MatrixXd::Zero(n2r, dy);
    inst.W.leftCols(n2c) = W;
    for (std::size_t k = 0; k < s2_slack_rows.size(); ++k)
        inst.W(s2_slack_rows[k], n2c + static_cast<int>(k)) = s2_sign[k];
    inst.q = Eigen::VectorXd::Zero(dy);
    inst.q.head(n2c) = q;
    Eigen::MatrixXd Tfull = Eigen::MatrixXd::Zero(n2r, dx);
    Tfull.leftCols(n1c) = Tbase;

    // Odometer over the INDEP blocks, first block outermost.
    std::vector<std::size_t> idx(blocks.size(), 0);
    bool done = false;
    while (!done) {
        Scenario sc;
        sc.h = hbase;
        sc.T = Tfull;
        sc.probability = 1.0;
        for (std::size_t bk = 0; bk < blocks.size(); ++bk) {
            const auto& key = blocks[bk].first;
            const auto& real = blocks[bk].second[idx[bk]];
            sc.probability *= real.prob;
            if (!core.row_index.count(key.second))
                throw ParseError("STOCH references unknown row " + key.second);
            int ri = core.row_index[key.second];
            if (ri < n1r) throw ParseError("stochastic entry on a stage-1 row is not supported");
            bool is_rhs = (key.first == core.rhs_name || key.first == "RHS" ||
                           key.first == "RIGHT" || key.first == "rhs");
            if (is_rhs) {
                sc.h[ri - n1r] = real.value;
            } else {
                if (!core.col_index.count(key.first))
                    throw ParseError("STOCH references unknown column " + key.first);
                int cj = core.col_index[key.first];
                if (cj >= n1c)
                    throw ParseError("stochastic entry must hit RHS or the technology matrix");
                sc.T(ri - n1r, cj) = real.value;
            }
        }
        inst.scenarios.push_back(std::move(sc));
        done = true;
        for (std::size_t bk = blocks.size(); bk-- > 0;) {
            if (++idx[bk] < blocks[bk].second.size()) {
                done = false;
                break;
            }
            idx[bk] = 0;
        }
    }

    inst.perturbed_rows.resize(n1r);
    for (int k = 0; k < n1r; ++k) inst.perturbed_rows[k] = k;
    inst.validate();
    return inst;
}

}  // namespace

TwoStageInstance load_instance(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw ParseError("cannot open " + path);
    char first = 0;
    probe >> first;
    if (first == '{') return load_json_instance(path);
    return load_smps_instance(path);
}

void write_instance(const TwoStageInstance& inst, const std::string& path) {
    json doc;
    doc["first_stage"] = {{"c", vector_to_json(inst.c)},
                          {"A", matrix_to_json(inst.A)},
                          {"b", vector_to_json(inst.b_nominal)},
                          {"perturbed_rows", inst.perturbed_rows}};
    doc["second_stage"] = {{"q", vector_to_json(inst.q)}, {"W", matrix_to_json(inst.W)}};
    json scens = json::array();
    for (const auto& sc : inst.scenarios)
        scens.push_back({{"p", sc.probability},
                         {"h", vector_to_json(sc.h)},
                         {"T_entries", matrix_to_json(sc.T)}});
    doc["scenarios"] = std::move(scens);
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << doc.dump(1) << "\n";
}

}  // namespace pldc
