#include "sacq/problem_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sacq::io {

using json = nlohmann::ordered_json;

namespace {

// Converts the byte offset nlohmann reports into "line L, column C".
std::string locate(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string msg = e.what();
        if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
        throw FormatError(std::string(what) + ": " + locate(text, at) + ": " + msg);
    }
}

// Field access with path-qualified error messages.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const json& raw() const { return j_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& msg) const { throw FormatError(path_ + ": " + msg); }

    void require_object(std::initializer_list<std::string_view> allowed) const {
        if (!j_.is_object()) fail("expected an object");
        std::vector<std::string> unknown;
        for (const auto& [key, _] : j_.items())
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) unknown.push_back(key);
        if (!unknown.empty()) {
            std::string list;
            for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
            fail("unknown field(s): " + list);
        }
    }

    bool has(std::string_view key) const { return j_.contains(key); }

    Node at(std::string_view key) const {
        if (!j_.contains(key)) fail("missing field '" + std::string(key) + "'");
        return Node(j_.at(std::string(key)), path_ + "." + std::string(key));
    }

    Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

    std::size_t size() const {
        if (!j_.is_array()) fail("expected an array");
        return j_.size();
    }

    double number() const {
        if (!j_.is_number()) fail("expected a number");
        const double v = j_.get<double>();
        if (!std::isfinite(v)) fail("number is not finite");
        return v;
    }

    std::size_t count() const {
        if (j_.is_number_unsigned()) return j_.get<std::size_t>();
        if (j_.is_number_integer()) {
            if (j_.get<std::int64_t>() < 0) fail("expected a nonnegative integer");
            return static_cast<std::size_t>(j_.get<std::int64_t>());
        }
        fail("expected a nonnegative integer");
    }

    std::string string() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }

    bool boolean() const {
        if (!j_.is_boolean()) fail("expected true or false");
        return j_.get<bool>();
    }

    Vector vector() const {
        Vector v(size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i).number();
        return v;
    }

private:
    const json& j_;
    std::string path_;
};

void check_header(const Node& root, std::string_view format) {
    const std::string f = root.at("format").string();
    if (f != format) root.at("format").fail("expected \"" + std::string(format) + "\", got \"" + f + "\"");
    const std::size_t v = root.at("version").count();
    if (v != static_cast<std::size_t>(kFormatVersion))
        root.at("version").fail("unsupported version " + std::to_string(v));
}

Sense parse_sense(const Node& n) {
    const std::string s = n.string();
    if (s == "upper") return Sense::UpperLE;
    if (s == "lower") return Sense::LowerGE;
    n.fail("expected \"upper\" or \"lower\", got \"" + s + "\"");
}

void check_name(const Node& n, const std::string& name) {
    if (name.empty()) n.fail("block name is empty");
    for (char c : name)
        if (c == ',' || c == ':' || c == '"' || c == '\n' || c == '\r')
            n.fail("block name may not contain ',', ':', '\"' or line breaks");
}

json number_array(std::span<const double> v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

ProblemFile parse_problem(std::string_view text) {
    const json doc = parse_json(text, "problem");
    const Node root(doc, "problem");
    root.require_object({"format", "version", "n", "blocks"});
    check_header(root, "sacq-problem");

    ProblemFile pf;
    pf.n = root.at("n").count();
    if (pf.n == 0) root.at("n").fail("must be positive");
    const Node blocks = root.at("blocks");
    if (blocks.size() == 0) blocks.fail("no blocks");

    std::size_t dense_coefficients = 0;
    std::set<std::string> names;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Node bn = blocks.at(b);
        bn.require_object({"name", "sense", "bounds", "pvc", "rows", "triplets"});
        BlockSpec spec;
        spec.name = bn.at("name").string();
        check_name(bn.at("name"), spec.name);
        if (!names.insert(spec.name).second) bn.at("name").fail("duplicate block name '" + spec.name + "'");
        spec.sense = parse_sense(bn.at("sense"));
        spec.bounds = bn.at("bounds").vector();

        if (bn.has("rows") == bn.has("triplets")) bn.fail("exactly one of 'rows' or 'triplets' is required");
        try {
            if (bn.has("rows")) {
                const Node rows = bn.at("rows");
                const std::size_t m = rows.size();
                if (m == 0) rows.fail("no rows");
                dense_coefficients += m * pf.n;
                if (dense_coefficients > kDenseCoefficientLimit)
                    rows.fail("dense rows exceed " + std::to_string(kDenseCoefficientLimit) +
                              " coefficients; use sparse 'triplets'");
                Vector data;
                data.reserve(m * pf.n);
                for (std::size_t i = 0; i < m; ++i) {
                    const Node row = rows.at(i);
                    if (row.size() != pf.n)
                        row.fail("has " + std::to_string(row.size()) + " entries, expected n = " + std::to_string(pf.n));
                    for (std::size_t j = 0; j < pf.n; ++j) data.push_back(row.at(j).number());
                }
                spec.map = std::make_shared<const LinearMap>(LinearMap::dense(m, pf.n, std::move(data)));
            } else {
                const Node tn = bn.at("triplets");
                tn.require_object({"rows", "entries"});
                const std::size_t m = tn.at("rows").count();
                if (m == 0) tn.at("rows").fail("must be positive");
                const Node entries = tn.at("entries");
                std::vector<Triplet> trip;
                trip.reserve(entries.size());
                for (std::size_t k = 0; k < entries.size(); ++k) {
                    const Node e = entries.at(k);
                    if (e.size() != 3) e.fail("expected [row, col, value]");
                    const std::size_t i = e.at(0).count();
                    const std::size_t j = e.at(1).count();
                    if (i >= m) e.at(0).fail("row " + std::to_string(i) + " out of range for " + std::to_string(m) + " rows");
                    if (j >= pf.n) e.at(1).fail("column " + std::to_string(j) + " out of range for n = " + std::to_string(pf.n));
                    trip.push_back({i, j, e.at(2).number()});
                }
                spec.map = std::make_shared<const LinearMap>(LinearMap::sparse(m, pf.n, trip));
            }
        } catch (const FormatError&) {
            throw;
        } catch (const Error& e) {
            bn.fail(e.what());
        }
        if (spec.bounds.size() != spec.map->rows())
            bn.at("bounds").fail("has " + std::to_string(spec.bounds.size()) + " entries, expected " +
                                 std::to_string(spec.map->rows()));
        for (std::size_t i = 0; i < spec.map->rows(); ++i) {
            const Vector row = spec.map->row(i);
            if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; }))
                bn.fail("row " + std::to_string(i) + " is zero");
        }
        if (bn.has("pvc")) {
            const Node pn = bn.at("pvc");
            pn.require_object({"alpha", "beta"});
            PvcParams p{pn.at("alpha").number(), pn.at("beta").number()};
            if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) pn.at("alpha").fail("must lie in [0, 1]");
            if (!(p.beta > 0.0 && p.beta < 1.0)) pn.at("beta").fail("must lie in (0, 1)");
            spec.pvc = p;
        }
        pf.blocks.push_back(std::move(spec));
    }
    return pf;
}

std::string format_problem(const ProblemFile& problem) {
    json doc;
    doc["format"] = "sacq-problem";
    doc["version"] = kFormatVersion;
    doc["n"] = problem.n;
    json blocks = json::array();
    for (const auto& b : problem.blocks) {
        json bj;
        bj["name"] = b.name;
        bj["sense"] = to_string(b.sense);
        bj["bounds"] = number_array(b.bounds);
        if (b.pvc) bj["pvc"] = {{"alpha", b.pvc->alpha}, {"beta", b.pvc->beta}};
        if (b.map->is_sparse()) {
            json entries = json::array();
            for (const auto& t : b.map->triplets()) entries.push_back(json::array({t.row, t.col, t.value}));
            bj["triplets"] = {{"rows", b.map->rows()}, {"entries", std::move(entries)}};
        } else {
            json rows = json::array();
            for (std::size_t i = 0; i < b.map->rows(); ++i) rows.push_back(number_array(b.map->row(i)));
            bj["rows"] = std::move(rows);
        }
        blocks.push_back(std::move(bj));
    }
    doc["blocks"] = std::move(blocks);
    return doc.dump(1) + "\n";
}

namespace {

StrategyKind parse_strategy(const Node& n) {
    const std::string s = n.string();
    if (s == "sequential") return StrategyKind::Sequential;
    if (s == "simultaneous") return StrategyKind::Simultaneous;
    if (s == "random-dynamic") return StrategyKind::RandomDynamic;
    if (s == "custom") return StrategyKind::Custom;
    n.fail("unknown strategy \"" + s + "\"");
}

}  // namespace

SolverConfig parse_config(std::string_view text) {
    const json doc = parse_json(text, "config");
    const Node root(doc, "config");
    root.require_object({"format", "version", "strategy", "schedule", "delta", "q_bar", "gamma_scale", "lambda",
                         "stacked_projections", "tol", "max_iter", "stall_window", "stall_eps", "seed", "x0",
                         "threads", "count_tol"});
    check_header(root, "sacq-config");

    SolverConfig c;
    if (root.has("strategy")) c.strategy.kind = parse_strategy(root.at("strategy"));
    if (root.has("seed")) c.strategy.seed = root.at("seed").count();
    if (root.has("schedule")) {
        if (c.strategy.kind != StrategyKind::Custom) root.at("schedule").fail("only allowed with strategy \"custom\"");
        const Node sched = root.at("schedule");
        for (std::size_t k = 0; k < sched.size(); ++k) {
            const Node plan = sched.at(k);
            std::vector<WeightedString> strings;
            for (std::size_t s = 0; s < plan.size(); ++s) {
                const Node sn = plan.at(s);
                sn.require_object({"string", "weight"});
                IndexVector t;
                const Node idx = sn.at("string");
                for (std::size_t i = 0; i < idx.size(); ++i) t.indices.push_back(idx.at(i).count());
                strings.push_back({std::move(t), sn.at("weight").number()});
            }
            c.strategy.schedule.emplace_back(std::move(strings));
        }
    } else if (c.strategy.kind == StrategyKind::Custom) {
        root.fail("strategy \"custom\" requires a 'schedule'");
    }
    if (root.has("delta")) c.delta = root.at("delta").number();
    if (root.has("q_bar")) c.q_bar = root.at("q_bar").count();
    if (root.has("gamma_scale")) c.gamma_scale = root.at("gamma_scale").number();
    if (root.has("lambda")) {
        const Node ln = root.at("lambda");
        if (ln.raw().is_number()) {
            c.lambda = ln.number();
        } else {
            ln.require_object({"mode", "value", "factor", "floor", "stacked_max"});
            const std::string mode = ln.at("mode").string();
            if (mode != "fixed" && mode != "adaptive") ln.at("mode").fail("expected \"fixed\" or \"adaptive\"");
            if (ln.has("value")) c.lambda = ln.at("value").number();
            c.adaptive.enabled = mode == "adaptive";
            if (!c.adaptive.enabled && (ln.has("factor") || ln.has("floor") || ln.has("stacked_max")))
                ln.fail("factor/floor/stacked_max only apply to mode \"adaptive\"");
            if (ln.has("factor")) c.adaptive.factor = ln.at("factor").number();
            if (ln.has("floor")) c.adaptive.lambda_floor = ln.at("floor").number();
            if (ln.has("stacked_max")) c.adaptive.stacked_max = ln.at("stacked_max").count();
        }
    }
    if (root.has("stacked_projections")) c.stacked = root.at("stacked_projections").count();
    if (c.adaptive.enabled && !(root.has("lambda") && root.at("lambda").has("stacked_max")))
        c.adaptive.stacked_max = c.stacked;
    if (root.has("tol")) c.tol = root.at("tol").number();
    if (root.has("max_iter")) c.max_iter = root.at("max_iter").count();
    if (root.has("stall_window")) c.stall_window = root.at("stall_window").count();
    if (root.has("stall_eps")) c.stall_eps = root.at("stall_eps").number();
    if (root.has("threads")) c.threads = static_cast<unsigned>(root.at("threads").count());
    if (root.has("count_tol")) c.count_tol = root.at("count_tol").number();
    if (root.has("x0")) {
        const Node xn = root.at("x0");
        if (xn.raw().is_string()) {
            if (xn.string() != "zero") xn.fail("expected \"zero\" or an array of numbers");
        } else {
            c.x0 = xn.vector();
        }
    }
    try {
        c.check();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("config: ") + e.what());
    }
    return c;
}

std::string format_config(const SolverConfig& c) {
    json doc;
    doc["format"] = "sacq-config";
    doc["version"] = kFormatVersion;
    doc["strategy"] = to_string(c.strategy.kind);
    if (c.strategy.kind == StrategyKind::Custom) {
        json sched = json::array();
        for (const auto& plan : c.strategy.schedule) {
            json pj = json::array();
            for (const auto& ws : plan.strings()) pj.push_back({{"string", ws.string.indices}, {"weight", ws.weight}});
            sched.push_back(std::move(pj));
        }
        doc["schedule"] = std::move(sched);
    }
    doc["seed"] = c.strategy.seed;
    if (c.delta) doc["delta"] = *c.delta;
    if (c.q_bar) doc["q_bar"] = *c.q_bar;
    doc["gamma_scale"] = c.gamma_scale;
    if (c.adaptive.enabled)
        doc["lambda"] = {{"mode", "adaptive"},
                         {"value", c.lambda},
                         {"factor", c.adaptive.factor},
                         {"floor", c.adaptive.lambda_floor},
                         {"stacked_max", c.adaptive.stacked_max}};
    else
        doc["lambda"] = {{"mode", "fixed"}, {"value", c.lambda}};
    doc["stacked_projections"] = c.stacked;
    doc["tol"] = c.tol;
    doc["max_iter"] = c.max_iter;
    doc["stall_window"] = c.stall_window;
    doc["stall_eps"] = c.stall_eps;
    doc["threads"] = c.threads;
    doc["count_tol"] = c.count_tol;
    if (c.x0)
        doc["x0"] = number_array(*c.x0);
    else
        doc["x0"] = "zero";
    return doc.dump(1) + "\n";
}

Vector parse_solution(std::string_view text) {
    const json doc = parse_json(text, "solution");
    const Node root(doc, "solution");
    root.require_object({"format", "version", "n", "x"});
    check_header(root, "sacq-solution");
    const std::size_t n = root.at("n").count();
    Vector x = root.at("x").vector();
    if (x.size() != n)
        root.at("x").fail("has " + std::to_string(x.size()) + " entries, header says n = " + std::to_string(n));
    return x;
}

std::string format_solution(std::span<const double> x) {
    json doc;
    doc["format"] = "sacq-solution";
    doc["version"] = kFormatVersion;
    doc["n"] = x.size();
    doc["x"] = number_array(x);
    return doc.dump(1) + "\n";
}

std::string format_trace(const SplitProblem& problem, const std::vector<TraceRecord>& trace) {
    std::string out = "k,proximity";
    for (const auto& b : problem.blocks) out += "," + b.name + ":relaxed," + b.name + ":original";
    for (const auto& b : problem.blocks) out += "," + b.name + ":lambda";
    for (std::size_t bi : problem.pvc_blocks) {
        const auto& name = problem.blocks[bi].name;
        out += "," + name + ":gamma," + name + ":stacked";
    }
    out += "\n";
    for (const auto& r : trace) {
        out += std::to_string(r.k) + "," + format_double(r.proximity);
        for (const auto& c : r.counts)
            out += "," + std::to_string(c.relaxed_violations) + "," + std::to_string(c.original_violations);
        for (double l : r.params.lambda) out += "," + format_double(l);
        for (std::size_t bi : problem.pvc_blocks)
            out += "," + format_double(r.params.gamma[bi]) + "," + std::to_string(r.params.stacked[bi]);
        out += "\n";
    }
    return out;
}

std::size_t TraceTable::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw FormatError("trace: no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

TraceTable parse_trace(std::string_view text) {
    TraceTable t;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        std::vector<std::string_view> cells;
        std::size_t c = 0;
        while (true) {
            const std::size_t comma = line.find(',', c);
            cells.push_back(line.substr(c, comma == std::string_view::npos ? std::string_view::npos : comma - c));
            if (comma == std::string_view::npos) break;
            c = comma + 1;
        }
        if (t.columns.empty()) {
            for (auto cell : cells) t.columns.emplace_back(cell);
            if (t.columns.size() < 2 || t.columns[0] != "k" || t.columns[1] != "proximity")
                throw FormatError("trace: line 1: header must start with k,proximity");
            continue;
        }
        if (cells.size() != t.columns.size())
            throw FormatError("trace: line " + std::to_string(line_no) + ": expected " +
                              std::to_string(t.columns.size()) + " fields, got " + std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v = 0.0;
            const auto r = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
            if (r.ec != std::errc() || r.ptr != cells[i].data() + cells[i].size())
                throw FormatError("trace: line " + std::to_string(line_no) + ", field '" + t.columns[i] +
                                  "': not a number");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) throw FormatError("trace: empty file");
    return t;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace sacq::io
