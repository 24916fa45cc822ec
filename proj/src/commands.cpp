#include "sacq/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <system_error>

#include <json.hpp>

#include "sacq/problem_io.hpp"
#include "sacq/rttp.hpp"

namespace sacq::cli {

namespace fs = std::filesystem;

namespace {

struct BadParam {
    std::string message;
};

void need(bool ok, const char* name, const std::string& what) {
    if (!ok) throw BadParam{std::string(name) + ": " + what};
}

void ensure_parent(const fs::path& p) {
    const fs::path parent = p.parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw io::IoError("cannot create directory " + parent.string() + ": " + ec.message());
}

void ensure_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec || !fs::is_directory(p)) throw io::IoError("cannot create directory " + p.string());
}

std::vector<BlockSpec> random_blocks(const GenerateOptions& o, Vector& witness) {
    need(o.n >= 1, "--n", "must be at least 1, got " + std::to_string(o.n));
    need(o.rows >= 1, "--rows", "must be at least 1, got " + std::to_string(o.rows));
    need(o.blocks >= 1, "--blocks", "must be at least 1, got " + std::to_string(o.blocks));
    need(o.alpha >= 0.0 && o.alpha <= 1.0, "--alpha", "must lie in [0, 1]");
    need(o.beta > 0.0 && o.beta < 1.0, "--beta", "must lie in (0, 1)");
    need(o.density > 0.0 && o.density <= 1.0, "--density", "must lie in (0, 1]");
    need(static_cast<double>(o.n) * static_cast<double>(o.rows) * static_cast<double>(o.blocks) <= 1e8, "--rows",
         "instance too large");

    rttp::InstanceDims dims;
    dims.n = static_cast<std::size_t>(o.n);
    dims.tight = o.tight;
    dims.sparse = o.sparse;
    for (long long b = 0; b < o.blocks; ++b) {
        rttp::BlockDims bd;
        const bool upper = b % 2 == 0;
        bd.name = (upper ? "oar" : "target") + std::to_string(b);
        bd.rows = static_cast<std::size_t>(o.rows);
        bd.sense = upper ? Sense::UpperLE : Sense::LowerGE;
        if (o.pvc) bd.pvc = PvcParams{o.alpha, o.beta};
        bd.density = o.density;
        dims.blocks.push_back(std::move(bd));
    }
    auto inst = rttp::generate_feasible_instance(dims, o.seed);
    witness = std::move(inst.witness);
    return std::move(inst.blocks);
}

std::vector<BlockSpec> phantom_blocks(const GenerateOptions& o, Vector& witness) {
    need(o.grid >= 4, "--grid", "must be at least 4, got " + std::to_string(o.grid));
    need(o.grid <= 512, "--grid", "must be at most 512, got " + std::to_string(o.grid));
    need(o.angles >= 1, "--angles", "must be at least 1, got " + std::to_string(o.angles));
    need(o.beamlets >= 1, "--beamlets", "must be at least 1, got " + std::to_string(o.beamlets));
    need(o.kernel_width > 0.0 && std::isfinite(o.kernel_width), "--kernel-width", "must be positive");
    auto cfg = rttp::PhantomConfig::standard(static_cast<std::size_t>(o.grid), static_cast<std::size_t>(o.angles),
                                             static_cast<std::size_t>(o.beamlets));
    cfg.kernel_width = o.kernel_width;
    auto ph = rttp::generate_phantom(cfg, o.seed);
    witness = std::move(ph.witness);
    return std::move(ph.blocks);
}

unsigned threads_from_env(unsigned fallback) {
    const char* v = std::getenv(kThreadsEnv);
    if (!v || !*v) return fallback;
    unsigned t = 0;
    const char* end = v + std::char_traits<char>::length(v);
    const auto r = std::from_chars(v, end, t);
    if (r.ec != std::errc() || r.ptr != end || t == 0 || t > 1024)
        throw BadParam{std::string(kThreadsEnv) + ": expected an integer in [1, 1024], got \"" + v + "\""};
    return t;
}

std::string summary_json(const SolveResult& r, const SplitProblem& problem) {
    nlohmann::ordered_json doc;
    doc["format"] = "sacq-summary";
    doc["version"] = io::kFormatVersion;
    doc["status"] = to_string(r.status);
    doc["iterations"] = r.state.iteration;
    doc["operators"] = r.operator_count;
    doc["initial_proximity"] = r.initial_proximity;
    doc["final_proximity"] = r.final_proximity;
    nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
    const auto counts = r.state.trace.empty() ? std::vector<BlockCounts>{} : r.state.trace.back().counts;
    for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
        nlohmann::ordered_json bj;
        bj["name"] = problem.blocks[b].name;
        if (!counts.empty()) {
            bj["relaxed_violations"] = counts[b].relaxed_violations;
            bj["original_violations"] = counts[b].original_violations;
        }
        if (problem.blocks[b].pvc) bj["budget"] = problem.blocks[b].pvc_set->max_violations();
        blocks.push_back(std::move(bj));
    }
    doc["blocks"] = std::move(blocks);
    return doc.dump(1) + "\n";
}

}  // namespace

int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
    io::ProblemFile pf;
    Vector witness;
    try {
        if (opt.kind == "phantom")
            pf.blocks = phantom_blocks(opt, witness);
        else if (opt.kind == "random-feasible")
            pf.blocks = random_blocks(opt, witness);
        else
            throw BadParam{"kind: expected \"phantom\" or \"random-feasible\", got \"" + opt.kind + "\""};
        need(!opt.out.empty(), "--out", "output path is required");
    } catch (const BadParam& e) {
        err << "generate: invalid parameter " << e.message << "\n";
        return kExitInvalid;
    } catch (const Error& e) {
        err << "generate: " << e.what() << "\n";
        return kExitInvalid;
    }
    pf.n = witness.size();
    try {
        ensure_parent(opt.out);
        io::write_file(opt.out, io::format_problem(pf));
        if (opt.witness) {
            ensure_parent(*opt.witness);
            io::write_file(*opt.witness, io::format_solution(witness));
        }
    } catch (const io::IoError& e) {
        err << "generate: " << e.what() << "\n";
        return kExitIo;
    }
    std::size_t rows = 0;
    for (const auto& b : pf.blocks) rows += b.rows();
    out << "wrote " << opt.out.string() << ": n=" << pf.n << ", " << pf.blocks.size() << " blocks, " << rows
        << " rows\n";
    return kExitOk;
}

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    SplitProblem problem;
    SolverConfig config;
    try {
        const io::ProblemFile pf = io::parse_problem(io::read_file(opt.problem));
        if (opt.config) config = io::parse_config(io::read_file(*opt.config));
        if (opt.seed) config.strategy.seed = *opt.seed;
        config.threads = threads_from_env(config.threads);
        problem = translate_problem(pf.blocks);
        if (config.x0) require_same_size(config.x0->size(), problem.n, "config x0");
    } catch (const BadParam& e) {
        err << "solve: " << e.message << "\n";
        return kExitInvalid;
    } catch (const io::IoError& e) {
        err << "solve: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "solve: " << e.what() << "\n";
        return kExitInvalid;
    }

    SolveResult result;
    try {
        result = solve(problem, config);
    } catch (const Error& e) {
        err << "solve: " << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        ensure_dir(opt.out);
        io::write_file(opt.out / "solution.json", io::format_solution(result.solution));
        io::write_file(opt.out / "trace.csv", io::format_trace(problem, result.state.trace));
        io::write_file(opt.out / "summary.json", summary_json(result, problem));
    } catch (const io::IoError& e) {
        err << "solve: " << e.what() << "\n";
        return kExitIo;
    }

    if (opt.verbose) {
        const auto& tr = result.state.trace;
        const std::size_t step = std::max<std::size_t>(1, tr.size() / 20);
        out << "p=" << result.operator_count << " strategy=" << to_string(config.strategy.kind)
            << " threads=" << config.threads << "\n";
        out << "k=0 proximity=" << io::format_double(result.initial_proximity) << "\n";
        for (std::size_t i = 0; i < tr.size(); ++i)
            if ((i + 1) % step == 0 || i + 1 == tr.size())
                out << "k=" << tr[i].k << " proximity=" << io::format_double(tr[i].proximity) << "\n";
    }
    out << "status " << to_string(result.status) << " after " << result.state.iteration
        << " iterations, proximity " << io::format_double(result.final_proximity) << "\n";
    return result.status == SolveStatus::Solved ? kExitOk : kExitNotSolved;
}

// Plain re-evaluation of the feasibility conditions: x >= 0, every row within
// its relaxed bound, and for PVC blocks at most floor(alpha m) rows outside
// the original bound.
int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
    io::ProblemFile pf;
    Vector x;
    try {
        pf = io::parse_problem(io::read_file(opt.problem));
        x = io::parse_solution(io::read_file(opt.solution));
    } catch (const Error& e) {
        err << "check: " << e.what() << "\n";
        return kExitInvalid;
    }
    if (x.size() != pf.n) {
        err << "check: solution has " << x.size() << " entries, problem has n = " << pf.n << "\n";
        return kExitInvalid;
    }
    if (!(opt.tol >= 0.0)) {
        err << "check: tolerance must be nonnegative\n";
        return kExitInvalid;
    }

    bool ok = true;
    std::size_t negative = 0;
    for (double v : x)
        if (v < -opt.tol) ++negative;
    if (negative > 0) {
        ok = false;
        out << "domain: " << negative << " negative entries\n";
    }

    std::vector<std::string> failed;
    for (const auto& b : pf.blocks) {
        const std::size_t m = b.rows();
        std::vector<double> d(m, 0.0);
        for (const auto& t : b.map->triplets()) d[t.row] += t.value * x[t.col];

        std::size_t relaxed = 0, original = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const double bound = b.bounds[i];
            const double slack = opt.tol * std::max(1.0, std::abs(bound));
            double relaxed_bound = bound;
            if (b.pvc) relaxed_bound = b.sense == Sense::UpperLE ? (1.0 + b.pvc->beta) * bound : (1.0 - b.pvc->beta) * bound;
            const double over_relaxed = b.sense == Sense::UpperLE ? d[i] - relaxed_bound : relaxed_bound - d[i];
            const double over_original = b.sense == Sense::UpperLE ? d[i] - bound : bound - d[i];
            if (over_relaxed > slack) ++relaxed;
            if (over_original > slack) ++original;
        }

        out << b.name << " (" << (b.sense == Sense::UpperLE ? "upper" : "lower") << ", " << m
            << " rows): relaxed violations " << relaxed;
        bool block_ok = relaxed == 0;
        if (b.pvc) {
            const double am = b.pvc->alpha * static_cast<double>(m);
            const auto budget = std::min<std::size_t>(m, static_cast<std::size_t>(std::floor(am + 1e-9 * std::max(1.0, am))));
            const bool member = original <= budget;
            out << ", original violations " << original << " of at most " << budget << ", PVC "
                << (member ? "satisfied" : "violated");
            block_ok = block_ok && member;
        } else {
            block_ok = block_ok && original == 0;
        }
        out << (block_ok ? "" : "  FAIL") << "\n";
        if (!block_ok) failed.push_back(b.name);
    }

    if (!failed.empty()) {
        ok = false;
        out << "violated blocks:";
        for (const auto& n : failed) out << " " << n;
        out << "\n";
    }
    out << (ok ? "feasible" : "infeasible") << "\n";
    return ok ? kExitOk : kExitInfeasible;
}

int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err) {
    io::TraceTable t;
    try {
        t = io::parse_trace(io::read_file(opt.trace));
    } catch (const io::IoError& e) {
        err << "report: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "report: " << e.what() << "\n";
        return kExitInvalid;
    }
    if (t.rows.empty()) {
        err << "report: trace has no iterations\n";
        return kExitInvalid;
    }
    if (opt.problem.has_value() != opt.solution.has_value()) {
        err << "report: --problem and --solution must be given together\n";
        return kExitInvalid;
    }
    if (opt.dvh_points < 2) {
        err << "report: --dvh-points must be at least 2\n";
        return kExitInvalid;
    }

    std::string dvh;
    if (opt.problem) {
        try {
            const io::ProblemFile pf = io::parse_problem(io::read_file(*opt.problem));
            const Vector x = io::parse_solution(io::read_file(*opt.solution));
            if (x.size() != pf.n) throw io::FormatError("solution length does not match problem n");
            const auto eval = rttp::evaluate_plan(x, pf.blocks, 1e-6, static_cast<std::size_t>(opt.dvh_points));
            dvh = "dose";
            for (const auto& b : eval.blocks) dvh += "," + b.name;
            dvh += "\n";
            for (std::size_t i = 0; i < eval.thresholds.size(); ++i) {
                dvh += io::format_double(eval.thresholds[i]);
                for (const auto& b : eval.blocks) dvh += "," + io::format_double(b.dvh[i]);
                dvh += "\n";
            }
        } catch (const Error& e) {
            err << "report: " << e.what() << "\n";
            return kExitInvalid;
        }
    }

    std::vector<std::size_t> count_cols;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        const auto& name = t.columns[c];
        if (name.ends_with(":relaxed") || name.ends_with(":original")) count_cols.push_back(c);
    }
    std::string prox = "k,proximity\n";
    std::string viol = "k";
    for (std::size_t c : count_cols) viol += "," + t.columns[c];
    viol += "\n";
    for (const auto& row : t.rows) {
        const std::string k = io::format_double(row[0]);
        prox += k + "," + io::format_double(row[1]) + "\n";
        viol += k;
        for (std::size_t c : count_cols) viol += "," + io::format_double(row[c]);
        viol += "\n";
    }

    try {
        ensure_dir(opt.out);
        io::write_file(opt.out / "proximity.csv", prox);
        io::write_file(opt.out / "violations.csv", viol);
        if (!dvh.empty()) io::write_file(opt.out / "dvh.csv", dvh);
    } catch (const io::IoError& e) {
        err << "report: " << e.what() << "\n";
        return kExitIo;
    }
    out << "wrote " << t.rows.size() << " rows to " << opt.out.string() << "\n";
    return kExitOk;
}

}  // namespace sacq::cli
