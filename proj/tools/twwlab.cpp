#include <algorithm>
#include <functional>
#include <chrono>
#include <filesystem>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "twwlab/builder.hpp"
#include "twwlab/census.hpp"
#include "twwlab/core.hpp"
#include "twwlab/exact.hpp"
#include "twwlab/logic.hpp"
#include "twwlab/minors.hpp"
#include "twwlab/semigrid.hpp"

using nlohmann::json;
using namespace twwlab;

namespace {

int thread_count() {
    const char* env = std::getenv("TWWLAB_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string digest(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) h = (h ^ c) * 1099511628211ull;
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

struct Report {
    json j;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    Report(const std::string& command) {
        j["command"] = command;
        j["inputs"] = json::array();
        j["config"] = json::object();
        j["config"]["threads"] = thread_count();
    }
    void input(const std::string& path, const std::string& data) {
        j["inputs"].push_back({{"path", path}, {"digest", digest(data)}});
    }
    void finish(std::ostream& out) {
        j["millis"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        out << j.dump(2) << "\n";
    }
};

std::ostream& output_stream(const std::string& outPath, std::ofstream& file) {
    if (outPath.empty()) return std::cout;
    file.open(outPath, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + outPath);
    return file;
}

json witness_to_json(const MixedMinorWitness& w) { return json::parse(mixed_witness_json(w)); }
json witness_to_json(const GridMinorWitness& w) { return json::parse(grid_witness_json(w)); }

std::vector<Cell> read_cells(const std::string& path) {
    std::vector<Cell> cells;
    std::istringstream in(slurp(path));
    int a, b;
    while (in >> a >> b) cells.emplace_back(a, b);
    return cells;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"twin-width toolkit for ordered binary structures"};
    app.require_subcommand(1);
    bool asJson = false;
    std::string outPath;
    app.add_flag("--json", asJson, "machine-readable JSON output");
    app.add_option("--out", outPath, "write output to a file instead of stdout");

    std::string inFile, seqOut, seqFile, formulaFile, cellsFile, forbidDir, rowsSpec;
    int optK = 1, optT = 1, optCap = 10, optM = 1, optN = 1, optScheme = 0, optNMax = 5;
    int optBudget = 4, optSgCap = 3, optRowLo = 0, optRowHi = 0;
    bool gsMode = false, listSchemes = false;
    std::string sigName = "graph";

    auto* exact = app.add_subcommand("tww-exact", "exact twin-width by exhaustive search");
    exact->add_option("file", inFile)->required();
    exact->add_option("--cap", optCap, "largest admissible domain size");
    exact->add_option("--seq-out", seqOut, "write the optimal contraction sequence here");

    auto* approx = app.add_subcommand("tww-approx", "approximate twin-width via the greedy dichotomy");
    approx->add_option("file", inFile)->required();
    approx->add_option("--seq-out", seqOut);

    auto* algo = app.add_subcommand("algo", "contraction sequence or mixed-minor witness");
    algo->add_option("file", inFile)->required();
    algo->add_option("--k", optK)->required();
    algo->add_option("--t", optT)->required();

    auto* minors = app.add_subcommand("minors", "matrix-side searches");
    auto* mGrid = minors->add_subcommand("grid", "t-grid minor of a 0-1 matrix");
    mGrid->add_option("file", inFile)->required();
    mGrid->add_option("--t", optT)->required();
    auto* mMixed = minors->add_subcommand("mixed", "(k,t)-mixed minor of an adjacency-type matrix");
    mMixed->add_option("file", inFile)->required();
    mMixed->add_option("--k", optK)->required();
    mMixed->add_option("--t", optT)->required();
    auto* mBad = minors->add_subcommand("bad", "minimal bad column intervals");
    mBad->add_option("file", inFile)->required();
    mBad->add_option("--row-lo", optRowLo)->required();
    mBad->add_option("--row-hi", optRowHi)->required();
    mBad->add_option("--k", optK)->required();

    auto* sg = app.add_subcommand("semigrid", "regular semigrids");
    auto* sgGen = sg->add_subcommand("gen", "generate a regular semigrid or an encoded relation");
    sgGen->add_option("--scheme", optScheme)->required();
    sgGen->add_option("--m", optM)->required();
    sgGen->add_option("--n", optN)->required();
    sgGen->add_option("--cells", cellsFile, "cell list; produces the encoded substructure");
    auto* sgDec = sg->add_subcommand("decode", "decode an encoded relation");
    sgDec->add_option("file", inFile)->required();
    sgDec->add_option("--scheme", optScheme)->required();
    auto* sgCls = sg->add_subcommand("classify", "recognize a regular semigrid");
    sgCls->add_option("file", inFile)->required();
    auto* sgSch = sg->add_subcommand("schemes", "count or list schemes");
    sgSch->add_option("--sig", sigName, "graph, or comma-separated name:arity pairs");
    sgSch->add_flag("--list", listSchemes);

    auto* mc = app.add_subcommand("mc", "brute-force model checking");
    mc->add_option("--formula", formulaFile)->required();
    mc->add_option("--structure", inFile)->required();
    mc->add_option("--budget", optBudget, "quantifier depth budget");

    auto* census = app.add_subcommand("census", "hereditary-class growth counts");
    census->add_option("--forbid", forbidDir, "directory of .obs patterns");
    census->add_option("--n-max", optNMax)->required();

    auto* verify = app.add_subcommand("verify-seq", "verify a contraction sequence");
    verify->add_option("file", inFile)->required();
    verify->add_option("seq", seqFile)->required();

    auto* maxsg = app.add_subcommand("max-semigrid", "largest embedded regular semigrid");
    maxsg->add_option("file", inFile)->required();
    maxsg->add_option("--cap", optSgCap);

    auto* simp = app.add_subcommand("simplicity", "least k with the structure (k,k)-simple");
    simp->add_option("file", inFile)->required();

    (void)gsMode;
    (void)rowsSpec;

    std::function<void(CLI::App*)> enableFallthrough = [&](CLI::App* a) {
        a->fallthrough();
        for (auto* sub : a->get_subcommands({})) enableFallthrough(sub);
    };
    for (auto* sub : app.get_subcommands({})) enableFallthrough(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ofstream outFile;
    try {
        std::ostream& out = output_stream(outPath, outFile);
        if (*exact) {
            std::string data = slurp(inFile);
            OrderedStructure S = read_obs(data);
            auto res = twinwidth_exact(S, optCap);
            if (!seqOut.empty()) {
                std::ofstream sf(seqOut, std::ios::binary);
                sf << write_sequence(res.seq, res.width);
            }
            if (asJson) {
                Report r("tww-exact");
                r.input(inFile, data);
                r.j["config"]["cap"] = optCap;
                r.j["outcome"] = {{"width", res.width}};
                r.finish(out);
            } else {
                out << res.width << "\n";
            }
        } else if (*approx) {
            std::string data = slurp(inFile);
            OrderedStructure S = read_obs(data);
            auto res = approx_twinwidth(S);
            if (!seqOut.empty()) {
                std::ofstream sf(seqOut, std::ios::binary);
                sf << write_sequence(res.seq, res.redDegree);
            }
            if (asJson) {
                Report r("tww-approx");
                r.input(inFile, data);
                r.j["outcome"] = {{"kUsed", res.kUsed}, {"redDegree", res.redDegree}};
                r.finish(out);
            } else {
                out << "k " << res.kUsed << " red-degree " << res.redDegree << "\n";
            }
        } else if (*algo) {
            std::string data = slurp(inFile);
            OrderedStructure S = read_obs(data);
            AlgoOutcome res = algo_cor(S, optK, optT);
            if (std::holds_alternative<ContractionSequence>(res)) {
                const auto& seq = std::get<ContractionSequence>(res);
                int red = verify_contraction_sequence(S, seq);
                if (asJson) {
                    Report r("algo");
                    r.input(inFile, data);
                    r.j["config"] = {{"k", optK}, {"t", optT}};
                    r.j["outcome"] = {{"kind", "sequence"}, {"redDegree", red}};
                    r.finish(out);
                } else {
                    out << write_sequence(seq, red);
                }
            } else {
                const auto& w = std::get<MixedMinorWitness>(res);
                if (asJson) {
                    Report r("algo");
                    r.input(inFile, data);
                    r.j["config"] = {{"k", optK}, {"t", optT}};
                    r.j["outcome"] = {{"kind", "witness"}, {"witness", witness_to_json(w)}};
                    r.finish(out);
                } else {
                    out << mixed_witness_json(w) << "\n";
                }
            }
        } else if (*mGrid) {
            std::string data = slurp(inFile);
            std::vector<std::string> lines;
            std::istringstream in(data);
            std::string line;
            while (std::getline(in, line))
                if (!line.empty()) lines.push_back(line);
            TypeMatrix M = TypeMatrix::from01(lines);
            auto res = find_grid_minor(M, optT);
            json j{{"exhaustive", res.exhaustive}};
            j["witness"] = res.witness ? witness_to_json(*res.witness) : json(nullptr);
            out << j.dump(2) << "\n";
        } else if (*mMixed) {
            std::string data = slurp(inFile);
            OrderedStructure S = read_obs(data);
            TypeMatrix M = TypeMatrix::adjacency(S);
            auto res = find_mixed_minor(M, optK, optT);
            json j{{"exhaustive", res.exhaustive}};
            j["witness"] = res.witness ? witness_to_json(*res.witness) : json(nullptr);
            out << j.dump(2) << "\n";
        } else if (*mBad) {
            std::string data = slurp(inFile);
            OrderedStructure S = read_obs(data);
            TypeMatrix M = TypeMatrix::adjacency(S);
            json j = json::array();
            for (const auto& bi : minimal_bad_intervals(M, optRowLo, optRowHi, optK))
                j.push_back({{"colLo", bi.colLo},
                             {"colHi", bi.colHi},
                             {"distinctRows", bi.distinctRows}});
            out << j.dump(2) << "\n";
        } else if (*sgGen) {
            GraphScheme sch = GraphScheme::from_id(optScheme);
            OrderedStructure S = cellsFile.empty()
                                     ? generate_semigrid(sch, optM, optN)
                                     : generate_GS(sch, optM, optN, read_cells(cellsFile));
            out << write_obs(S);
        } else if (*sgDec) {
            std::string data = slurp(inFile);
            OrderedStructure S = read_obs(data);
            GSDecoding dec = decode_GS(S, GraphScheme::from_id(optScheme));
            if (asJson) {
                json cells = json::array();
                for (auto [i, j2] : dec.cells) cells.push_back({i, j2});
                json j{{"m", dec.m}, {"n", dec.n}, {"cells", cells}};
                out << j.dump(2) << "\n";
            } else {
                out << "m " << dec.m << " n " << dec.n << "\n";
                for (auto [i, j2] : dec.cells) out << i << " " << j2 << "\n";
            }
        } else if (*sgCls) {
            std::string data = slurp(inFile);
            OrderedStructure S = read_obs(data);
            auto cls = classify_regular_semigrid(S);
            if (!cls) {
                out << "none\n";
            } else if (std::holds_alternative<GraphClassification>(*cls)) {
                const auto& g = std::get<GraphClassification>(*cls);
                out << "scheme " << g.scheme.id() << " m " << g.m << " n " << g.n << "\n";
            } else {
                const auto& g = std::get<GeneralClassification>(*cls);
                out << "general m " << g.m << " n " << g.n << "\n";
            }
        } else if (*sgSch) {
            Signature sig = Signature::graph();
            if (sigName != "graph") {
                std::vector<SymbolDecl> symbols;
                std::istringstream in(sigName);
                std::string tok;
                while (std::getline(in, tok, ',')) {
                    auto colon = tok.rfind(':');
                    symbols.push_back({tok.substr(0, colon), std::stoi(tok.substr(colon + 1))});
                }
                sig = Signature(symbols);
            }
            SchemeList schemes = enumerate_schemes(sig);
            out << schemes.count() << "\n";
            if (listSchemes && schemes.graphCase)
                for (const auto& sch : schemes.graph) out << sch.id() << "\n";
        } else if (*mc) {
            std::string fdata = slurp(formulaFile);
            std::string sdata = slurp(inFile);
            Formula phi = parse_formula(fdata);
            OrderedStructure S = read_obs(sdata);
            Assignment asg;
            bool value = eval(S, phi, asg, {.maxQuantifierDepth = optBudget});
            if (asJson) {
                Report r("mc");
                r.input(formulaFile, fdata);
                r.input(inFile, sdata);
                r.j["config"]["budget"] = optBudget;
                r.j["outcome"] = {{"value", value}};
                r.finish(out);
            } else {
                out << (value ? "true" : "false") << "\n";
            }
        } else if (*census) {
            ForbiddenSet F;
            if (!forbidDir.empty()) {
                namespace fs = std::filesystem;
                std::vector<fs::path> files;
                for (const auto& entry : fs::directory_iterator(forbidDir))
                    if (entry.path().extension() == ".obs") files.push_back(entry.path());
                std::sort(files.begin(), files.end());
                for (const auto& p : files) F.patterns.push_back(read_obs(slurp(p.string())));
            }
            EnumOptions opts;
            opts.threads = thread_count();
            out << "n,count,millis\n";
            for (int n = 0; n <= optNMax; ++n) {
                auto start = std::chrono::steady_clock::now();
                BigInt count = enumerate_avoiding(F, n, opts);
                auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
                out << n << "," << count.str() << "," << ms << "\n";
            }
        } else if (*verify) {
            std::string data = slurp(inFile);
            OrderedStructure S = read_obs(data);
            ContractionSequence seq = read_sequence(slurp(seqFile));
            out << verify_contraction_sequence(S, seq) << "\n";
        } else if (*maxsg) {
            OrderedStructure S = read_obs(slurp(inFile));
            out << max_semigrid(S, optSgCap) << "\n";
        } else if (*simp) {
            OrderedStructure S = read_obs(slurp(inFile));
            out << simplicity(S) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
