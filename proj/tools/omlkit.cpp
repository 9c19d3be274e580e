#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "omlkit/bsa.hpp"
#include "omlkit/builders.hpp"
#include "omlkit/error.hpp"
#include "omlkit/iso.hpp"
#include "omlkit/reconstruct.hpp"

namespace {

using namespace omlkit;

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file '" + path + "'");
  out << text;
}

Lattice load_input(const std::string& input, Validate mode = Validate::Full) {
  namespace fs = std::filesystem;
  if (fs::exists(input)) {
    std::string text = read_text_file(input);
    if (input.size() >= 3 && input.rfind(".gd") == input.size() - 3)
      return from_greechie(parse_greechie(text));
    return parse_oml(text, mode);
  }
  return build_family(input);
}

struct CorpusEntry {
  std::string name;
  std::string expr;
};

struct CorpusFile {
  std::vector<CorpusEntry> entries;
  int seeds = 10;
};

CorpusFile parse_corpus(const std::string& text) {
  CorpusFile cf;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "seeds") {
      if (!(ls >> cf.seeds) || cf.seeds < 1)
        throw ParseError("line " + std::to_string(number) + ": bad seeds value");
      continue;
    }
    std::string rest;
    std::getline(ls, rest);
    std::size_t start = rest.find_first_not_of(" \t");
    if (start == std::string::npos)
      throw ParseError("line " + std::to_string(number) + ": entry '" + first +
                       "' has no family expression");
    cf.entries.push_back({first, rest.substr(start)});
  }
  if (cf.entries.empty()) throw InputError("corpus file has no entries");
  return cf;
}

struct CorpusRow {
  std::string name;
  int size = 0;
  int nodes = 0;
  std::map<char, int> cases;
  bool ok = false;
  std::string verdict;
  double ms = 0;
};

int run_corpus(const std::string& spec_path, int seeds_override, int jobs,
               const std::string& outdir, const Budget& budget) {
  CorpusFile cf = parse_corpus(read_text_file(spec_path));
  const int seeds = seeds_override > 0 ? seeds_override : cf.seeds;
  if (!outdir.empty()) std::filesystem::create_directories(outdir);

  std::vector<CorpusRow> rows(cf.entries.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= cf.entries.size()) return;
      CorpusRow& row = rows[i];
      row.name = cf.entries[i].name;
      auto t0 = std::chrono::steady_clock::now();
      try {
        Lattice l = build_family(cf.entries[i].expr);
        row.size = l.size();
        row.ok = true;
        for (int s = 1; s <= seeds; ++s) {
          RoundtripReport rep = check_reconstruction(l, std::uint64_t(s), {}, budget);
          row.nodes = rep.node_count;
          if (s == 1) row.cases = rep.case_hist;
          if (!rep.isomorphic) {
            row.ok = false;
            row.verdict = rep.stage_failure
                              ? "failure (" + rep.stage + ")"
                              : "not isomorphic (seed " + std::to_string(s) + ")";
            break;
          }
        }
        if (row.ok) row.verdict = "isomorphic";
        if (!outdir.empty()) {
          std::string base = outdir + "/" + row.name;
          std::ofstream(base + ".oml", std::ios::binary) << serialize_oml(l);
          BsaPoset poset = enumerate_bsas(l, budget);
          std::ofstream(base + ".poset", std::ios::binary) << serialize_poset(poset);
        }
      } catch (const Error& e) {
        row.ok = false;
        row.verdict = std::string("error: ") + e.what();
      }
      row.ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
    }
  };
  int nthreads = std::max(1, std::min<int>(jobs, int(cf.entries.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::cout << std::left << std::setw(16) << "lattice" << std::right << std::setw(6)
            << "size" << std::setw(7) << "nodes" << std::setw(5) << "a" << std::setw(4)
            << "b" << std::setw(4) << "c" << std::setw(4) << "d"
            << "  " << std::left << std::setw(14) << "verdict" << std::right
            << std::setw(10) << "ms" << "\n";
  bool all_ok = true;
  int ok_count = 0;
  for (const auto& row : rows) {
    all_ok = all_ok && row.ok;
    ok_count += row.ok ? 1 : 0;
    auto cases = row.cases;
    std::cout << std::left << std::setw(16) << row.name << std::right << std::setw(6)
              << row.size << std::setw(7) << row.nodes << std::setw(5) << cases['a']
              << std::setw(4) << cases['b'] << std::setw(4) << cases['c'] << std::setw(4)
              << cases['d'] << "  " << std::left << std::setw(14) << row.verdict
              << std::right << std::setw(10) << std::fixed << std::setprecision(1)
              << row.ms << "\n";
  }
  std::cout << "corpus: " << ok_count << "/" << rows.size() << " isomorphic (seeds 1.."
            << seeds << ")\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite orthomodular lattices: Boolean-subalgebra posets and "
               "order-only reconstruction"};
  app.require_subcommand(1);
  Budget budget = Budget::from_env();

  std::string build_family_expr, build_out;
  auto* cmd_build = app.add_subcommand("build", "construct a lattice and emit .oml");
  cmd_build->add_option("--family", build_family_expr, "family expression")->required();
  cmd_build->add_option("-o,--output", build_out, "output file (default: stdout)");

  std::string verify_in;
  auto* cmd_verify = app.add_subcommand("verify", "check every axiom of a .oml file");
  cmd_verify->add_option("file", verify_in, "input .oml file")->required();

  std::string bsas_in, bsas_out;
  std::int64_t bsas_anon_seed = -1;
  auto* cmd_bsas =
      app.add_subcommand("bsas", "enumerate Boolean subalgebras and emit .poset");
  cmd_bsas->add_option("input", bsas_in, ".oml file or family expression")->required();
  cmd_bsas->add_option("-o,--output", bsas_out, "output file (default: stdout)");
  cmd_bsas->add_option("--anonymize", bsas_anon_seed,
                       "shuffle node ids with this seed and strip annotations");

  std::string rec_in, rec_out;
  auto* cmd_rec =
      app.add_subcommand("reconstruct", "rebuild a lattice from a .poset file");
  cmd_rec->add_option("file", rec_in, "input .poset file")->required();
  cmd_rec->add_option("-o,--output", rec_out, "output .oml file (default: stdout)");

  std::string rt_in;
  std::uint64_t rt_seed = 0;
  bool rt_no_gap = false;
  auto* cmd_rt = app.add_subcommand(
      "roundtrip", "enumerate, anonymize, reconstruct, and compare with the original");
  cmd_rt->add_option("input", rt_in, ".oml/.gd file or family expression")->required();
  cmd_rt->add_option("--seed", rt_seed, "anonymization seed (default 0)");
  cmd_rt->add_flag("--no-gap-rule", rt_no_gap,
                   "disable the atom-below-coatom relations between spiked owners");

  std::string corpus_spec, corpus_out;
  int corpus_seeds = 0;
  int corpus_jobs = int(std::thread::hardware_concurrency());
  auto* cmd_corpus = app.add_subcommand("corpus", "run the roundtrip over a corpus file");
  cmd_corpus->add_option("spec", corpus_spec, "corpus file")->required();
  cmd_corpus->add_option("--seeds", corpus_seeds, "seeds per lattice (overrides the file)");
  cmd_corpus->add_option("--jobs", corpus_jobs, "parallel workers");
  cmd_corpus->add_option("-o,--outdir", corpus_out, "write per-entry .oml/.poset here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_build->parsed()) {
      Lattice l = build_family(build_family_expr);
      write_or_print(build_out, serialize_oml(l));
      return 0;
    }
    if (cmd_verify->parsed()) {
      Lattice l = parse_oml(read_text_file(verify_in), Validate::Structural);
      VerifyReport rep = verify(l);
      std::cout << rep.to_string();
      std::cout << (rep.all_pass() ? "all axioms pass" : "verification failed") << "\n";
      return rep.all_pass() ? 0 : 1;
    }
    if (cmd_bsas->parsed()) {
      Lattice l = load_input(bsas_in);
      BsaPoset poset = enumerate_bsas(l, budget);
      std::map<int, int> by_dim;
      int cover_count = 0;
      for (int v = 0; v < poset.size(); ++v) {
        ++by_dim[poset.dim(v)];
        cover_count += int(poset.covers_up[v].size());
      }
      std::string text;
      if (bsas_anon_seed >= 0)
        text = serialize_poset(anonymize(poset, std::uint64_t(bsas_anon_seed)).poset);
      else
        text = serialize_poset(poset);
      write_or_print(bsas_out, text);
      std::ostream& info = bsas_out.empty() ? std::cerr : std::cout;
      info << "nodes: " << poset.size() << "\n";
      info << "covers: " << cover_count << "\n";
      for (auto [d, k] : by_dim) info << "dim " << d << ": " << k << "\n";
      return 0;
    }
    if (cmd_rec->parsed()) {
      AbstractPoset poset = parse_poset(read_text_file(rec_in));
      Reconstruction recon = reconstruct(poset);
      write_or_print(rec_out, serialize_oml(recon.lattice));
      std::ostream& info = rec_out.empty() ? std::cerr : std::cout;
      info << recon.report();
      return 0;
    }
    if (cmd_rt->parsed()) {
      Lattice l = load_input(rt_in);
      ReconstructOptions opts;
      opts.gap_rule = !rt_no_gap;
      RoundtripReport rep = check_reconstruction(l, rt_seed, opts, budget);
      std::cout << "input: " << rt_in << "\n" << rep.to_string();
      return rep.isomorphic ? 0 : 1;
    }
    if (cmd_corpus->parsed())
      return run_corpus(corpus_spec, corpus_seeds, corpus_jobs, corpus_out, budget);
  } catch (const ReconstructionError& e) {
    std::cerr << "error (" << e.stage << "): " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
