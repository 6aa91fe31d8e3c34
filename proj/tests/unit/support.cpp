#include "support.hpp"

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "dsf/synth.hpp"

namespace test {

namespace fs = std::filesystem;

fs::path data(const std::string& name) { return fs::path(DSF_TEST_DATA) / name; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("dsf-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& contents) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << contents;
}

dsf::Sentence sentence(const std::string& text, const std::string& id) {
  return dsf::make_sentence(id, text);
}

int run(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<dsf::Sentence> synth_sentences(std::size_t n, std::uint64_t seed) {
  dsf::synth::CorpusSpec spec;
  spec.sentences = n;
  spec.seed = seed;
  std::vector<dsf::Sentence> out;
  dsf::IngestOptions opts;
  dsf::IngestStats stats;
  dsf::synth::generate(spec, [&](const dsf::Document& doc) {
    for (auto& s : dsf::ingest_document(doc, opts, stats)) out.push_back(std::move(s));
  });
  return out;
}

namespace {

dsf::AnnotationResources synth_resources(const fs::path& dir) {
  dsf::synth::write_fixture(dir, {1, 1, 1});
  dsf::ResourceOptions opts;
  opts.lexicon = (dir / "lexicon.tsv").string();
  opts.gazetteers = {{(dir / "banks.tsv").string(), "banks"},
                     {(dir / "telecom.tsv").string(), "telecom"}};
  return dsf::load_resources(opts);
}

}  // namespace

SynthWorld::SynthWorld(std::size_t n, std::uint64_t seed)
    : sentences(synth_sentences(n, seed)),
      resources(synth_resources(dir.path())),
      lexicon(oracle::load_lexicon((dir / "lexicon.tsv").string())),
      gazetteers({oracle::load_gazetteer((dir / "banks.tsv").string(), "banks"),
                  oracle::load_gazetteer((dir / "telecom.tsv").string(), "telecom")}) {}

std::vector<dsf::LabeledExample> SynthWorld::annotate() const {
  std::vector<dsf::LabeledExample> out;
  for (const auto& s : sentences) {
    for (auto& e : resources.annotate(s)) out.push_back(std::move(e));
  }
  return out;
}

std::vector<dsf::LabeledExample> SynthWorld::annotate_oracle() const {
  std::vector<dsf::LabeledExample> out;
  for (const auto& s : sentences) {
    for (auto& e : oracle::annotate(s, lexicon, gazetteers)) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace test
