#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dsf/corpus.hpp"
#include "dsf/pipeline.hpp"
#include "oracle.hpp"

namespace test {

std::filesystem::path data(const std::string& name);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& contents);

dsf::Sentence sentence(const std::string& text, const std::string& id = "s");

// Runs a shell command; returns its exit status.
int run(const std::string& command);

// Ingested sentences of a synthetic corpus (split and normalized).
std::vector<dsf::Sentence> synth_sentences(std::size_t n, std::uint64_t seed);

// A synthetic corpus with its resources loaded twice: by the library and by
// the oracle.
struct SynthWorld {
  TempDir dir;
  std::vector<dsf::Sentence> sentences;
  dsf::AnnotationResources resources;
  oracle::Lexicon lexicon;
  std::vector<oracle::Gazetteer> gazetteers;

  SynthWorld(std::size_t n, std::uint64_t seed);
  std::vector<dsf::LabeledExample> annotate() const;
  std::vector<dsf::LabeledExample> annotate_oracle() const;
};

}  // namespace test
