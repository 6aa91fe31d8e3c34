#include <CLI11.hpp>

#include <iostream>

#include "dsf/error.hpp"
#include "dsf/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic corpus with its lexicon and gazetteers"};
  dsf::synth::CorpusSpec spec;
  std::string dir;
  app.add_option("-o,--output", dir, "Output directory")->required();
  app.add_option("-n,--sentences", spec.sentences);
  app.add_option("--seed", spec.seed);
  app.add_option("--max-per-doc", spec.max_sentences_per_doc)->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  try {
    dsf::synth::write_fixture(dir, spec);
  } catch (const dsf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
