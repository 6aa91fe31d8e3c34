// Thin bindings; structured values cross the boundary as JSON text and are
// decoded in dsf/__init__.py.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "dsf/dedup.hpp"
#include "dsf/error.hpp"
#include "dsf/io.hpp"
#include "dsf/metrics.hpp"
#include "dsf/pipeline.hpp"

namespace py = pybind11;
using namespace dsf;

namespace {

Label label_arg(const std::string& s) {
  const auto l = parse_label(s);
  if (!l) throw DataError("unknown label '" + s + "'");
  return *l;
}

std::string examples_json(const std::vector<LabeledExample>& xs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& x : xs) arr.push_back(io::to_json(x));
  return arr.dump();
}

std::vector<LabeledExample> examples_arg(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(io::example_from_json(j[i], "examples[" + std::to_string(i) + "]"));
  }
  return out;
}

class Annotator {
 public:
  Annotator(const std::string& lexicon,
            const std::vector<std::pair<std::string, std::string>>& gazetteers)
      : resources_(load_resources(options(lexicon, gazetteers))) {}

  std::string annotate(const std::string& id, const std::string& text) const {
    return examples_json(resources_.annotate(make_sentence(id, normalize(text))));
  }

 private:
  static ResourceOptions options(const std::string& lexicon,
                                 const std::vector<std::pair<std::string, std::string>>& gazetteers) {
    ResourceOptions ro;
    ro.lexicon = lexicon;
    for (const auto& [path, topic] : gazetteers) ro.gazetteers.push_back({path, topic});
    return ro;
  }

  AnnotationResources resources_;
};

}  // namespace

PYBIND11_MODULE(_dsf, m) {
  m.attr("__version__") = kToolVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.def("normalize", [](const std::string& text) { return normalize(text); });

  py::class_<Annotator>(m, "Annotator")
      .def(py::init<const std::string&, const std::vector<std::pair<std::string, std::string>>&>(),
           py::arg("lexicon"), py::arg("gazetteers"))
      .def("annotate_json", &Annotator::annotate, py::arg("id"), py::arg("text"));

  m.def(
      "dedup_json",
      [](const std::string& examples, double threshold, std::uint64_t seed) {
        DedupConfig cfg;
        cfg.threshold = threshold;
        cfg.rng_seed = seed;
        return examples_json(dedup(examples_arg(examples), cfg));
      },
      py::arg("examples"), py::arg("threshold"), py::arg("seed"));

  m.def(
      "score_json",
      [](const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
        std::vector<Label> g, p;
        for (const auto& s : gold) g.push_back(label_arg(s));
        for (const auto& s : pred) p.push_back(label_arg(s));
        const auto c = confusion(g, p);
        return io::to_json(score(c), c).dump();
      },
      py::arg("gold"), py::arg("pred"));

  m.def(
      "make_plan_json",
      [](const std::string& variant, const std::map<std::string, std::string>& files) {
        PlanPaths paths;
        for (const auto& [k, v] : files) {
          if (k == "additional") paths.additional = v;
          else if (k == "general") paths.general = v;
          else if (k == "thematic") paths.thematic = v;
          else if (k == "benchmark_train") paths.benchmark_train = v;
          else if (k == "mixed") paths.mixed = v;
          else throw ConfigError("unknown plan dataset '" + k + "'");
        }
        return io::to_json(make_plan(variant, paths)).dump();
      },
      py::arg("variant"), py::arg("files"));

  m.def(
      "run_json",
      [](const std::filesystem::path& config, const std::vector<std::string>& overrides) {
        const auto cfg = load_config(config, overrides);
        py::gil_scoped_release release;
        return run(cfg).dump();
      },
      py::arg("config"), py::arg("overrides") = std::vector<std::string>{});
}
