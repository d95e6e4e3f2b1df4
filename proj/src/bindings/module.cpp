#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "interpeval/config.hpp"
#include "interpeval/corpus.hpp"
#include "interpeval/error.hpp"
#include "interpeval/judge.hpp"
#include "interpeval/ratings.hpp"
#include "interpeval/similarity.hpp"
#include "interpeval/stats.hpp"
#include "interpeval/study.hpp"

namespace py = pybind11;

namespace {

py::dict summary_to_dict(const interpeval::FiveNumberSummary& s) {
  py::dict d;
  d["median"] = s.median;
  d["q1"] = s.q1;
  d["q3"] = s.q3;
  d["iqr"] = s.iqr;
  d["whisker_low"] = s.whisker_low;
  d["whisker_high"] = s.whisker_high;
  d["outliers"] = s.outliers;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reference-free accuracy scoring for simultaneous interpretation";
  m.attr("__version__") = std::string(interpeval::kVersion);

  py::register_exception<interpeval::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<interpeval::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<interpeval::BackendError>(m, "BackendError", PyExc_RuntimeError);

  m.def(
      "cosine",
      [](const std::vector<double>& u, const std::vector<double>& v) {
        return interpeval::cosine({u}, {v});
      },
      py::arg("u"), py::arg("v"),
      "Cosine similarity of two vectors, clamped to [-1, 1].");

  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto result = interpeval::pearson(x, y);
        return py::make_tuple(result.r, result.n);
      },
      py::arg("x"), py::arg("y"),
      "Pearson correlation as (r, n); needs n >= 3 and nonconstant inputs.");

  m.def(
      "fleiss_kappa",
      [](const std::vector<std::vector<int>>& counts) {
        const auto result = interpeval::fleiss_kappa(counts);
        py::dict d;
        d["kappa"] = result.kappa;
        d["n_items"] = result.n_items;
        d["n_raters"] = result.n_raters;
        d["n_categories"] = result.n_categories;
        return d;
      },
      py::arg("counts"),
      "Fleiss' kappa over an item x category count matrix with equal row sums.");

  m.def(
      "five_number",
      [](const std::vector<double>& values) {
        return summary_to_dict(interpeval::five_number(values));
      },
      py::arg("values"),
      "Median, quartiles, Tukey whiskers and outliers (type-7 quantiles).");

  m.def(
      "parse_score",
      [](const std::string& raw) { return interpeval::parse_score(raw); },
      py::arg("raw"), "First-digit-run 1..5 judge score parser.");

  m.def(
      "default_prompt",
      [](const std::string& source, const std::string& target) {
        return interpeval::build_prompt(interpeval::default_prompt_template(), source,
                                        target);
      },
      py::arg("source"), py::arg("target"),
      "The built-in judge prompt with the pair substituted.");

  m.def(
      "validate_corpus",
      [](const std::filesystem::path& path) {
        const auto corpus = interpeval::load_corpus(path);
        py::dict d;
        d["speeches"] = corpus.speeches.size();
        d["segments"] = corpus.segments.size();
        return d;
      },
      py::arg("path"), "Loads and fully validates a corpus; raises on violations.");

  m.def(
      "corpus_stats",
      [](const std::filesystem::path& path) {
        const auto stats = interpeval::corpus_stats(interpeval::load_corpus(path));
        py::dict d;
        d["distinct_source_segments"] = stats.distinct_source_segments;
        d["distinct_source_tokens"] = stats.distinct_source_tokens;
        d["mean_source_segment_length"] = stats.mean_source_segment_length;
        py::dict per_kind;
        for (const auto& [kind, totals] : stats.totals_per_kind) {
          py::dict t;
          t["segments"] = totals.segments;
          t["source_tokens"] = totals.source_tokens;
          t["target_tokens"] = totals.target_tokens;
          per_kind[interpeval::to_string(kind)] = t;
        }
        d["per_kind"] = per_kind;
        return d;
      },
      py::arg("path"), "Token and segment totals for a corpus file.");

  m.def(
      "ratings_kappa",
      [](const std::filesystem::path& path, const std::string& granularity,
         const std::string& dimension) {
        const auto table = interpeval::load_ratings(path);
        const auto parsed_granularity = interpeval::parse_granularity(granularity);
        if (!parsed_granularity) {
          throw interpeval::ConfigError("unknown granularity \"" + granularity + "\"");
        }
        const auto parsed_dimension = interpeval::parse_dimension(dimension);
        if (!parsed_dimension) {
          throw interpeval::ConfigError("unknown dimension \"" + dimension + "\"");
        }
        const auto matrix = interpeval::equalize_rater_counts(
            interpeval::rating_matrix(table, *parsed_granularity, *parsed_dimension));
        std::vector<std::vector<int>> counts;
        counts.reserve(matrix.counts.size());
        for (const auto& row : matrix.counts) {
          counts.emplace_back(row.begin(), row.end());
        }
        const auto result = interpeval::fleiss_kappa(counts);
        py::dict d;
        d["kappa"] = result.kappa;
        d["n_items"] = result.n_items;
        d["n_raters"] = result.n_raters;
        d["n_categories"] = result.n_categories;
        d["excluded_items"] = matrix.excluded.size();
        return d;
      },
      py::arg("path"), py::arg("granularity") = "segment",
      py::arg("dimension") = "accuracy",
      "Inter-rater agreement over a ratings CSV file.");

  m.def(
      "run_study",
      [](const std::filesystem::path& config_path,
         const std::optional<std::filesystem::path>& output_dir,
         std::optional<std::uint64_t> seed) {
        auto config = interpeval::load_study_config(config_path);
        if (output_dir) {
          config.output_dir = *output_dir;
        }
        if (seed) {
          config.seed = *seed;
        }
        const auto result = interpeval::run_study(config);
        std::size_t ok = 0;
        for (const auto& record : result.correlations) {
          if (record.r) {
            ++ok;
          }
        }
        py::dict d;
        d["matrix_rows"] = result.matrix.rows.size();
        d["omissions"] = result.matrix.omissions.size();
        d["correlation_cells"] = result.correlations.size();
        d["ok_cells"] = ok;
        d["output_dir"] = config.output_dir.string();
        d["notes"] = result.notes;
        py::dict methods;
        for (const auto& summary : result.method_summaries) {
          methods[summary.method_id.c_str()] = summary_to_dict(summary.summary);
        }
        d["method_summaries"] = methods;
        return d;
      },
      py::arg("config_path"), py::arg("output_dir") = std::nullopt,
      py::arg("seed") = std::nullopt,
      "Runs the full scoring study described by a config file.");
}
