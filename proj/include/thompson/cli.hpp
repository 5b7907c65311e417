#pragma once

// Command-line front end. Exit codes: 0 success, 1 a check found
// violations, 2 bad usage or input, 3 resource limit, 4 internal error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "thompson/classify.hpp"
#include "thompson/diagrams.hpp"
#include "thompson/errors.hpp"
#include "thompson/folner.hpp"
#include "thompson/words.hpp"

namespace thompson::cli {

enum ExitCode : int {
  ok = 0,
  check_failed = 1,
  bad_input = 2,
  resource_exhausted = 3,
  internal_error = 4,
};

namespace detail {

  // Failure to open an output file.
  struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  inline std::string join(std::vector<std::string> const& parts) {
    std::string out;
    for (auto const& p : parts) {
      if (!out.empty()) {
        out += ' ';
      }
      out += p;
    }
    return out;
  }

  template <typename Writer>
  void write_file(std::string const& path, Writer&& write) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      throw OutputError("cannot open " + path + " for writing");
    }
    write(file);
    if (!file) {
      throw OutputError("failed writing " + path);
    }
  }

  inline std::vector<ClassLabel> parse_class_list(std::string const& text) {
    std::vector<ClassLabel> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      auto c = parse_class_label(item);
      if (!c) {
        throw ParseError("unknown class label", item, 0);
      }
      out.push_back(*c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  inline std::string drop_label(std::size_t n,
                                std::vector<ClassLabel> const& dropped) {
    std::string label = "ball" + std::to_string(n) + "-drop";
    for (std::size_t i = 0; i < dropped.size(); ++i) {
      label += (i == 0 ? "-" : "+") + to_string(dropped[i]);
    }
    return label;
  }

}  // namespace detail

// Runs one command. `args` excludes the program name.
inline int run(std::vector<std::string> const& args,
               std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Thompson's group F: normal forms, canonical diagrams, and "
               "the seven-class partition",
               "thompson"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  BallOptions ball_options;
  app.add_option("--seed", seed, "Seed for randomized checks");
  app.add_option("--limit", ball_options.element_limit,
                 "Maximum number of elements held by a ball");
  app.add_option("--workers", ball_options.workers,
                 "Threads used to expand ball frontiers")
      ->check(CLI::Range(1U, 256U));

  std::vector<std::string> word_parts;
  std::string dot_path, csv_path, drop_list, check_kind;
  std::size_t radius = 0;
  std::size_t samples = 1000;

  auto* reduce = app.add_subcommand("reduce", "Print the normal form");
  reduce->add_option("word", word_parts, "Word such as \"x1 x3 x1^-1\"")
      ->required();

  auto* classify = app.add_subcommand("classify", "Print the class M1..M7");
  classify->add_option("word", word_parts, "Word")->required();

  auto* diagram = app.add_subcommand("diagram",
                                     "Print the canonical diagram");
  diagram->add_option("word", word_parts, "Word")->required();
  diagram->add_option("--dot", dot_path, "Write a DOT rendering");

  auto* ball_cmd = app.add_subcommand("ball", "Enumerate the ball of radius n");
  ball_cmd->add_option("n", radius, "Radius")->required();
  ball_cmd->add_option("--csv", csv_path, "Write element,length,class rows");

  auto* density = app.add_subcommand("density",
                                     "Exact density of the ball of radius n");
  density->add_option("n", radius, "Radius")->required();
  density->add_option("--drop", drop_list,
                      "Comma-separated classes to remove first");

  auto* histogram = app.add_subcommand("histogram",
                                       "Class counts over the ball");
  histogram->add_option("n", radius, "Radius")->required();
  histogram->add_option("--csv", csv_path, "Write class,count rows");

  auto* check = app.add_subcommand("check", "Exhaustive finite checks");
  check->add_option("kind", check_kind, "partition, closures or lemma-del")
      ->required()
      ->check(CLI::IsMember({"partition", "closures", "lemma-del"}));
  check->add_option("--radius", radius, "Ball radius")->required();
  check->add_option("--samples", samples, "Random instances for lemma-del");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (CLI::CallForHelp const&) {
    out << app.help();
    return ok;
  } catch (CLI::CallForAllHelp const&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (CLI::ParseError const& e) {
    err << "error: usage: " << e.what() << '\n';
    return bad_input;
  }

  try {
    if (reduce->parsed()) {
      out << format(reduce_to_normal_form(parse_word(detail::join(word_parts))))
          << '\n';
    } else if (classify->parsed()) {
      auto const g = reduce_to_normal_form(parse_word(detail::join(word_parts)));
      out << to_string(class_of(g)) << '\n';
    } else if (diagram->parsed()) {
      auto const g = reduce_to_normal_form(parse_word(detail::join(word_parts)));
      auto const d = nf_to_diagram(g);
      out << format_diagram(d) << '\n';
      if (!dot_path.empty()) {
        detail::write_file(dot_path,
                           [&](std::ostream& f) { write_diagram_dot(f, d); });
      }
    } else if (ball_cmd->parsed()) {
      auto const layers = ball_layers(radius, ball_options);
      out << "radius,sphere,ball\n";
      std::size_t total = 0;
      for (std::size_t r = 0; r < layers.size(); ++r) {
        total += layers[r].size();
        out << r << ',' << layers[r].size() << ',' << total << '\n';
      }
      if (!csv_path.empty()) {
        detail::write_file(csv_path,
                           [&](std::ostream& f) { write_ball_csv(f, layers); });
      }
    } else if (density->parsed()) {
      ElementSet const s = ball(radius, ball_options);
      std::vector<DensityRow> rows{
          {"ball" + std::to_string(radius), subgraph_density(s)}};
      if (!drop_list.empty()) {
        auto const dropped = detail::parse_class_list(drop_list);
        ElementSet const kept = drop_classes(s, dropped);
        rows.push_back({detail::drop_label(radius, dropped),
                        kept.empty() ? SubgraphStats{} : subgraph_density(kept)});
      }
      write_density_csv(out, rows);
    } else if (histogram->parsed()) {
      auto const h = class_histogram(ball(radius, ball_options));
      write_histogram_csv(out, h);
      if (!csv_path.empty()) {
        detail::write_file(csv_path,
                           [&](std::ostream& f) { write_histogram_csv(f, h); });
      }
    } else if (check->parsed()) {
      ElementSet const s = ball(radius, ball_options);
      std::vector<std::string> violations;
      std::size_t checked = s.size();
      if (check_kind == "partition") {
        for (auto const& v : check_partition(s)) {
          violations.push_back(v.to_string());
        }
      } else if (check_kind == "closures") {
        for (auto const& v : check_closures(s)) {
          violations.push_back(v.to_string());
        }
      } else {
        std::mt19937_64 rng(seed);
        checked = samples;
        for (std::size_t i = 0; i < samples; ++i) {
          auto const [sub, removed] = random_deletion_instance(s, rng);
          auto const r = deletion_bound_check(sub, removed);
          if (!r.holds) {
            std::ostringstream line;
            line << "sample " << i << ": |S|=" << sub.size()
                 << " |K|=" << removed.size() << " density " << r.after
                 << " below bound " << r.bound
                 << (r.corrected_holds ? "" : " and below corrected bound");
            violations.push_back(line.str());
          }
        }
      }
      for (auto const& v : violations) {
        out << v << '\n';
      }
      out << check_kind << ": checked " << checked << ", "
          << violations.size() << " violations\n";
      return violations.empty() ? ok : check_failed;
    }
  } catch (ParseError const& e) {
    err << "error: parse: " << e.what() << '\n';
    return bad_input;
  } catch (PreconditionError const& e) {
    err << "error: precondition: " << e.what() << '\n';
    return bad_input;
  } catch (detail::OutputError const& e) {
    err << "error: output: " << e.what() << '\n';
    return bad_input;
  } catch (ResourceError const& e) {
    err << "error: resource: " << e.what() << '\n';
    return resource_exhausted;
  } catch (std::bad_alloc const&) {
    err << "error: resource: out of memory\n";
    return resource_exhausted;
  } catch (std::exception const& e) {
    err << "error: internal: " << e.what() << '\n';
    return internal_error;
  }
  return ok;
}

}  // namespace thompson::cli
