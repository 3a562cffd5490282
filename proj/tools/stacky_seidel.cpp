#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stacky_seidel/driver.hpp"

int main(int argc, char** argv) {
  using namespace stacky_seidel;
  CLI::App app{"Seidel elements of weak Fano toric Deligne-Mumford stacks"};
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::string caps, format = "text";
  std::string window;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "fan description (JSON)")->required();
    sub->add_option("--j", cfg.j, "index over rays then extension vectors, 1-based");
    sub->add_option("--caps", caps, "exponent caps, e.g. y1=2,y2=3/2,y0=1");
    sub->add_option("--z-window", window, "z powers shown, e.g. -4,0");
    sub->add_option("--budget", cfg.budget, "enumeration grid budget");
    sub->add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    sub->add_flag("--allow-non-weak-fano", cfg.allow_non_weak_fano, "accept models that fail the weak Fano check");
  };
  common(app.add_subcommand("describe", "boxes, anticones, divisor classes, rho"));
  common(app.add_subcommand("ifunction", "I-function of the model or of a bundle (--j)"));
  common(app.add_subcommand("mirror", "mirror map and twisted part"));
  common(app.add_subcommand("batyrev", "Batyrev elements by both routes"));
  common(app.add_subcommand("seidel", "Seidel elements with every identity checked"));
  common(app.add_subcommand("verify", "all checks for every index"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.format = format == "structured" ? Format::structured : Format::text;
  try {
    if (!caps.empty()) cfg.caps = parse_caps_option(caps);
    if (!window.empty()) {
      const auto comma = window.find(',');
      if (comma == std::string::npos) throw Error(ErrorKind::parse_error, "--z-window needs lo,hi");
      cfg.z_window = {std::stoi(window.substr(0, comma)), std::stoi(window.substr(comma + 1))};
    }
  } catch (const Error& e) {
    write_error(e, cfg.format, std::cerr);
    return 3;
  } catch (const std::exception&) {
    write_error(Error(ErrorKind::parse_error, "bad --z-window"), cfg.format, std::cerr);
    return 3;
  }
  return run(cfg, std::cout, std::cerr);
}
