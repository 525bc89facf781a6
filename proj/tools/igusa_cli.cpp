// igusa: command-line front end.
//   igusa <command> (--input PATH | --inline JSON) [--format text|json] [--K N] [--precision k]
// Exit status: 0 success, 1 bad input or unsupported case, 2 verification failure.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "igusa/commands.hpp"

using namespace igusa;

namespace {

struct Options {
  std::string input;
  std::string inline_json;
  std::string format = "text";
  int K = 0;
  int precision = 0;
};

std::string read_input(const Options& o) {
  if (!o.inline_json.empty()) return o.inline_json;
  if (o.input.empty() || o.input == "-")
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  std::ifstream in(o.input);
  if (!in) throw ParseError("cannot read " + o.input);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Igusa local zeta functions of quadratic polynomials over p-adic rings"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "Jordan decomposition of the quadratic part"},
      {"reduce", "strongly isospectral standard form"},
      {"zeta", "closed-form Igusa zeta function"},
      {"poles", "reduced denominator of the zeta function of a quadratic form"},
      {"poincare", "Poincare series"},
      {"gf", "p-adic generating function"},
      {"verify", "closed form against the counting oracle"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* in = sub->add_option("--input", opt.input, "JSON file ('-' for stdin)");
    auto* inl = sub->add_option("--inline", opt.inline_json, "JSON object on the command line");
    in->excludes(inl);
    sub->add_option("--format", opt.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--K", opt.K, "series length or level (at most 64)")->check(CLI::Range(1, 64));
    sub->add_option("--precision", opt.precision, "input precision k");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const bool json = opt.format == "json";

  auto fail = [&](const std::string& kind, const std::string& message) {
    if (json)
      std::cout << dump(Json{{"error", {{"type", kind}, {"message", message}}}});
    else
      std::cerr << "error: " << message << "\n";
    return 1;
  };

  try {
    const QuadPoly Q =
        parse_polynomial(read_input(opt), opt.precision > 0 ? std::optional<int>(opt.precision) : std::nullopt);
    Output out = run_command(command, Q, opt.K);
    if (json) {
      out.json["command"] = command;
      std::cout << dump(out.json);
    } else {
      std::cout << out.text;
    }
    return out.status;
  } catch (const ParseError& e) {
    return fail("parse", e.what());
  } catch (const DomainError& e) {
    return fail("domain", e.what());
  }
}
