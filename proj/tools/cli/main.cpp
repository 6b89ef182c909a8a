// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <CLI11.hpp>
#include <magbloch/errors.hpp>
#include "commands.hpp"
#include "scenario.hpp"

int main(int argc, char **argv)
{
  CLI::App app{"Floquet-Bloch bands and Dirichlet-Neumann pencils of periodic magnetic "
               "Schroedinger operators"};
  app.require_subcommand(1);

  magbloch::cli::RunRequest request;
  std::string grid, mode, out;
  for (const char *name : {"validate", "bands", "scan", "pencil", "crosscheck"})
  {
    CLI::App *sub = app.add_subcommand(name);
    sub->add_option("config", request.config_path, "scenario config file")->required();
    auto *out_opt = sub->add_option("--out", out, "output directory");
    if (std::string(name) != "validate")
    {
      out_opt->required();
    }
    sub->add_option("--grid", grid, "grid sizes n1,n2,n3");
    sub->add_option("--mode", mode, "grid mode")->check(CLI::IsMember({"fiber", "slab"}));
  }
  CLI11_PARSE(app, argc, argv);

  request.command = app.get_subcommands().front()->get_name();
  try
  {
    if (!out.empty())
    {
      request.out_dir = out;
    }
    if (!grid.empty())
    {
      request.grid = magbloch::cli::ParseGridSizes(grid);
    }
    if (!mode.empty())
    {
      request.mode = magbloch::ParseGridMode(mode);
    }
  }
  catch (const magbloch::Error &e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return magbloch::cli::Run(request, std::cout, std::cerr);
}
