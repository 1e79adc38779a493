// Grid calibration of (mu, kappa) for the DCHE check. Writes the JSON record
// kept in data/dche_calibration.json.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "josephson/monodromy.hpp"

using namespace josephson;

int main(int argc, char** argv) {
  CLI::App app{"DCHE (mu, kappa) grid calibration"};
  double a = 0.3, b = 0.7, omega = 1.5;
  std::string out = "dche_calibration.json";
  app.add_option("--a", a);
  app.add_option("--b", b);
  app.add_option("--omega", omega);
  app.add_option("--out", out);
  CLI11_PARSE(app, argc, argv);

  const std::vector<cplx> z{{1.5, 0.0}, {1.0, 1.0}, {2.0, -0.5}};
  std::vector<double> mu_grid;
  for (int i = -20; i <= 20; ++i) mu_grid.push_back(0.1 * i);
  const std::vector<double> kappa_grid{0.25, 0.5, 1.0, 2.0, 4.0};

  nlohmann::ordered_json doc;
  doc["a"] = a;
  doc["b"] = b;
  doc["omega"] = omega;
  doc["samples"] = {{1.5, 0.0}, {1.0, 1.0}, {2.0, -0.5}};
  doc["mu_grid"] = {mu_grid.front(), mu_grid.back(), mu_grid.size()};
  doc["kappa_grid"] = kappa_grid;
  for (auto [key, factor] : {std::pair{"system_a_4a", 4.0}, std::pair{"system_a_a", 1.0}}) {
    DcheParams p;
    p.a = a;
    p.b = b;
    p.omega = omega;
    p.system_a = factor * a;
    const DcheCalibration c = calibrate_dche(p, z, mu_grid, kappa_grid);
    doc[key] = {{"system_a", factor * a}, {"mu", c.mu}, {"kappa", c.kappa}, {"residual", c.residual}};
    std::cerr << key << ": mu=" << c.mu << " kappa=" << c.kappa << " residual=" << c.residual << '\n';
  }
  std::ofstream(out) << doc.dump(2) << '\n';
  return 0;
}
