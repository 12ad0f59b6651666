#include "isacbeam/conic/solver.hpp"
#include <nlohmann/json.hpp>
#include <fstream>
#include <cstdio>
using namespace isacbeam; using namespace isacbeam::conic;
int main(int argc, char** argv) {
  std::ifstream f(argv[1]);
  nlohmann::json cases; f >> cases;
  for (size_t i = 0; i < cases.size(); ++i) {
    auto& cs = cases[i];
    int n = cs["n"], p = cs["p"];
    StandardForm sf;
    sf.dims.l = cs["l"];
    for (auto v : cs["q"]) sf.dims.q.push_back(v);
    for (auto v : cs["s"]) sf.dims.s.push_back(v);
    int m = sf.dims.dim();
    sf.c.resize(n); sf.b.resize(p); sf.h.resize(m);
    sf.A.resize(p, n); sf.G.resize(m, n);
    for (int k = 0; k < n; ++k) sf.c(k) = cs["c"][k];
    for (int k = 0; k < p; ++k) sf.b(k) = cs["b"][k];
    for (int k = 0; k < m; ++k) sf.h(k) = cs["h"][k];
    for (int r = 0; r < p; ++r) for (int k = 0; k < n; ++k) sf.A(r,k) = cs["A"][r*n+k];
    for (int r = 0; r < m; ++r) for (int k = 0; k < n; ++k) sf.G(r,k) = cs["G"][r*n+k];
    auto res = solve(sf);
    std::printf("%zu %s %.12e %d %.2e %.2e %.2e\n", i, to_string(res.status).c_str(),
                res.objective, res.iterations, res.primal_resid, res.dual_resid, res.gap);
  }
  return 0;
}
